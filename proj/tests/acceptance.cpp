// Acceptance criteria: one PASS/FAIL line per criterion.
// Usage: acceptance <path to casimir-sc binary> <scratch directory>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "casimir_sc/cli.hpp"
#include "casimir_sc/constants.hpp"
#include "casimir_sc/lifshitz.hpp"
#include "casimir_sc/mattis_bardeen.hpp"

using namespace casimir_sc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Report {
  int failed = 0;
  void line(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string scratch = argc > 2 ? argv[2] : ".";
  Report rep;
  const MaterialParams au = gold();
  const MaterialParams pb = lead();
  const GapModel gap(pb.tc);
  const double two_delta0 = 2.0 * gap.delta0();
  const EngineConfig cfg;

  // 1. Shifted transition temperature.
  {
    RunConfig rc;
    rc.field_oe = 200.0;
    const auto t0 = Clock::now();
    const PointReport p = run_point(rc, false);
    const double dt = seconds_since(t0);
    const bool ok = std::abs(p.t_prime_c_K - 6.24) <= 0.01 && dt < 1e-3;
    rep.line(1, ok, "point T'_c at 200 Oe", fmt("T'_c = %.6f K, state resolution %.3g ms", p.t_prime_c_K, dt * 1e3));
  }

  // 2. Ideal-mirror oracle.
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double d : {50.0, 100.0, 200.0}) {
      const double v = free_energy(Surface::ideal_mirror(), Surface::ideal_mirror(), 0.01, d, cfg).value;
      const double exact = -kPi * kPi * PhysConstants::hbar_c / (720.0 * d * d * d);
      worst = std::max(worst, std::abs(v / exact - 1.0));
    }
    const double dt = seconds_since(t0);
    rep.line(2, worst < 1e-2 && dt < 10.0, "ideal-mirror oracle at 0.01 K",
             fmt("max rel deviation %.3g over d = 50, 100, 200 nm, %.2f s", worst, dt));
  }

  // 3. g versus the Kramers-Kronig oracle.
  const std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0};
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double t : {0.1, 0.5, 0.9}) {
      const MattisBardeenResponse r(pb, gap, t * pb.tc);
      for (double x : grid) {
        const double xi = x * two_delta0;
        worst = std::max(worst, rel(r.g(xi), kk_oracle_g(pb, gap, xi, t * pb.tc)));
      }
    }
    const double dt = seconds_since(t0);
    rep.line(3, worst <= 1e-4 && dt < 60.0, "production g vs KK oracle",
             fmt("max rel deviation %.3g on 7 x 3 grid, %.2f s", worst, dt));
  }

  // 4. Ordering and decay.
  {
    const MattisBardeenResponse lo(pb, gap, 0.1 * pb.tc);
    const MattisBardeenResponse hi(pb, gap, 0.9 * pb.tc);
    std::vector<double> xs = grid;
    xs.push_back(60.0);
    bool ordered = true;
    bool decreasing = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double a = lo.g(xs[i] * two_delta0);
      const double b = hi.g(xs[i] * two_delta0);
      ordered = ordered && a >= b;
      if (i > 0) {
        decreasing = decreasing && a <= lo.g(xs[i - 1] * two_delta0) && b <= hi.g(xs[i - 1] * two_delta0);
      }
    }
    const double r_lo = lo.g(60.0 * two_delta0) / lo.g_zero();
    const double r_hi = hi.g(60.0 * two_delta0) / hi.g_zero();
    const bool ok = ordered && decreasing && r_lo < 1e-2 && r_hi < 1e-2;
    rep.line(4, ok, "g ordering, decrease and decay at 60 (2 Delta(0))",
             fmt("ordered=%g decreasing=%g; g(60)/g(0+) = ", ordered, decreasing) +
                 fmt("%.4g at 0.1 T_c, %.4g at 0.9 T_c (threshold 1e-2)", r_lo, r_hi));
  }

  // 5. Difference versus subtraction.
  {
    const auto t0 = Clock::now();
    EngineConfig tight;
    tight.rel_tol_quadrature = 1e-12;
    tight.rel_tol_series = 1e-14;
    struct P {
      double H, d;
    };
    double worst = 0.0;
    for (const P p : {P{100.0, 70.0}, P{200.0, 50.0}, P{200.0, 70.0}, P{400.0, 150.0}, P{600.0, 100.0}}) {
      const AuPbSystem s(au, pb, shifted_tc(pb, p.H));
      const double diff = s.difference(p.d, cfg).value;
      const double sub = s.normal(p.d, tight).value - s.super(p.d, tight).value;
      worst = std::max(worst, rel(diff, sub));
    }
    const double dt = seconds_since(t0);
    rep.line(5, worst <= 1e-6 && dt < 120.0, "difference vs full-precision subtraction",
             fmt("max rel deviation %.3g at 5 (T, d) points, %.2f s", worst, dt));
  }

  // 6. Field sweep.
  RunConfig base;
  auto t0 = Clock::now();
  const SweepResult field = sweep_field(base);
  const double field_time = seconds_since(t0);
  {
    bool nondecreasing = field.all_converged();
    for (std::size_t i = 1; i < field.rows.size(); ++i) {
      nondecreasing = nondecreasing && field.rows[i].delta_f_fN >= field.rows[i - 1].delta_f_fN;
    }
    // H -> 0: the jump vanishes at H = 0 and shrinks monotonically towards it.
    double at200 = NAN;
    for (const SweepRow& r : field.rows) {
      if (r.x == 200.0) at200 = r.delta_f_fN;
    }
    const double f0 = compute_row(base, 0.0, shifted_tc(pb, 0.0), base.gap_nm).delta_f_fN;
    const double f1 = compute_row(base, 1.0, shifted_tc(pb, 1.0), base.gap_nm).delta_f_fN;
    const double f5 = compute_row(base, 5.0, shifted_tc(pb, 5.0), base.gap_nm).delta_f_fN;
    const bool to_zero = f0 == 0.0 && f1 < f5 && f5 < field.rows.front().delta_f_fN && f1 < 0.1;
    const bool in_range = at200 >= 1.0 && at200 <= 300.0;
    rep.line(6, nondecreasing && to_zero && in_range && field_time < 600.0, "field sweep",
             fmt("dF(200 Oe) = %.6g fN; dF(0, 1, 5 Oe) = %.3g, ", at200, f0) +
                 fmt("%.3g, %.3g fN; ", f1, f5) + (nondecreasing ? "nondecreasing" : "NOT nondecreasing") +
                 fmt("; %.2f s for 31 points", field_time));
  }

  // 7. Gap sweep.
  const SweepResult gapsweep = sweep_gap(base);
  {
    bool decreasing = gapsweep.all_converged();
    for (std::size_t i = 1; i < gapsweep.rows.size(); ++i) {
      decreasing = decreasing && gapsweep.rows[i].delta_f_fN < gapsweep.rows[i - 1].delta_f_fN;
    }
    rep.line(7, decreasing, "gap sweep",
             fmt("dF from %.6g fN at 40 nm to %.6g fN at 300 nm, ", gapsweep.rows.front().delta_f_fN,
                 gapsweep.rows.back().delta_f_fN) +
                 (decreasing ? "strictly decreasing" : "NOT strictly decreasing"));
  }

  // 8. Truncation robustness.
  {
    RunConfig loose = base;
    loose.engine.matsubara_cap_full *= 2.0;
    loose.engine.matsubara_cap_diff *= 2.0;
    loose.engine.rel_tol_quadrature *= 0.5;
    loose.engine.rel_tol_series *= 0.5;
    const SweepResult f2 = sweep_field(loose);
    const SweepResult g2 = sweep_gap(loose);
    double worst = 0.0;
    for (std::size_t i = 0; i < field.rows.size(); ++i) {
      worst = std::max(worst, rel(field.rows[i].delta_f_fN, f2.rows[i].delta_f_fN));
    }
    for (std::size_t i = 0; i < gapsweep.rows.size(); ++i) {
      worst = std::max(worst, rel(gapsweep.rows[i].delta_f_fN, g2.rows[i].delta_f_fN));
    }
    const bool ok = f2.all_converged() && g2.all_converged() && worst < 1e-4;
    rep.line(8, ok, "truncation robustness", fmt("max rel change %.3g over 58 sweep values", worst));
  }

  // 9. Modulation signal.
  {
    const WaveformResult w = sample_waveform(base);
    const double P = w.spec.period();
    const double jump = w.signal.waveform(P / 4) - w.signal.waveform(3 * P / 4);
    RunConfig many = base;
    many.waveform_samples = 1000;
    const WaveformResult wm = sample_waveform(many);
    double mean4 = 0.0;
    for (const auto& s : w.samples) mean4 += s.force_fN;
    mean4 /= static_cast<double>(w.samples.size());
    double mean_many = 0.0;
    for (const auto& s : wm.samples) mean_many += s.force_fN;
    mean_many /= static_cast<double>(wm.samples.size());
    const double e_jump = rel(jump, w.row.delta_f_fN);
    const double e_mean = std::max(rel(mean4, w.signal.mean_force), rel(mean_many, wm.signal.mean_force));
    // Spacing of representable forces near F(T/4), relative to dF.
    const double grain = (std::nextafter(std::abs(w.signal.waveform(P / 4)), INFINITY) -
                          std::abs(w.signal.waveform(P / 4))) / std::abs(w.row.delta_f_fN);
    rep.line(9, e_jump <= 1e-12 && e_mean <= 1e-12, "modulation signal",
             fmt("F(T/4) - F(3T/4) vs dF rel %.3g (binary64 spacing near F is %.3g of dF); ", e_jump, grain) +
                 fmt("period mean rel %.3g", e_mean));
  }

  // 10. Determinism through the command-line tool.
  {
    bool ok = !cli.empty();
    std::string detail = "no CLI path given";
    if (ok) {
      const std::string a = scratch + "/det_a.csv";
      const std::string b = scratch + "/det_b.csv";
      const std::string c = scratch + "/det_c.csv";
      const std::string run = cli + " sweep-field --output ";
      const int ra = std::system(("CASIMIR_SC_THREADS=16 " + run + a).c_str());
      const int rb = std::system(("CASIMIR_SC_THREADS=16 " + run + b).c_str());
      const int rc = std::system(("CASIMIR_SC_THREADS=1 " + run + c).c_str());
      const std::string sa = read_file(a);
      ok = ra == 0 && rb == 0 && rc == 0 && !sa.empty() && sa == read_file(b) && sa == read_file(c);
      // The library sweep renders the same bytes as the tool.
      ok = ok && sa == render_sweep(base, field);
      detail = std::string("sweep-field x3 (16, 16, 1 threads) ") + (ok ? "byte-identical" : "DIFFER") +
               ", " + std::to_string(sa.size()) + " bytes";
    }
    rep.line(10, ok, "determinism", detail);
  }

  std::printf("%d criteria failed\n", rep.failed);
  return rep.failed == 0 ? 0 : 1;
}
