#include "casimir_sc/materials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

// Boost 1.74's cubic_hermite_detail calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/roots.hpp>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"
#include "casimir_sc/numerics.hpp"

namespace casimir_sc {

void MaterialParams::validate() const {
  auto fail = [this](const std::string& field, const std::string& why) {
    throw DomainError(name + "." + field + ": " + why);
  };
  if (!(omega_p > 0.0)) fail("omega_p", "must be > 0");
  if (!(gamma0 > 0.0)) fail("gamma0", "must be > 0");
  if (!(rrr >= 1.0)) fail("rrr", "must be >= 1");
  if (!(gamma() > 0.0) || !std::isfinite(gamma())) fail("gamma", "gamma0/rrr must be finite and > 0");
  if (!(tc >= 0.0)) fail("tc", "must be >= 0");
  if (tc > 0.0) {
    if (!(hc0 > 0.0)) fail("hc0", "must be > 0 for a superconductor");
    if (!lambda0 || !(*lambda0 > 0.0)) fail("lambda0", "must be > 0 for a superconductor");
  }
}

MaterialParams gold() {
  MaterialParams m;
  m.name = "Au";
  m.omega_p = 9.0;
  m.gamma0 = 0.035;
  m.rrr = 1.0;
  return m;
}

MaterialParams lead() {
  MaterialParams m;
  m.name = "Pb";
  m.omega_p = 7.36;
  m.gamma0 = 0.200;
  m.rrr = 2.0;
  m.tc = 7.2;
  m.hc0 = 800.0;
  m.lambda0 = 35.0;  // midpoint of 32-39 nm
  m.ell_over_xi0 = 0.07;
  return m;
}

double drude_eps_minus_one(const MaterialParams& m, double xi) {
  if (!(xi > 0.0)) throw DomainError("drude_eps: xi must be > 0");
  return m.omega_p * m.omega_p / (xi * (xi + m.gamma()));
}

double drude_eps(const MaterialParams& m, double xi) { return 1.0 + drude_eps_minus_one(m, xi); }

// ---------------------------------------------------------------------------
// Gap equation

namespace {

// pi exp(-gamma_E): exact weak-coupling Delta(0) / k_B T_c.
constexpr double kWeakCouplingRatio = 1.7638769888620457;

// ln(1/d) - 2 int_0^inf dx f(E)/E, E = sqrt(x^2 + d^2), energies in units of Delta(0).
double gap_residual(double d, double tau) {
  const double vmax = std::acosh(std::max(1.0, 45.0 * tau / d)) + 1.0;
  auto integrand = [d, tau](double v) {
    const double e = d * std::cosh(v) / tau;
    return 2.0 * std::exp(-e) / (1.0 + std::exp(-e));
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  const auto r = integrate_adaptive(integrand, 0.0, vmax, opt);
  return std::log(1.0 / d) - r.value;
}

struct GapTable {
  GapTable() {
    constexpr int n = 257;
    std::vector<double> u(n), r(n);
    for (int i = 0; i < n; ++i) {
      u[i] = static_cast<double>(i) / (n - 1);
      r[i] = solve_gap_ratio(1.0 - u[i] * u[i]);
    }
    interp = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(std::move(u),
                                                                                      std::move(r));
  }
  std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> interp;
};

const GapTable& gap_table() {
  static const GapTable table;
  return table;
}

}  // namespace

double solve_gap_ratio(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("gap ratio: reduced temperature outside [0, 1]");
  if (t == 0.0) return 1.0;
  if (t == 1.0) return 0.0;
  const double tau = t / kWeakCouplingRatio;
  // Exponentially close to 1 at low t; the root solver cannot resolve it.
  if (gap_residual(1.0, tau) > -1e-15) return 1.0;
  auto f = [tau](double d) { return gap_residual(d, tau); };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, 1e-14, 1.0, tol, iters);
  return 0.5 * (lo + hi);
}

GapModel::GapModel(double tc) : tc_(tc), delta0_(kBcsGapRatio * PhysConstants::k_b * tc) {
  if (!(tc > 0.0)) throw DomainError("GapModel: tc must be > 0");
  (void)gap_table();
}

double GapModel::ratio(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("GapModel: reduced temperature outside [0, 1]");
  if (t == 0.0) return 1.0;
  if (t == 1.0) return 0.0;
  const double u = std::sqrt(1.0 - t);
  return std::clamp((*gap_table().interp)(u), 0.0, 1.0);
}

double bcs_gap(const GapModel& gap, double T, double tc) {
  if (!(T >= 0.0)) throw DomainError("bcs_gap: T must be >= 0");
  if (T > tc) throw DomainError("bcs_gap: T above T_c, gap undefined");
  return gap.delta0() * gap.ratio(T / tc);
}

double dirty_limit_ratio(const MaterialParams& m, double delta_ref) {
  if (!m.is_superconductor()) throw DomainError("dirty_limit_ratio: material is not a superconductor");
  if (!(delta_ref >= 0.0)) throw DomainError("dirty_limit_ratio: delta_ref must be >= 0");
  return kPi * delta_ref / m.gamma();
}

double dirty_limit_ratio(const MaterialParams& m, const GapModel& gap, GapScale scale) {
  const double ref = scale == GapScale::two_delta0 ? 2.0 * gap.delta0() : gap.delta0();
  return dirty_limit_ratio(m, ref);
}

}  // namespace casimir_sc
