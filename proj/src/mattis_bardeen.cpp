#include "casimir_sc/mattis_bardeen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"

namespace casimir_sc {

namespace {

// f(E) - f(E + omega) written without cancellation.
double fermi_difference(double e, double omega, double kt) {
  const double a = std::exp(-e / kt);
  const double b = std::exp(-omega / kt);
  return a * -std::expm1(-omega / kt) / ((1.0 + a) * (1.0 + a * b));
}

// Thermally excited quasiparticles: (2/omega) int_Delta^inf dE [f(E) - f(E+omega)] (...),
// with E = Delta cosh(u) removing the square-root edge.
double thermal_term(double omega, double delta, double kt) {
  if (kt <= 0.0 || delta / kt > 600.0) return 0.0;
  const double umax = std::acosh(1.0 + 45.0 * kt / delta);
  auto integrand = [=](double u) {
    const double e = delta * std::cosh(u);
    const double sh = std::sinh(0.5 * u);
    const double gap_above = 2.0 * delta * sh * sh + omega;  // E + omega - Delta
    const double den = std::sqrt(gap_above * (gap_above + 2.0 * delta));
    return fermi_difference(e, omega, kt) * (e * e + delta * delta + omega * e) / den;
  };
  const double knee = std::sqrt(2.0 * omega / delta);
  std::array<double, 3> breaks = {0.0, knee, umax};
  std::span<const double> span(breaks);
  if (knee >= umax) {
    breaks = {0.0, umax, umax};
    span = span.first(2);
  }
  QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16 * omega;
  const auto r = integrate_adaptive(integrand, span, opt);
  return 2.0 / omega * r.value;
}

// Pair breaking, omega > 2 Delta: (1/omega) int_Delta^{omega-Delta} d eps tanh(eps/2kT) (...),
// with eps = omega/2 - h cos(theta) removing both square-root edges.
double pair_breaking_term(double omega, double delta, double kt) {
  if (omega <= 2.0 * delta) return 0.0;
  const double h = 0.5 * omega - delta;
  auto integrand = [=](double theta) {
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    const double above = 2.0 * h * s * s;  // eps - Delta
    const double below = 2.0 * h * c * c;  // omega - Delta - eps
    const double eps = delta + above;
    const double occupation = kt > 0.0 ? std::tanh(0.5 * eps / kt) : 1.0;
    const double num = 2.0 * delta * h + above * below;
    return occupation * num / std::sqrt((2.0 * delta + above) * (2.0 * delta + below));
  };
  std::vector<double> breaks = {0.0, 0.5 * kPi, kPi};
  auto edge_angle = [h](double scale) { return 2.0 * std::asin(std::sqrt(std::min(1.0, scale / (2.0 * h)))); };
  for (double scale : {delta, kt}) {
    if (scale <= 0.0) continue;
    const double th = edge_angle(scale);
    if (th > 0.0 && th < 0.5 * kPi) {
      breaks.push_back(th);
      breaks.push_back(kPi - th);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16 * omega;
  const auto r = integrate_adaptive(integrand, std::span<const double>(breaks), opt);
  return r.value / omega;
}

double normal_weight(double gamma, double omega) { return gamma / (gamma * gamma + omega * omega); }

}  // namespace

double mattis_bardeen_ratio(double omega, double delta, double kt) {
  if (!(omega > 0.0)) throw DomainError("mattis_bardeen_ratio: omega must be > 0");
  if (!(delta >= 0.0) || !(kt >= 0.0)) throw DomainError("mattis_bardeen_ratio: negative gap or temperature");
  if (delta == 0.0) return 1.0;
  return thermal_term(omega, delta, kt) + pair_breaking_term(omega, delta, kt);
}

MattisBardeenResponse::MattisBardeenResponse(const MaterialParams& m, const GapModel& gap, double T,
                                             QuadratureRule rule)
    : material_(m), temperature_(T), delta_(0.0) {
  if (!m.is_superconductor()) throw DomainError("MattisBardeenResponse: material is not a superconductor");
  if (!(T >= 0.0)) throw DomainError("MattisBardeenResponse: T must be >= 0");
  if (T > m.tc) throw DomainError("MattisBardeenResponse: T above T_c");
  delta_ = bcs_gap(gap, T, m.tc);
  if (delta_ == 0.0) return;

  const double kt = PhysConstants::k_b * T;
  const double gamma = m.gamma();
  const double edge = 2.0 * delta_;
  auto f = [&](double w) { return normal_weight(gamma, w) * (1.0 - mattis_bardeen_ratio(w, delta_, kt)); };

  // Geometric grading towards omega = 0 and towards the gap edge from both
  // sides; geometric panels above. Ratio-2 panels keep the kernel
  // w^2/(w^2 + xi^2) resolved for every xi.
  std::vector<double> breaks = {0.0};
  for (int k = 40; k >= 1; --k) breaks.push_back(edge * std::ldexp(1.0, -k));
  for (int k = 2; k <= 30; ++k) breaks.push_back(edge * (1.0 - std::ldexp(1.0, -k)));
  breaks.push_back(edge);
  for (int k = 30; k >= 2; --k) breaks.push_back(edge * (1.0 + std::ldexp(1.0, -k)));
  const double wmax = 2000.0 * std::max(gamma, edge);
  for (double w = 2.0 * edge; w < wmax; w *= 2.0) breaks.push_back(w);
  breaks.push_back(wmax);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureOptions opt;
  opt.rule = rule;
  opt.rel_tol = 1e-11;
  opt.max_panels = 20000;
  std::vector<Panel> panels;
  const auto total = integrate_adaptive(f, std::span<const double>(breaks), opt, &panels);
  if (!total.converged) {
    throw NumericalFailure("Mattis-Bardeen node table did not converge", total.abs_error);
  }
  std::vector<double> weights;
  for (const Panel& p : panels) append_kronrod_nodes(rule, p.a, p.b, nodes_, weights);
  weighted_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) weighted_[i] = weights[i] * f(nodes_[i]);

  // xi -> 0: the kernel is 1 on every node. 1 - R diverges like log(Delta/w)
  // near T_c, so g(xi) - g(0+) ~ xi log xi and finite-xi extrapolation is unreliable.
  CompensatedSum sum;
  for (double v : weighted_) sum.add(v);
  g_zero_ = 2.0 / kPi * sum.value();
  if (!std::isfinite(g_zero_)) throw NumericalFailure("g(0+) is not finite", 0.0);
}

double MattisBardeenResponse::g(double xi) const {
  if (!(xi >= 0.0)) throw DomainError("mattis_bardeen_g: xi must be >= 0");
  if (is_normal()) return 0.0;
  if (xi == 0.0 && g_zero_ != 0.0) return g_zero_;
  const double xi2 = xi * xi;
  CompensatedSum sum;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double w2 = nodes_[i] * nodes_[i];
    sum.add(weighted_[i] * (w2 / (w2 + xi2)));
  }
  return 2.0 / kPi * sum.value();
}

double MattisBardeenResponse::eps_minus_one(double xi) const {
  if (!(xi > 0.0)) throw DomainError("eps_bcs: xi must be > 0");
  if (is_normal()) return drude_eps_minus_one(material_, xi);
  const double w2 = material_.omega_p * material_.omega_p;
  return w2 / xi * (1.0 / (xi + material_.gamma()) + g(xi) / xi);
}

double MattisBardeenResponse::eps(double xi) const {
  if (is_normal()) return drude_eps(material_, xi);
  return 1.0 + eps_minus_one(xi);
}

std::vector<SpectralSample> MattisBardeenResponse::sample(std::span<const double> xis) const {
  std::vector<SpectralSample> out;
  out.reserve(xis.size());
  for (double x : xis) out.push_back({x, eps(x)});
  return out;
}

double mattis_bardeen_g(const MaterialParams& m, const GapModel& gap, double xi, double T) {
  if (!(xi >= 0.0)) throw DomainError("mattis_bardeen_g: xi must be >= 0");
  return MattisBardeenResponse(m, gap, T).g(xi);
}

double eps_bcs(const MaterialParams& m, const GapModel& gap, double xi, double T) {
  if (!(xi > 0.0)) throw DomainError("eps_bcs: xi must be > 0");
  if (T == m.tc) return drude_eps(m, xi);
  return MattisBardeenResponse(m, gap, T).eps(xi);
}

}  // namespace casimir_sc
