// Independent evaluation of the superconducting conductivity on the imaginary
// axis. Shares nothing with the production node table beyond the gap model:
// tanh-sinh quadrature throughout, sigma_1s/sigma_n integrated in the original
// energy variable, and the Kramers-Kronig integral taken over the full
// sigma_1 with the condensate weight added as a closed-form 1/xi term.

#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"
#include "casimir_sc/mattis_bardeen.hpp"

namespace casimir_sc {

namespace {

constexpr double kOracleTol = 1e-13;

// Boost 1.74 only exposes integrate() on a non-const instance.
boost::math::quadrature::tanh_sinh<double>& integrator() {
  thread_local boost::math::quadrature::tanh_sinh<double> ts(18);
  return ts;
}

template <class F>
double tanh_sinh(F f, double a, double b, const std::string& what, double abs_floor = 0.0) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = integrator().integrate(f, a, b, kOracleTol, &err, &l1);
  if (!std::isfinite(v) || err > std::max(1e-8 * l1, abs_floor)) {
    throw NumericalFailure("kk oracle: " + what + " did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "], value " + std::to_string(v) + " error " +
                               std::to_string(err) + " l1 " + std::to_string(l1),
                           err);
  }
  return v;
}

}  // namespace

double mattis_bardeen_ratio_oracle(double omega, double delta, double kt) {
  if (!(omega > 0.0)) throw DomainError("mattis_bardeen_ratio_oracle: omega must be > 0");
  if (delta == 0.0) return 1.0;

  // Both terms are integrated over the distance x above the gap edge so that
  // tanh-sinh resolves the square-root singularities in relative precision.
  double thermal = 0.0;
  if (kt > 0.0 && delta / kt < 600.0) {
    auto integrand = [=](double x, double xc) {
      const double above = xc < 0.0 ? -xc : x;  // E - Delta
      if (!(above > 0.0)) return 0.0;
      const double e = delta + above;
      // f(E) - f(E+w) = sinh(w/2kT) / (2 cosh(E/2kT) cosh((E+w)/2kT))
      const double occ =
          omega < 40.0 * kt
              ? 0.5 * std::sinh(0.5 * omega / kt) /
                    (std::cosh(0.5 * e / kt) * std::cosh(0.5 * (e + omega) / kt))
              : 1.0 / (std::exp(e / kt) + 1.0) - 1.0 / (std::exp((e + omega) / kt) + 1.0);
      const double root1 = std::sqrt(above * (e + delta));
      const double root2 = std::sqrt((above + omega) * (e + omega + delta));
      return occ * (e * e + delta * delta + omega * e) / (root1 * root2);
    };
    thermal = 2.0 / omega *
              tanh_sinh(integrand, 0.0, 60.0 * kt, "thermal term at omega=" + std::to_string(omega),
                        1e-12 * omega);
  }

  double pair = 0.0;
  if (omega > 2.0 * delta) {
    const double width = omega - 2.0 * delta;
    auto integrand = [=](double x, double xc) {
      const double above = xc < 0.0 ? -xc : x;            // eps - Delta
      const double below = xc > 0.0 ? xc : width - above;  // omega - Delta - eps
      if (!(above > 0.0) || !(below > 0.0)) return 0.0;
      const double e = delta + above;
      const double occ = kt > 0.0 ? std::tanh(0.5 * e / kt) : 1.0;
      // e (omega - e) - Delta^2 regrouped around the two edges.
      const double num = delta * (above + below) + above * below;
      const double den = std::sqrt(above * (e + delta)) * std::sqrt(below * (omega - e + delta));
      return occ * num / den;
    };
    pair = tanh_sinh(integrand, 0.0, width, "pair-breaking term at omega=" + std::to_string(omega),
                     1e-12 * omega) /
           omega;
  }
  return thermal + pair;
}

double kk_oracle_sigma(const MaterialParams& m, const GapModel& gap, double xi, double T) {
  if (!(xi > 0.0)) throw DomainError("kk_oracle_sigma: xi must be > 0");
  const double scale = m.omega_p * m.omega_p / (4.0 * kPi);
  const double gamma = m.gamma();
  const double delta = bcs_gap(gap, T, m.tc);
  if (delta == 0.0) return scale / (xi + gamma);
  const double kt = PhysConstants::k_b * T;

  // omega = gamma tan(theta) turns the Lorentzian s_n(omega) d omega into d theta.
  const double floor = 1e-14 * std::max(delta, kt);
  auto ratio_at = [&](double omega) {
    if (omega > 1e7 * gamma) return 1.0;
    return mattis_bardeen_ratio_oracle(std::max(omega, floor), delta, kt);
  };
  auto omega_of = [gamma](double theta, double tc) {
    // tc > 0 is the distance to pi/2 when theta sits in the upper half.
    return tc > 0.0 ? gamma / std::tan(tc) : gamma * std::tan(theta);
  };
  const double theta_gap = std::atan(2.0 * delta / gamma);
  const double half_pi = 0.5 * kPi;

  auto regular = [&](double theta, double tc) {
    const double w = omega_of(theta, tc);
    return ratio_at(w) / (w * w + xi * xi);
  };
  auto missing = [&](double theta, double tc) { return 1.0 - ratio_at(omega_of(theta, tc)); };
  // Below the gap the complement points at theta_gap, not pi/2.
  auto lower_regular = [&](double theta) {
    const double w = gamma * std::tan(theta);
    return ratio_at(w) / (w * w + xi * xi);
  };
  auto lower_missing = [&](double theta) { return 1.0 - ratio_at(gamma * std::tan(theta)); };

  const double regular_int = tanh_sinh(lower_regular, 0.0, theta_gap, "regular part below gap") +
                             tanh_sinh(regular, theta_gap, half_pi, "regular part above gap");
  const double weight =
      2.0 * (tanh_sinh(lower_missing, 0.0, theta_gap, "condensate weight below gap") +
             tanh_sinh(missing, theta_gap, half_pi, "condensate weight above gap"));

  // Delta-function weight W at omega = 0 contributes W / (pi xi).
  const double normalized = weight / (kPi * xi) + 2.0 * xi / kPi * regular_int;
  return scale * normalized;
}

double kk_oracle_g(const MaterialParams& m, const GapModel& gap, double xi, double T) {
  const double scale = m.omega_p * m.omega_p / (4.0 * kPi);
  const double sigma = kk_oracle_sigma(m, gap, xi, T);
  return xi * (sigma / scale - 1.0 / (xi + m.gamma()));
}

}  // namespace casimir_sc
