#pragma once

// Superconducting response on the imaginary axis.
//
// The real-frequency conductivity below T_c is the Drude conductivity of the
// normal state times the dirty-limit Mattis-Bardeen ratio sigma_1s/sigma_n,
// plus a condensate delta function at omega = 0 that restores the sum rule.
// Continuing to the imaginary axis gives
//
//   sigma(i xi) = Omega^2/(4 pi) [ 1/(xi + gamma) + g(xi; T)/xi ],
//   g(xi; T)   = (2/pi) int_0^inf dw s_n(w) [1 - R(w)] w^2 / (w^2 + xi^2),
//
// with s_n(w) = gamma/(gamma^2 + w^2) and R = sigma_1s/sigma_n. The condensate
// weight is folded into the kernel w^2/(w^2 + xi^2) analytically.
//
// MattisBardeenResponse tabulates s_n (1 - R) once per temperature on an
// adaptively refined Gauss-Kronrod node set, after which g(xi) is a dot
// product. The kk_oracle_* functions evaluate the same quantity by a separate
// route (tanh-sinh quadrature, full sigma_1 rather than 1 - R, explicit
// condensate term) and exist only to cross-check it.

#include <span>
#include <vector>

#include "casimir_sc/materials.hpp"
#include "casimir_sc/numerics.hpp"

namespace casimir_sc {

// sigma_1s / sigma_n in the dirty limit for photon energy omega > 0,
// gap delta >= 0 and temperature k_B T = kt (all eV).
double mattis_bardeen_ratio(double omega, double delta, double kt);

struct SpectralSample {
  double xi;
  double eps;
};

class MattisBardeenResponse {
 public:
  MattisBardeenResponse(const MaterialParams& m, const GapModel& gap, double T,
                        QuadratureRule rule = QuadratureRule::gauss_kronrod_15);

  double temperature() const { return temperature_; }
  double gap() const { return delta_; }
  const MaterialParams& material() const { return material_; }
  // True at T = T_c, where the response is exactly Drude.
  bool is_normal() const { return delta_ == 0.0; }
  std::size_t node_count() const { return nodes_.size(); }

  // g(xi; T) for xi >= 0; xi = 0 returns the zero-frequency limit.
  double g(double xi) const;
  // g(0+; T): g at xi = 1e-8 eV, checked against xi = 1e-7 eV.
  double g_zero() const { return g_zero_; }

  double eps(double xi) const;
  double eps_minus_one(double xi) const;

  std::vector<SpectralSample> sample(std::span<const double> xis) const;

 private:
  MaterialParams material_;
  double temperature_;
  double delta_;
  std::vector<double> nodes_;
  std::vector<double> weighted_;  // w_i * s_n(x_i) (1 - R(x_i))
  double g_zero_ = 0.0;
};

// One-shot conveniences; each builds a MattisBardeenResponse.
double mattis_bardeen_g(const MaterialParams& m, const GapModel& gap, double xi, double T);
double eps_bcs(const MaterialParams& m, const GapModel& gap, double xi, double T);

// Independent route: sigma(i xi) in units of eV (Omega^2/(4 pi) per energy).
double kk_oracle_sigma(const MaterialParams& m, const GapModel& gap, double xi, double T);
// g recovered from kk_oracle_sigma: xi (4 pi sigma / Omega^2 - 1/(xi + gamma)).
double kk_oracle_g(const MaterialParams& m, const GapModel& gap, double xi, double T);
// sigma_1s/sigma_n evaluated without the substitutions used by mattis_bardeen_ratio.
double mattis_bardeen_ratio_oracle(double omega, double delta, double kt);

}  // namespace casimir_sc
