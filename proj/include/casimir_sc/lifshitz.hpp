#pragma once

// Finite-temperature Lifshitz free energy between two half-spaces, the
// normal-minus-superconducting difference, and the PFA sphere-plate force jump.
//
// With y = 2 d q the free energy per unit area reads
//
//   F = k_B T / (8 pi d^2) sum'_l int_{y_l}^inf dy y sum_alpha log(1 - r_a r_b e^{-y}),
//
// y_l = 2 d xi_l / (hbar c); the prime halves the l = 0 term. Energies are in
// eV, lengths in nm, so F is in eV/nm^2.

#include <functional>
#include <memory>

#include "casimir_sc/materials.hpp"
#include "casimir_sc/mattis_bardeen.hpp"
#include "casimir_sc/numerics.hpp"
#include "casimir_sc/sc_state.hpp"

namespace casimir_sc {

struct EngineConfig {
  double rel_tol_quadrature = 1e-9;
  double rel_tol_series = 1e-9;
  double matsubara_cap_full = 15.0;  // xi_max in units of hbar c / d
  double matsubara_cap_diff = 60.0;  // xi_max in units of 2 Delta(0)
  QuadratureRule rule = QuadratureRule::gauss_kronrod_15;
  // Above this predicted term count the Matsubara tail is replaced by its
  // Euler-Maclaurin integral after tail_start explicit terms.
  long max_explicit_terms = 200000;
  long tail_start = 2000;

  // Throws DomainError naming the field.
  void validate() const;
};

struct ReflectionPair {
  double r_te;
  double r_tm;
};

struct FreeEnergyResult {
  double value = 0.0;           // eV/nm^2
  long terms_used = 0;          // explicit Matsubara terms
  double error_estimate = 0.0;  // eV/nm^2
  bool tail_integral = false;   // Euler-Maclaurin tail was used
};

// xi_l = 2 pi l k_B T, eV.
double matsubara_xi(long l, double T);

// Fresnel coefficients for permittivity eps at imaginary frequency xi (eV) and
// in-plane wavenumber k_perp (nm^-1).
double fresnel_te(double eps, double xi, double k_perp);
double fresnel_tm(double eps, double xi, double k_perp);
// Same from eps - 1, with q and kappa = xi / hbar c in nm^-1 and q >= kappa.
ReflectionPair fresnel_from_eps_minus_one(double eps_minus_one, double q, double kappa);

// Reflecting half-space as seen by the Lifshitz formula.
class Surface {
 public:
  enum class Kind { ideal_mirror, drude, bcs };

  static Surface ideal_mirror();
  static Surface drude(const MaterialParams& m);
  static Surface bcs(std::shared_ptr<const MattisBardeenResponse> response);
  // Drude above T_c, Mattis-Bardeen below.
  static Surface for_phase(const MaterialParams& m, const GapModel& gap, Phase phase, double T);

  Kind kind() const { return kind_; }
  const char* name() const;
  // eps(i xi) - 1 for xi > 0; infinite for an ideal mirror.
  double eps_minus_one(double xi) const;
  // Omega^2 g(xi; T) / xi^2, the BCS excess over the Drude permittivity.
  double eps_excess(double xi) const;
  ReflectionPair reflections(double eps_minus_one, double q, double kappa) const;
  // l = 0 limit at in-plane wavenumber k_perp (nm^-1).
  ReflectionPair zero_mode(double k_perp) const;
  // Omega^2 g(0+; T) / (hbar c)^2 in nm^-2; zero unless Kind::bcs.
  double zero_mode_kp2() const { return kp2_; }
  const MattisBardeenResponse* response() const { return response_.get(); }

 private:
  Kind kind_ = Kind::ideal_mirror;
  MaterialParams material_;
  std::shared_ptr<const MattisBardeenResponse> response_;
  double kp2_ = 0.0;
};

// l = 0 reflections: Drude (0, 1); BCS (plasma-like r_te, 1).
ReflectionPair zero_mode_reflections(const MaterialParams& m, Phase phase, double T, double k_perp);

FreeEnergyResult free_energy(const Surface& a, const Surface& b, double T, double d, const EngineConfig& cfg);
FreeEnergyResult free_energy(const MaterialParams& a, const MaterialParams& b, Phase phase_b, double T,
                             double d, const EngineConfig& cfg);

// Per-l contribution to the free energy, before the k_B T / (8 pi d^2) prefactor
// and the l = 0 half weight. Exposed for diagnostics.
double matsubara_term(const Surface& a, const Surface& b, long l, double T, double d, const EngineConfig& cfg);
// Same split by polarization.
ReflectionPair matsubara_term_by_polarization(const Surface& a, const Surface& b, long l, double T, double d,
                                              const EngineConfig& cfg);

// F(b_normal) - F(b_super), accumulated term by term in a single Matsubara loop
// truncated above matsubara_cap_diff * two_delta0.
FreeEnergyResult free_energy_difference(const Surface& a, const Surface& b_normal, const Surface& b_super,
                                        double T, double d, double two_delta0, const EngineConfig& cfg);
FreeEnergyResult free_energy_difference(const MaterialParams& au, const MaterialParams& pb, double T, double d,
                                        const EngineConfig& cfg);
// Per-l, per-polarization contribution to the difference (same normalization
// as matsubara_term_by_polarization).
ReflectionPair difference_term_by_polarization(const Surface& a, const Surface& b_normal,
                                               const Surface& b_super, long l, double T, double d,
                                               const EngineConfig& cfg);

struct PfaResult {
  double delta_force_fN = 0.0;
  double difference_eV_nm2 = 0.0;
  double pfa_bound = 0.0;  // d / R
  bool pfa_warning = false;  // d / R >= 1e-2
  long terms_used = 0;
  double error_estimate_fN = 0.0;
};

// 2 pi R [F_n - F_s] in fN, R in micrometres.
double pfa_force_fN(double difference_eV_nm2, double radius_um);
PfaResult delta_force_pfa(const MaterialParams& au, const MaterialParams& pb, double radius_um, double T,
                          double d, const EngineConfig& cfg);

// The three surfaces of an Au / Pb evaluation at one temperature. The
// Mattis-Bardeen table is built once and shared by every separation.
class AuPbSystem {
 public:
  AuPbSystem(const MaterialParams& au, const MaterialParams& pb, double T,
             QuadratureRule rule = QuadratureRule::gauss_kronrod_15);

  double temperature() const { return T_; }
  double two_delta0() const { return two_delta0_; }
  const Surface& gold() const { return au_; }
  const Surface& lead_normal() const { return pb_n_; }
  const Surface& lead_super() const { return pb_s_; }

  FreeEnergyResult normal(double d, const EngineConfig& cfg) const;
  FreeEnergyResult super(double d, const EngineConfig& cfg) const;
  FreeEnergyResult difference(double d, const EngineConfig& cfg) const;
  PfaResult delta_force(double radius_um, double d, const EngineConfig& cfg) const;

 private:
  double T_;
  double two_delta0_;
  Surface au_;
  Surface pb_n_;
  Surface pb_s_;
};

}  // namespace casimir_sc
