#pragma once

// Optical response of the metals along the imaginary frequency axis.
//
// All frequencies are energies in eV (hbar = 1). A normal metal follows the
// Drude model eps(i xi) = 1 + Omega^2 / (xi (xi + gamma)) with the residual
// relaxation gamma = gamma0 / RRR.

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace casimir_sc {

struct MaterialParams {
  std::string name;
  double omega_p = 0.0;  // plasma frequency, eV
  double gamma0 = 0.0;   // room-temperature relaxation, eV
  double rrr = 1.0;      // residual resistance ratio
  double tc = 0.0;       // K, 0 for a normal metal
  double hc0 = 0.0;      // Oe, 0 for a normal metal
  std::optional<double> lambda0;       // nm
  std::optional<double> ell_over_xi0;  // tabulated mean-free-path / coherence-length

  double gamma() const { return gamma0 / rrr; }
  bool is_superconductor() const { return tc > 0.0; }

  // Throws DomainError naming the offending field.
  void validate() const;
};

// Built-in registry.
MaterialParams gold();
MaterialParams lead();

double drude_eps(const MaterialParams& m, double xi);
// eps - 1 without the cancellation of forming 1 + x first.
double drude_eps_minus_one(const MaterialParams& m, double xi);

// BCS gap Delta(T) = Delta(0) * r(T / T_c), with Delta(0) = 1.764 k_B T_c and r
// the universal weak-coupling solution tabulated once per process.
class GapModel {
 public:
  explicit GapModel(double tc);

  double tc() const { return tc_; }
  double delta0() const { return delta0_; }
  // Delta(T)/Delta(0) for reduced temperature t in [0, 1].
  double ratio(double t) const;

 private:
  double tc_;
  double delta0_;
};

double bcs_gap(const GapModel& gap, double T, double tc);

// Direct root solve of the weak-coupling gap equation for Delta(T)/Delta(0),
// bypassing the table. Used to build the table.
double solve_gap_ratio(double t);

// Gap scale entering xi0 = hbar v_F / (pi Delta_ref).
enum class GapScale { delta0, two_delta0 };

// l / xi0 = pi Delta_ref / gamma (v_F cancels).
double dirty_limit_ratio(const MaterialParams& m, const GapModel& gap, GapScale scale);
double dirty_limit_ratio(const MaterialParams& m, double delta_ref);

}  // namespace casimir_sc
