#pragma once

// Thermodynamic state of the superconducting film and the square-wave field
// modulation that switches it between phases.

#include "casimir_sc/materials.hpp"

namespace casimir_sc {

enum class Phase { Normal, Superconducting };

const char* phase_name(Phase p);
// Single-letter tag used in waveform output: N or S.
char phase_tag(Phase p);

struct ThermoPoint {
  double temperature;  // K
  double field;        // Oe
  Phase phase;
};

// H_c(T) = H_c(0) (1 - (T/T_c)^2), Oe.
double critical_field(const MaterialParams& m, double T);
// lambda(T) = lambda(0) / sqrt(1 - (T/T_c)^4), nm.
double penetration_depth(const MaterialParams& m, double T);
// T'_c(H) = T_c sqrt(1 - H/H_c(0)), K.
double shifted_tc(const MaterialParams& m, double H);
// Superconducting iff T < T_c and H < H_c(T); H == H_c(T) is Normal.
ThermoPoint resolve_phase(const MaterialParams& m, double T, double H);

// Odd square wave of the given period: +1/2 on (0, period/2), -1/2 on
// (period/2, period), 0 at multiples of period/2.
double pulse_f(double t, double period);

struct ModulationSpec {
  double base_temperature = 0.0;  // K
  double h = 0.0;                 // Oe
  double frequency = 0.0;         // Hz

  double period() const { return 1.0 / frequency; }
  // Throws DomainError naming the field.
  void validate(const MaterialParams& m) const;
};

// H(t) = H_c(T) + h f(t).
double field_waveform(const ModulationSpec& spec, const MaterialParams& m, double t);
// Phase of the film at time t under field_waveform.
Phase waveform_phase(const ModulationSpec& spec, const MaterialParams& m, double t);

struct ForceSignal {
  double mean_force = 0.0;  // fN
  double jump = 0.0;        // fN, F_n - F_s
  double period = 1.0;      // s

  double waveform(double t) const { return mean_force + jump * pulse_f(t, period); }
};

ForceSignal force_signal(double mean, double jump, const ModulationSpec& spec);

}  // namespace casimir_sc
