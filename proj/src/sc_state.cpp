#include "casimir_sc/sc_state.hpp"

#include <cmath>
#include <string>

#include "casimir_sc/errors.hpp"

namespace casimir_sc {

namespace {

void require_superconductor(const MaterialParams& m, const char* op) {
  if (!m.is_superconductor()) throw DomainError(std::string(op) + ": material is not a superconductor");
}

}  // namespace

const char* phase_name(Phase p) { return p == Phase::Normal ? "normal" : "superconducting"; }

char phase_tag(Phase p) { return p == Phase::Normal ? 'N' : 'S'; }

double critical_field(const MaterialParams& m, double T) {
  require_superconductor(m, "critical_field");
  if (!(T >= 0.0)) throw DomainError("critical_field: T must be >= 0");
  if (T > m.tc) throw DomainError("critical_field: T above T_c");
  const double t = T / m.tc;
  return m.hc0 * (1.0 - t * t);
}

double penetration_depth(const MaterialParams& m, double T) {
  require_superconductor(m, "penetration_depth");
  if (!(T >= 0.0)) throw DomainError("penetration_depth: T must be >= 0");
  if (T >= m.tc) throw DomainError("penetration_depth: undefined at or above T_c");
  const double t2 = (T / m.tc) * (T / m.tc);
  return *m.lambda0 / std::sqrt(1.0 - t2 * t2);
}

double shifted_tc(const MaterialParams& m, double H) {
  require_superconductor(m, "shifted_tc");
  if (!(H >= 0.0)) throw DomainError("shifted_tc: H must be >= 0");
  if (H > m.hc0) throw DomainError("shifted_tc: H above H_c(0)");
  return m.tc * std::sqrt(1.0 - H / m.hc0);
}

ThermoPoint resolve_phase(const MaterialParams& m, double T, double H) {
  Phase phase = Phase::Normal;
  if (m.is_superconductor() && T < m.tc && H < critical_field(m, T)) phase = Phase::Superconducting;
  return {T, H, phase};
}

double pulse_f(double t, double period) {
  if (!(period > 0.0)) throw DomainError("pulse_f: period must be > 0");
  // fmod keeps the sign of t, so oddness is exact.
  const double r = std::fmod(t, period);
  const double a = std::abs(r);
  const double half = 0.5 * period;
  double v = 0.0;
  if (a > 0.0 && a < half) {
    v = 0.5;
  } else if (a > half) {
    v = -0.5;
  }
  return r < 0.0 ? -v : v;
}

void ModulationSpec::validate(const MaterialParams& m) const {
  require_superconductor(m, "ModulationSpec");
  if (!(base_temperature > 0.0 && base_temperature < m.tc)) {
    throw DomainError("ModulationSpec.base_temperature: must lie in (0, T_c)");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("ModulationSpec.h: must be > 0");
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw DomainError("ModulationSpec.frequency: must be > 0");
  }
  if (critical_field(m, base_temperature) - 0.5 * h < 0.0) {
    throw DomainError("ModulationSpec.h: lower field excursion is negative");
  }
}

double field_waveform(const ModulationSpec& spec, const MaterialParams& m, double t) {
  return critical_field(m, spec.base_temperature) + spec.h * pulse_f(t, spec.period());
}

Phase waveform_phase(const ModulationSpec& spec, const MaterialParams& m, double t) {
  return resolve_phase(m, spec.base_temperature, field_waveform(spec, m, t)).phase;
}

ForceSignal force_signal(double mean, double jump, const ModulationSpec& spec) {
  if (!(spec.frequency > 0.0)) throw DomainError("force_signal: frequency must be > 0");
  return {mean, jump, spec.period()};
}

}  // namespace casimir_sc
