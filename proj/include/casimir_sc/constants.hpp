#pragma once

// Unit system: energies (and frequencies, hbar = 1) in eV, lengths in nm,
// temperatures in K, magnetic fields in Oe, reported forces in fN.

namespace casimir_sc {

struct PhysConstants {
  static constexpr double hbar_c = 197.3269804;              // eV nm
  static constexpr double k_b = 8.617333262e-5;              // eV / K
  static constexpr double ev_per_nm_to_newton = 1.602176634e-10;
  static constexpr double newton_to_femtonewton = 1e15;
  static constexpr const char* version = "CODATA-2018";
};

inline constexpr double kPi = 3.14159265358979323846;

// 2 Delta(0) = 3.528 k_B T_c
inline constexpr double kBcsGapRatio = 1.764;

}  // namespace casimir_sc
