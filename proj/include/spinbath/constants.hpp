// constants.hpp - CODATA 2018 physical constants, SI units throughout.
#pragma once

#include <numbers>

namespace spinbath {

struct PhysConstants {
  static constexpr double mu_bohr = 9.2740100783e-24;  // Bohr magneton, J/T
  static constexpr double hbar = 1.054571817e-34;      // reduced Planck, J s
  static constexpr double k_boltz = 1.380649e-23;      // Boltzmann, J/K
  static constexpr double c_light = 2.99792458e8;      // speed of light, m/s
};

// Angular frequency carried by one wavenumber: 2*pi*c*100 rad/s per cm^-1.
inline constexpr double rad_per_sec_per_cm1 =
    200.0 * std::numbers::pi * PhysConstants::c_light;

}  // namespace spinbath
