// spin_system.hpp - electron-nuclear spin system parameters.
//
// Conventions: the electron is spin 1/2 and enters through Pauli matrices
// sigma_j (not S_j), the nucleus has spin I with matrices in units of hbar.
// Product basis |m_s> (x) |m_I> with the electron factor first and m values
// descending within each factor. Interaction tensors are 3x3 real symmetric;
// the hyperfine tensor is stored in rad/s.
#pragma once

#include <Eigen/Dense>

namespace spinbath {

struct GTensor {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

  GTensor() = default;
  // Symmetrizes the input; rejects asymmetry beyond 1e-10 relative.
  explicit GTensor(const Eigen::Matrix3d& raw);
  static GTensor axial(double g_perp, double g_par);
};

struct HyperfineTensor {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();  // rad/s

  HyperfineTensor() = default;
  explicit HyperfineTensor(const Eigen::Matrix3d& raw_rad_per_sec);
  static HyperfineTensor axial_megahertz(double a_perp_mhz, double a_par_mhz);
};

struct SpinSystem {
  double nuclear_spin = 1.5;
  GTensor g;
  HyperfineTensor hyperfine;

  int nuclear_dim() const;
  int dim() const;  // 2 * (2I + 1)
};

// Cu(II) porphyrin qubit defaults: I = 3/2, axial g (g_perp on xx and yy),
// axial hyperfine with A_zz = 611 MHz and A_xx = A_yy = 79.4 MHz.
SpinSystem copper_qubit_system();

// Same electron parameters with the nuclear spin removed (I = 0, dim 2).
SpinSystem copper_electron_only_system();

}  // namespace spinbath
