// hamiltonian.hpp - static spin Hamiltonian and its eigensystem.
//
// The Hamiltonian is stored as H/hbar in rad/s:
//   H/hbar = (mu_B / 2 hbar) sum_ij B_i g_ij (sigma_j (x) 1)
//          + (1/2) sum_ij A_ij (sigma_i (x) I_j)
// with A_ij in rad/s. Note the electron Zeeman and hyperfine terms use Pauli
// matrices, which carries a factor 2 relative to the S-operator convention.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "spinbath/spin_system.hpp"

namespace spinbath {

struct EigenSystem {
  Eigen::VectorXd energies;                  // rad/s, ascending
  Eigen::MatrixXcd states;                   // unitary, columns are eigenvectors
  std::array<Eigen::MatrixXcd, 3> sigma;     // <a| sigma_j (x) 1 |b> in the eigenbasis

  int dim() const { return static_cast<int>(energies.size()); }
  // omega_ab = omega_a - omega_b, the Bohr frequency of the (a,b) pair.
  double omega(int a, int b) const { return energies(a) - energies(b); }
};

// H/hbar for field B (tesla, lab frame). Hermitian by construction.
Eigen::MatrixXcd build_hamiltonian(const SpinSystem& sys, const Eigen::Vector3d& field_tesla);

// Dense Hermitian diagonalization with deterministic conventions: eigenvalues
// ascending, each eigenvector's largest-magnitude component made real positive,
// and degenerate blocks given a canonical orthonormal basis independent of the
// backend's arbitrary rotation. Throws std::invalid_argument if H is not
// Hermitian to 1e-9 relative.
EigenSystem eigensystem(const SpinSystem& sys, const Eigen::MatrixXcd& h_over_hbar);

struct ZeemanSpectrum {
  std::vector<double> field_tesla;
  Eigen::MatrixXd energies_rad_per_sec;  // one row per field, branch-ordered columns
};

// Eigenvalues along a field magnitude grid with branch following: at each step
// levels are matched to the previous step's by maximal eigenvector overlap, so
// columns trace adiabatic branches through avoided crossings.
ZeemanSpectrum zeeman_spectrum(const SpinSystem& sys, const std::vector<double>& field_grid_tesla,
                               const Eigen::Vector3d& direction);

}  // namespace spinbath
