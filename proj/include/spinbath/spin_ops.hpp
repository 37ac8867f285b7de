// spin_ops.hpp - dense spin matrices in the |s,m> basis with m descending.
#pragma once

#include <Eigen/Dense>
#include <array>

namespace spinbath {

struct SpinMatrices {
  Eigen::MatrixXcd sx, sy, sz;  // Cartesian components, units of hbar
  Eigen::MatrixXcd sp, sm;      // ladder operators s+/s-
};

// Spin matrices for spin quantum number s (2s must be a non-negative integer).
// Basis ordering is m = s, s-1, ..., -s, so index 0 is the m = +s state.
SpinMatrices spin_operators(double s);

// Pauli matrices: sigma_j = 2 * (spin-1/2 matrices), indexed x, y, z.
std::array<Eigen::Matrix2cd, 3> pauli_matrices();

// Kronecker product, row-major blocks: (A kron B)(i*p+k, j*q+l) = A(i,j)B(k,l).
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace spinbath
