#include "spinbath/spin_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace spinbath {

using namespace std::complex_literals;

SpinMatrices spin_operators(double s) {
  const double two_s = 2.0 * s;
  if (s < 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12) {
    throw std::invalid_argument("spin_operators: 2s must be a non-negative integer");
  }
  const int dim = static_cast<int>(std::round(two_s)) + 1;

  SpinMatrices out;
  out.sp = Eigen::MatrixXcd::Zero(dim, dim);
  out.sz = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = s - k;  // m value at row/column k
    out.sz(k, k) = m;
    // <m|s+|m-1> = sqrt(s(s+1) - m(m-1)); |m-1> sits one index below |m>.
    if (k + 1 < dim) out.sp(k, k + 1) = std::sqrt(s * (s + 1.0) - m * (m - 1.0));
  }
  out.sm = out.sp.adjoint();
  out.sx = 0.5 * (out.sp + out.sm);
  out.sy = -0.5i * (out.sp - out.sm);
  return out;
}

std::array<Eigen::Matrix2cd, 3> pauli_matrices() {
  const SpinMatrices half = spin_operators(0.5);
  return {Eigen::Matrix2cd(2.0 * half.sx), Eigen::Matrix2cd(2.0 * half.sy),
          Eigen::Matrix2cd(2.0 * half.sz)};
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace spinbath
