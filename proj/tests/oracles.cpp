// oracles.cpp - reference implementations kept deliberately separate from the
// library code paths they check.
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinbath/constants.hpp"

namespace oracles {

namespace {

// One cyclic sweep of classical Jacobi rotations on a real symmetric matrix.
// Returns the remaining off-diagonal Frobenius norm squared.
double jacobi_sweep(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double app = a(p, p);
      const double aqq = a(q, q);
      const double tau = (aqq - app) / (2.0 * apq);
      const double t = (tau >= 0 ? 1.0 : -1.0) /
                       (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      for (int k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (int k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
    }
  }
  double off = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q) off += a(p, q) * a(p, q);
  return off;
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("jacobi_eigenvalues: square input");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("jacobi_eigenvalues: input is not Hermitian");

  Eigen::MatrixXd emb(2 * n, 2 * n);
  emb.topLeftCorner(n, n) = a.real();
  emb.topRightCorner(n, n) = -a.imag();
  emb.bottomLeftCorner(n, n) = a.imag();
  emb.bottomRightCorner(n, n) = a.real();
  emb = 0.5 * (emb + emb.transpose().eval());  // kill rounding asymmetry

  const double scale = std::max(emb.cwiseAbs().maxCoeff(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double off = jacobi_sweep(emb);
    if (std::sqrt(off) < 1e-15 * scale * n) break;
  }

  std::vector<double> doubled(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < 2 * n; ++k) doubled[static_cast<std::size_t>(k)] = emb(k, k);
  std::sort(doubled.begin(), doubled.end());
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = doubled[static_cast<std::size_t>(2 * k)];
  return out;
}

TwoLevelRates golden_rule_two_level(double jxx_omega0, double jyy_omega0, double jzz_zero,
                                    double omega0_rad_per_sec, double temperature_k) {
  using spinbath::PhysConstants;
  const double h2 = PhysConstants::hbar * PhysConstants::hbar;
  const double boltz = std::exp(-PhysConstants::hbar * omega0_rad_per_sec /
                                (PhysConstants::k_boltz * temperature_k));
  const double r1 = (2.0 / h2) * (jxx_omega0 + jyy_omega0) * (1.0 + boltz);
  const double r_phi = (4.0 / h2) * jzz_zero;
  TwoLevelRates out;
  out.t1_sec = 1.0 / r1;
  out.t2_sec = 1.0 / (0.5 * r1 + r_phi);
  return out;
}

double ou_lorentzian(double omega_rad_per_sec, double variance, double corr_time_sec) {
  const double gamma = 1.0 / corr_time_sec;
  return variance / std::sqrt(2.0 * std::numbers::pi) * gamma /
         (gamma * gamma + omega_rad_per_sec * omega_rad_per_sec);
}

}  // namespace oracles
