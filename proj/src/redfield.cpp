#include "spinbath/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"

namespace spinbath {

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero state vector");
  DensityMatrix dm;
  dm.rho = psi * psi.adjoint() / n2;
  return dm;
}

DensityMatrixCheck check_density_matrix(const DensityMatrix& dm) {
  DensityMatrixCheck out;
  out.trace_error = std::abs(dm.rho.trace() - std::complex<double>(1.0, 0.0));
  out.hermiticity_error = (dm.rho - dm.rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (dm.rho + dm.rho.adjoint()));
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.positivity_warning = out.min_eigenvalue < -1e-6;
  return out;
}

namespace {

// Gamma values for every index quadruple, gam[((a n + b) n + c) n + d].
// Frequencies and J values depend only on (c,d), so J is cached per pair.
std::vector<double> gamma_table(const EigenSystem& eigen, const SpectralFunction& j_func) {
  const int n = eigen.dim();
  std::vector<double> jcd(static_cast<size_t>(n) * n * 9);
  for (int c = 0; c < n; ++c) {
    for (int d = 0; d < n; ++d) {
      const double w = eigen.omega(d, c);  // omega_dc = omega_d - omega_c
      for (int j = 0; j < 3; ++j)
        for (int jp = 0; jp < 3; ++jp)
          jcd[(static_cast<size_t>(c) * n + d) * 9 + j * 3 + jp] = j_func(j, jp, w);
    }
  }

  std::vector<double> gam(static_cast<size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::array<std::complex<double>, 3> mab;
      for (int j = 0; j < 3; ++j) mab[static_cast<size_t>(j)] = eigen.sigma[static_cast<size_t>(j)](a, b);
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          const double* jv = &jcd[(static_cast<size_t>(c) * n + d) * 9];
          double acc = 0.0;
          for (int j = 0; j < 3; ++j) {
            for (int jp = 0; jp < 3; ++jp) {
              const std::complex<double> prod =
                  mab[static_cast<size_t>(j)] * eigen.sigma[static_cast<size_t>(jp)](c, d);
              acc += prod.real() * jv[j * 3 + jp];  // Re over the full product, J real
            }
          }
          gam[((static_cast<size_t>(a) * n + b) * n + c) * n + d] = acc;
        }
      }
    }
  }
  return gam;
}

}  // namespace

double gamma_rate(const EigenSystem& eigen, const SpectralFunction& j_func, int a, int b,
                  int c, int d) {
  const int n = eigen.dim();
  if (a < 0 || b < 0 || c < 0 || d < 0 || a >= n || b >= n || c >= n || d >= n) {
    throw std::invalid_argument("gamma_rate: index out of range");
  }
  const double w = eigen.omega(d, c);
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int jp = 0; jp < 3; ++jp) {
      const std::complex<double> prod = eigen.sigma[static_cast<size_t>(j)](a, b) *
                                        eigen.sigma[static_cast<size_t>(jp)](c, d);
      acc += prod.real() * j_func(j, jp, w);
    }
  }
  return acc;
}

RedfieldSystem redfield_tensor(const EigenSystem& eigen, const SpectralFunction& j_func,
                               bool secular) {
  const int n = eigen.dim();
  const std::vector<double> gam = gamma_table(eigen, j_func);
  const auto g = [&gam, n](int a, int b, int c, int d) {
    return gam[((static_cast<size_t>(a) * n + b) * n + c) * n + d];
  };

  // sum_e Gamma_pe,eq, the only contraction Eq-style assembly needs twice.
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int e = 0; e < n; ++e) s1(p, q) += g(p, e, e, q);

  RedfieldSystem rs;
  rs.eigen = eigen;
  rs.secular = secular;
  rs.r = Eigen::MatrixXcd::Zero(n * n, n * n);
  const double inv_h2 = 1.0 / (PhysConstants::hbar * PhysConstants::hbar);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Eigen::Index row = static_cast<Eigen::Index>(a) * n + b;
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          double v = -g(c, a, b, d) - g(d, b, a, c);
          if (b == d) v += s1(a, c);
          if (a == c) v += s1(b, d);
          rs.r(row, static_cast<Eigen::Index>(c) * n + d) = v * inv_h2;
        }
      }
    }
  }

  if (secular) {
    // Keep only blocks whose free-evolution frequencies nearly match; the
    // cutoff is ten times the fastest decay rate on the diagonal.
    double rate_max = 0.0;
    for (Eigen::Index k = 0; k < rs.r.rows(); ++k) {
      rate_max = std::max(rate_max, std::abs(rs.r(k, k).real()));
    }
    const double cutoff = 10.0 * rate_max;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double mismatch = std::abs(eigen.omega(a, b) - eigen.omega(c, d));
            if (mismatch > cutoff) {
              rs.r(static_cast<Eigen::Index>(a) * n + b,
                   static_cast<Eigen::Index>(c) * n + d) = 0.0;
            }
          }
  }
  return rs;
}

namespace {

Eigen::VectorXcd vectorize(const RedfieldSystem& rs, const Eigen::MatrixXcd& rho) {
  const int n = rs.dim();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(rs.vec_index(a, b)) = rho(a, b);
  return v;
}

Eigen::MatrixXcd devectorize(const RedfieldSystem& rs, const Eigen::VectorXcd& v) {
  const int n = rs.dim();
  Eigen::MatrixXcd rho(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rho(a, b) = v(rs.vec_index(a, b));
  return rho;
}

// One adaptive Dormand-Prince 5(4) segment for the constant generator -R.
Eigen::VectorXcd rk_segment(const Eigen::MatrixXcd& r, Eigen::VectorXcd v, double t_span) {
  if (t_span == 0.0) return v;
  constexpr double rtol = 1e-10;
  constexpr double atol = 1e-14;
  const auto deriv = [&r](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return -(r * y); };

  double t = 0.0;
  double h = t_span / 16.0;
  int rejected_in_a_row = 0;
  while (t < t_span) {
    h = std::min(h, t_span - t);
    const Eigen::VectorXcd k1 = deriv(v);
    const Eigen::VectorXcd k2 = deriv(v + h * (k1 / 5.0));
    const Eigen::VectorXcd k3 = deriv(v + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const Eigen::VectorXcd k4 =
        deriv(v + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    const Eigen::VectorXcd k5 =
        deriv(v + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                       64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    const Eigen::VectorXcd k6 =
        deriv(v + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 +
                       49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5));
    const Eigen::VectorXcd y5 =
        v + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
    const Eigen::VectorXcd k7 = deriv(y5);
    const Eigen::VectorXcd y4 =
        v + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 + 393.0 / 640.0 * k4 -
                 92097.0 / 339200.0 * k5 + 187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double scale = atol + rtol * std::max(std::abs(v(i)), std::abs(y5(i)));
      err = std::max(err, std::abs(y5(i) - y4(i)) / scale);
    }
    if (err <= 1.0) {
      t += h;
      v = y5;
      rejected_in_a_row = 0;
    } else if (++rejected_in_a_row > 60) {
      throw NumericalError("propagate: adaptive step control failed to converge");
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.1, 5.0);
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw NumericalError("propagate: step size underflow");
    }
  }
  return v;
}

}  // namespace

std::vector<DensityMatrix> propagate(const RedfieldSystem& rs, const DensityMatrix& rho0,
                                     const std::vector<double>& t_grid_sec,
                                     PropagationMethod method) {
  const int n = rs.dim();
  if (rho0.dim() != n) throw std::invalid_argument("propagate: state dimension mismatch");
  if (t_grid_sec.empty()) throw std::invalid_argument("propagate: empty time grid");
  if (t_grid_sec.front() < 0.0) throw std::invalid_argument("propagate: negative start time");
  for (size_t k = 1; k < t_grid_sec.size(); ++k) {
    if (t_grid_sec[k] <= t_grid_sec[k - 1]) {
      throw std::invalid_argument("propagate: time grid must be strictly ascending");
    }
  }

  std::vector<DensityMatrix> out;
  out.reserve(t_grid_sec.size());
  Eigen::VectorXcd v = vectorize(rs, rho0.rho);

  if (method == PropagationMethod::matrix_exponential) {
    // Steps reuse exponentials of repeated intervals; a uniform grid costs one.
    std::map<double, Eigen::MatrixXcd> cache;
    double t_prev = 0.0;
    for (double t : t_grid_sec) {
      const double dt = t - t_prev;
      if (dt > 0.0) {
        auto it = cache.lower_bound(dt * (1.0 - 1e-12));
        if (it == cache.end() || it->first > dt * (1.0 + 1e-12)) {
          it = cache.emplace(dt, Eigen::MatrixXcd((-dt * rs.r).exp())).first;
        }
        v = it->second * v;
      }
      out.push_back(DensityMatrix{devectorize(rs, v)});
      t_prev = t;
    }
  } else {
    double t_prev = 0.0;
    for (double t : t_grid_sec) {
      v = rk_segment(rs.r, v, t - t_prev);
      out.push_back(DensityMatrix{devectorize(rs, v)});
      t_prev = t;
    }
  }
  return out;
}

SteadyState steady_state(const RedfieldSystem& rs) {
  const int n = rs.dim();
  const int n2 = n * n;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rs.r, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = sv.size() > 0 ? sv(0) * 1e-10 : 0.0;

  SteadyState out;
  out.multiplicity = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cut) {
      ++out.multiplicity;
      out.basis.push_back(devectorize(rs, svd.matrixV().col(k)));
    }
  }
  if (out.multiplicity == 0) {
    throw NumericalError("steady_state: relaxation tensor has no null space");
  }

  // Singular values come out descending, so the kernel is the trailing block.
  const Eigen::MatrixXcd v_ker = svd.matrixV().rightCols(out.multiplicity);

  // Among the kernel, minimize the precession norm ||[H, rho]||: eigenvectors
  // of V^dag diag(omega_ab^2) V. The minimal eigenspace holds the directions
  // that the coherent evolution also leaves fixed.
  Eigen::VectorXd w2(n2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double w = rs.eigen.omega(a, b);
      w2(rs.vec_index(a, b)) = w * w;
    }
  const Eigen::MatrixXcd prec = v_ker.adjoint() * w2.asDiagonal() * v_ker;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (prec + prec.adjoint()));
  const Eigen::VectorXd lam = es.eigenvalues();  // ascending
  const double lam_max = lam(out.multiplicity - 1);
  const double thresh = lam(0) + 1e-12 * std::max(lam_max, 1.0);

  // Within that eigenspace, take the trace-carrying combination (projection of
  // the identity), which removes any traceless degenerate partners.
  Eigen::VectorXcd id_vec = Eigen::VectorXcd::Zero(n2);
  for (int a = 0; a < n; ++a) id_vec(rs.vec_index(a, a)) = 1.0;
  const Eigen::VectorXcd target = v_ker.adjoint() * id_vec;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(out.multiplicity);
  for (int k = 0; k < out.multiplicity; ++k) {
    if (lam(k) <= thresh) {
      const Eigen::VectorXcd ek = es.eigenvectors().col(k);
      x += ek * (ek.adjoint() * target);
    }
  }
  if (x.norm() < 1e-12) {
    throw NumericalError("steady_state: kernel carries no trace, no normalizable state");
  }

  Eigen::MatrixXcd m = devectorize(rs, v_ker * x);
  const double tr_abs = std::abs(m.trace());
  if (tr_abs < 1e-10 * m.norm()) {
    throw NumericalError("steady_state: kernel carries no trace, no normalizable state");
  }
  m *= std::conj(m.trace()) / tr_abs;
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  h /= h.trace().real();
  out.state = DensityMatrix{h};
  return out;
}

DensityMatrix gibbs_state(const EigenSystem& eigen, double temperature_k) {
  if (temperature_k <= 0.0) throw std::invalid_argument("gibbs_state: temperature must be positive");
  const int n = eigen.dim();
  const double beta_hbar = PhysConstants::hbar / (PhysConstants::k_boltz * temperature_k);
  Eigen::VectorXd w(n);
  const double w_min = eigen.energies.minCoeff();
  for (int a = 0; a < n; ++a) w(a) = std::exp(-beta_hbar * (eigen.energies(a) - w_min));
  w /= w.sum();
  DensityMatrix dm;
  dm.rho = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) dm.rho(a, a) = w(a);
  return dm;
}

}  // namespace spinbath
