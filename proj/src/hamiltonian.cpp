#include "spinbath/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinbath/constants.hpp"
#include "spinbath/spin_ops.hpp"

namespace spinbath {

namespace {

Eigen::Matrix3d symmetrized(const Eigen::Matrix3d& raw, const char* label) {
  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  if ((raw - raw.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument(std::string(label) + ": tensor is not symmetric");
  }
  return 0.5 * (raw + raw.transpose());
}

}  // namespace

GTensor::GTensor(const Eigen::Matrix3d& raw) : m(symmetrized(raw, "GTensor")) {}

GTensor GTensor::axial(double g_perp, double g_par) {
  GTensor g;
  g.m = Eigen::Vector3d(g_perp, g_perp, g_par).asDiagonal();
  return g;
}

HyperfineTensor::HyperfineTensor(const Eigen::Matrix3d& raw_rad_per_sec)
    : m(symmetrized(raw_rad_per_sec, "HyperfineTensor")) {}

HyperfineTensor HyperfineTensor::axial_megahertz(double a_perp_mhz, double a_par_mhz) {
  constexpr double mhz_to_rad = 2.0 * std::numbers::pi * 1e6;
  HyperfineTensor a;
  a.m = Eigen::Vector3d(a_perp_mhz, a_perp_mhz, a_par_mhz).asDiagonal();
  a.m *= mhz_to_rad;
  return a;
}

int SpinSystem::nuclear_dim() const {
  const double two_i = 2.0 * nuclear_spin;
  if (nuclear_spin < 0.0 || std::abs(two_i - std::round(two_i)) > 1e-12) {
    throw std::invalid_argument("SpinSystem: 2I must be a non-negative integer");
  }
  return static_cast<int>(std::round(two_i)) + 1;
}

int SpinSystem::dim() const { return 2 * nuclear_dim(); }

SpinSystem copper_qubit_system() {
  SpinSystem sys;
  sys.nuclear_spin = 1.5;
  sys.g = GTensor::axial(2.1106, 2.0364);
  sys.hyperfine = HyperfineTensor::axial_megahertz(79.4, 611.0);
  return sys;
}

SpinSystem copper_electron_only_system() {
  SpinSystem sys = copper_qubit_system();
  sys.nuclear_spin = 0.0;
  sys.hyperfine = HyperfineTensor{};
  return sys;
}

Eigen::MatrixXcd build_hamiltonian(const SpinSystem& sys, const Eigen::Vector3d& field_tesla) {
  const int nd = sys.nuclear_dim();
  const auto sigma = pauli_matrices();
  const SpinMatrices nuc = spin_operators(sys.nuclear_spin);
  const std::array<const Eigen::MatrixXcd*, 3> ivec = {&nuc.sx, &nuc.sy, &nuc.sz};
  const Eigen::MatrixXcd id_nuc = Eigen::MatrixXcd::Identity(nd, nd);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(sys.dim(), sys.dim());

  // Electron Zeeman: (mu_B / 2 hbar) B_i g_ij sigma_j (x) 1.
  const Eigen::Vector3d bg = sys.g.m.transpose() * field_tesla;  // bg_j = sum_i B_i g_ij
  const double zeeman_pref = PhysConstants::mu_bohr / (2.0 * PhysConstants::hbar);
  for (int j = 0; j < 3; ++j) {
    if (bg(j) != 0.0) h += zeeman_pref * bg(j) * kron(sigma[j], id_nuc);
  }

  // Hyperfine: (1/2) A_ij sigma_i (x) I_j with A in rad/s.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double a_ij = sys.hyperfine.m(i, j);
      if (a_ij != 0.0) h += 0.5 * a_ij * kron(sigma[i], *ivec[j]);
    }
  }
  return h;
}

namespace {

// Canonical orthonormal basis for a degenerate eigenspace: project standard
// basis vectors onto the space, pick them greedily by residual norm, and
// orthonormalize. The result depends only on the subspace, not on the
// arbitrary rotation returned by the eigensolver.
Eigen::MatrixXcd canonical_block_basis(const Eigen::MatrixXcd& block) {
  const Eigen::Index n = block.rows();
  const Eigen::Index k = block.cols();
  const Eigen::MatrixXcd proj = block * block.adjoint();

  std::vector<Eigen::VectorXcd> chosen;
  std::vector<bool> used(static_cast<size_t>(n), false);
  while (static_cast<Eigen::Index>(chosen.size()) < k) {
    double best_norm = -1.0;
    Eigen::Index best_i = -1;
    Eigen::VectorXcd best_r;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<size_t>(i)]) continue;
      Eigen::VectorXcd r = proj.col(i);
      for (const auto& q : chosen) r -= q.dot(r) * q;
      const double nr = r.norm();
      if (nr > best_norm + 1e-14) {
        best_norm = nr;
        best_i = i;
        best_r = std::move(r);
      }
    }
    if (best_i < 0 || best_norm < 1e-10) {
      throw std::runtime_error("eigensystem: degenerate block basis construction failed");
    }
    used[static_cast<size_t>(best_i)] = true;
    chosen.push_back(best_r / best_norm);
  }

  Eigen::MatrixXcd out(n, k);
  for (Eigen::Index c = 0; c < k; ++c) out.col(c) = chosen[static_cast<size_t>(c)];
  return out;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best + 1e-14) {
      best = std::abs(v(i));
      pivot = i;
    }
  }
  if (best > 0.0) v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

}  // namespace

EigenSystem eigensystem(const SpinSystem& sys, const Eigen::MatrixXcd& h_over_hbar) {
  const int n = static_cast<int>(h_over_hbar.rows());
  if (h_over_hbar.cols() != n || n != sys.dim()) {
    throw std::invalid_argument("eigensystem: Hamiltonian dimension does not match system");
  }
  const double scale = std::max(1.0, h_over_hbar.cwiseAbs().maxCoeff());
  if ((h_over_hbar - h_over_hbar.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("eigensystem: Hamiltonian is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (h_over_hbar + h_over_hbar.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensystem: diagonalization failed");
  }

  EigenSystem es;
  es.energies = solver.eigenvalues();
  es.states = solver.eigenvectors();

  // Replace each degenerate block with its canonical basis.
  const double deg_tol = 1e-10 * std::max(1.0, es.energies.cwiseAbs().maxCoeff());
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && es.energies(stop) - es.energies(stop - 1) <= deg_tol) ++stop;
    if (stop - start > 1) {
      es.states.middleCols(start, stop - start) =
          canonical_block_basis(es.states.middleCols(start, stop - start));
    }
    start = stop;
  }
  for (int c = 0; c < n; ++c) fix_phase(es.states.col(c));

  const auto sigma = pauli_matrices();
  const Eigen::MatrixXcd id_nuc =
      Eigen::MatrixXcd::Identity(sys.nuclear_dim(), sys.nuclear_dim());
  for (int j = 0; j < 3; ++j) {
    es.sigma[j] = es.states.adjoint() * kron(sigma[j], id_nuc) * es.states;
  }
  return es;
}

ZeemanSpectrum zeeman_spectrum(const SpinSystem& sys, const std::vector<double>& field_grid_tesla,
                               const Eigen::Vector3d& direction) {
  if (field_grid_tesla.empty()) {
    throw std::invalid_argument("zeeman_spectrum: empty field grid");
  }
  const double dn = direction.norm();
  if (dn <= 0.0) throw std::invalid_argument("zeeman_spectrum: zero field direction");
  const Eigen::Vector3d unit = direction / dn;

  const int n = sys.dim();
  ZeemanSpectrum zs;
  zs.field_tesla = field_grid_tesla;
  zs.energies_rad_per_sec.resize(static_cast<Eigen::Index>(field_grid_tesla.size()), n);

  Eigen::MatrixXcd prev_states;
  for (size_t k = 0; k < field_grid_tesla.size(); ++k) {
    EigenSystem es = eigensystem(sys, build_hamiltonian(sys, field_grid_tesla[k] * unit));

    std::vector<int> order(static_cast<size_t>(n));
    if (k == 0) {
      for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    } else {
      // Greedy assignment on |<prev_branch | new_state>|, largest overlap first.
      Eigen::MatrixXd ov = (prev_states.adjoint() * es.states).cwiseAbs();
      std::vector<bool> row_used(static_cast<size_t>(n), false);
      std::vector<bool> col_used(static_cast<size_t>(n), false);
      for (int pick = 0; pick < n; ++pick) {
        int bi = -1, bj = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
          if (row_used[static_cast<size_t>(i)]) continue;
          for (int j = 0; j < n; ++j) {
            if (col_used[static_cast<size_t>(j)]) continue;
            if (ov(i, j) > best) {
              best = ov(i, j);
              bi = i;
              bj = j;
            }
          }
        }
        order[static_cast<size_t>(bi)] = bj;
        row_used[static_cast<size_t>(bi)] = true;
        col_used[static_cast<size_t>(bj)] = true;
      }
    }

    Eigen::MatrixXcd branch_states(n, n);
    for (int i = 0; i < n; ++i) {
      zs.energies_rad_per_sec(static_cast<Eigen::Index>(k), i) =
          es.energies(order[static_cast<size_t>(i)]);
      branch_states.col(i) = es.states.col(order[static_cast<size_t>(i)]);
    }
    prev_states = branch_states;
  }
  return zs;
}

}  // namespace spinbath
