// test_redfield.cpp - relaxation tensor assembly, propagation, and steady states.
#include "doctest.h"
#include "oracles.hpp"
#include "spinbath/constants.hpp"
#include "spinbath/hamiltonian.hpp"
#include "spinbath/redfield.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

using namespace spinbath;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

SpinSystem electron_g2() {
  SpinSystem sys;
  sys.nuclear_spin = 0.0;
  sys.g = GTensor(Eigen::Matrix3d::Identity() * 2.0);
  sys.hyperfine = HyperfineTensor{};
  return sys;
}

EigenSystem electron_eigen(double b_tesla) {
  const auto sys = electron_g2();
  return eigensystem(sys, build_hamiltonian(sys, Eigen::Vector3d(0, 0, b_tesla)));
}

// Flat spectrum with the thermal asymmetry on negative frequencies.
SpectralFunction flat_kms(double j0, double temperature_k) {
  return [j0, temperature_k](int j, int jp, double omega) {
    if (j != jp) return 0.0;
    if (omega >= 0.0) return j0;
    return j0 * std::exp(PhysConstants::hbar * omega /
                         (PhysConstants::k_boltz * temperature_k));
  };
}

// Structural invariants of a relaxation tensor: total population is conserved
// and Hermitian states stay Hermitian.
void check_tensor_structure(const RedfieldSystem& rs, double tol) {
  const int n = rs.dim();
  const double scale = std::max(max_abs(rs.r), 1e-300);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      std::complex<double> col_sum = 0.0;
      for (int a = 0; a < n; ++a) col_sum += rs.r(rs.vec_index(a, a), rs.vec_index(c, d));
      CHECK(std::abs(col_sum) <= tol * scale);
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const auto lhs = rs.r(rs.vec_index(a, b), rs.vec_index(c, d));
          const auto rhs = std::conj(rs.r(rs.vec_index(b, a), rs.vec_index(d, c)));
          CHECK(std::abs(lhs - rhs) <= tol * scale);
        }
}

}  // namespace

TEST_CASE("gamma rate closed forms on the two-level system") {
  const auto eigen = electron_eigen(1.0);
  const double j0 = 1e-55;  // J units: energy^2 * time
  const auto j_flat = [j0](int j, int jp, double) { return j == jp ? j0 : 0.0; };

  // transverse flip: sigma_x and sigma_y each contribute |<0|sigma|1>|^2 = 1
  CHECK(gamma_rate(eigen, j_flat, 0, 1, 1, 0) == doctest::Approx(2.0 * j0).epsilon(1e-12));
  // pure dephasing element: diagonal sigma_z expectation squared
  CHECK(gamma_rate(eigen, j_flat, 0, 0, 0, 0) == doctest::Approx(j0).epsilon(1e-12));
  // sigma_z has no off-diagonal elements, sigma_x no diagonal ones
  CHECK(gamma_rate(eigen, j_flat, 0, 0, 0, 1) == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("zero spectral density gives a zero tensor") {
  const auto eigen = electron_eigen(0.5);
  const auto rs = redfield_tensor(eigen, [](int, int, double) { return 0.0; });
  CHECK(max_abs(rs.r) == 0.0);
}

TEST_CASE("tensor preserves trace and hermiticity for randomized inputs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  const auto sys = copper_qubit_system();
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Vector3d field(uni(rng), uni(rng), 2.0 * uni(rng));
    const auto eigen = eigensystem(sys, build_hamiltonian(sys, field));
    // random positive-definite J matrix with smooth omega dependence
    Eigen::Matrix3d base = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) base(i, j) = uni(rng) - 0.5;
    const Eigen::Matrix3d jmat = (base * base.transpose() +
                                  0.1 * Eigen::Matrix3d::Identity()) * 1e-56;
    const double wiggle = uni(rng) * 1e-12;
    const auto j_func = [jmat, wiggle](int j, int jp, double omega) {
      return jmat(j, jp) * (1.0 + 0.2 * std::sin(omega * wiggle));
    };
    const auto rs = redfield_tensor(eigen, j_func);
    CHECK(max_abs(rs.r) > 0.0);
    check_tensor_structure(rs, 1e-10);
  }
}

TEST_CASE("transition gamma elements are non-negative for positive definite j") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto sys = copper_qubit_system();
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, Eigen::Vector3d(0, 0, 1)));
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix3d base;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) base(i, j) = uni(rng);
    const Eigen::Matrix3d jmat =
        (base * base.transpose() + 1e-3 * Eigen::Matrix3d::Identity()) * 1e-56;
    const auto j_func = [jmat](int j, int jp, double) { return jmat(j, jp); };
    for (int a = 0; a < eigen.dim(); ++a)
      for (int b = 0; b < eigen.dim(); ++b)
        CHECK(gamma_rate(eigen, j_func, a, b, b, a) >= -1e-70);
  }
}

TEST_CASE("two-level relaxation and dephasing match the golden-rule oracle") {
  const double b = 1.0;
  const double temperature = 10.0;
  const double j0 = 2e-56;
  const auto eigen = electron_eigen(b);
  const auto rs = redfield_tensor(eigen, flat_kms(j0, temperature));
  const double omega0 = eigen.omega(1, 0);
  const auto ref = oracles::golden_rule_two_level(j0, j0, j0, omega0, temperature);

  // population decay rate: sum of up and down transfer rates
  const double w_down = -rs.r(rs.vec_index(0, 0), rs.vec_index(1, 1)).real();
  const double w_up = -rs.r(rs.vec_index(1, 1), rs.vec_index(0, 0)).real();
  CHECK(w_down + w_up == doctest::Approx(1.0 / ref.t1_sec).epsilon(0.01));

  // coherence decay: with isotropic transverse coupling the 01 block is
  // diagonal, so the dephasing rate is read off one element
  CHECK(std::abs(rs.r(rs.vec_index(0, 1), rs.vec_index(1, 0))) <
        1e-10 * max_abs(rs.r));
  CHECK(rs.r(rs.vec_index(0, 1), rs.vec_index(0, 1)).real() ==
        doctest::Approx(1.0 / ref.t2_sec).epsilon(0.01));
}

TEST_CASE("matrix exponential and adaptive rk propagation agree") {
  const auto sys = copper_qubit_system();
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, Eigen::Vector3d(0, 0, 1)));
  const auto rs = redfield_tensor(eigen, flat_kms(1e-56, 10.0));

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = std::complex<double>(0.6, 0.0);
  psi(3) = std::complex<double>(0.0, 0.8);
  const auto rho0 = DensityMatrix::pure(psi);

  // pick a grid spanning a few relaxation times of this tensor
  const double rate = max_abs(rs.r);
  std::vector<double> grid;
  for (int k = 0; k <= 12; ++k) grid.push_back(k * 0.3 / rate);

  const auto via_expm = propagate(rs, rho0, grid, PropagationMethod::matrix_exponential);
  const auto via_rk = propagate(rs, rho0, grid, PropagationMethod::adaptive_rk);
  REQUIRE(via_expm.size() == grid.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    worst = std::max(worst, max_abs(via_expm[k].rho - via_rk[k].rho));
  CHECK(worst < 1e-8);

  // Physicality along the way. The phase-free non-secular equation is not
  // completely positive: a pure initial state transiently dips to eigenvalues
  // around -2e-6 (the warning flag may fire), but the excursion stays bounded.
  for (const auto& dm : via_expm) {
    const auto chk = check_density_matrix(dm);
    CHECK(chk.trace_error < 1e-9);
    CHECK(chk.hermiticity_error < 1e-9);
    CHECK(chk.min_eigenvalue > -1e-5);
  }
}

TEST_CASE("propagate validates its time grid") {
  const auto eigen = electron_eigen(1.0);
  const auto rs = redfield_tensor(eigen, flat_kms(1e-56, 10.0));
  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  const auto rho0 = DensityMatrix::pure(psi);
  CHECK_THROWS_AS(propagate(rs, rho0, {}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(rs, rho0, {0.0, 1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(rs, rho0, {-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("steady state reproduces the gibbs state under detailed balance") {
  // Two-level system: the kernel is unique and must be Gibbs entrywise.
  {
    const auto eigen = electron_eigen(1.0);
    const auto rs = redfield_tensor(eigen, flat_kms(1e-56, 10.0));
    const auto ss = steady_state(rs);
    CHECK(ss.multiplicity == 1);
    const auto gibbs = gibbs_state(eigen, 10.0);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double ref = std::max(std::abs(gibbs.rho(a, b)), 1e-9);
        CHECK(std::abs(ss.state.rho(a, b) - gibbs.rho(a, b)) / ref < 1e-6);
      }
  }

  // Full copper system. The coupling operators act on the electron factor
  // alone, so the relaxation tensor conserves a 16-dimensional operator
  // manifold (one per nuclear matrix unit); the kernel is degenerate and its
  // dimension is reported honestly. The only non-precessing direction inside
  // the kernel is the thermal one, and the Gibbs state itself is annihilated
  // by R, so the returned representative must match Gibbs closely.
  const auto sys = copper_qubit_system();
  const double temperature = 10.0;
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, Eigen::Vector3d(0, 0, 1)));
  const auto rs = redfield_tensor(eigen, flat_kms(3e-56, temperature));
  const auto ss = steady_state(rs);
  CHECK(ss.multiplicity == 16);
  const auto gibbs = gibbs_state(eigen, temperature);

  // R annihilates the Gibbs state (detailed balance is exact).
  Eigen::VectorXcd gv(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) gv(rs.vec_index(a, b)) = gibbs.rho(a, b);
  CHECK((rs.r * gv).norm() <= 1e-12 * max_abs(rs.r) * gv.norm() * 64);

  double worst_pop = 0.0;
  double worst_coh = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      if (a == b) {
        const double ref = gibbs.rho(a, a).real();
        worst_pop = std::max(worst_pop, std::abs(ss.state.rho(a, a).real() - ref) / ref);
      } else {
        worst_coh = std::max(worst_coh, std::abs(ss.state.rho(a, b)));
      }
    }
  CHECK(worst_pop < 1e-6);
  CHECK(worst_coh < 1e-9);
}

TEST_CASE("zero tensor reports the fully degenerate kernel") {
  const auto eigen = electron_eigen(1.0);
  const auto rs = redfield_tensor(eigen, [](int, int, double) { return 0.0; });
  const auto ss = steady_state(rs);
  CHECK(ss.multiplicity == 4);  // n^2 for n = 2
  CHECK(max_abs(ss.state.rho - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
}

TEST_CASE("pure dephasing conserves every population") {
  // J couples only sigma_z at omega = 0: diagonal states are all stationary
  const auto sys = copper_qubit_system();
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, Eigen::Vector3d(0, 0, 1)));
  const auto j_func = [](int j, int jp, double omega) {
    if (j != 2 || jp != 2) return 0.0;
    return std::abs(omega) < 1e6 ? 1e-56 : 0.0;
  };
  const auto rs = redfield_tensor(eigen, j_func);
  CHECK(max_abs(rs.r) > 0.0);
  const auto ss = steady_state(rs);
  CHECK(ss.multiplicity >= 8);  // at least one stationary state per population
}

TEST_CASE("secular approximation changes populations by less than a percent") {
  // Weak coupling, so the 10x-max-rate cutoff sits far below every Bohr
  // frequency gap and the filter genuinely removes the non-secular elements.
  const auto sys = copper_qubit_system();
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, Eigen::Vector3d(0, 0, 1)));
  const auto j_func = flat_kms(1e-61, 10.0);
  const auto full = redfield_tensor(eigen, j_func, false);
  const auto secular = redfield_tensor(eigen, j_func, true);
  CHECK(max_abs(full.r - secular.r) > 0.0);  // the cutoff removed something

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(2) = 1.0;
  const auto rho0 = DensityMatrix::pure(psi);
  const double rate = max_abs(full.r);
  std::vector<double> grid;
  for (int k = 0; k <= 8; ++k) grid.push_back(k * 0.25 / rate);
  const auto a = propagate(full, rho0, grid);
  const auto b = propagate(secular, rho0, grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (int p = 0; p < 8; ++p) {
      const double pa = a[k].rho(p, p).real();
      const double pb = b[k].rho(p, p).real();
      CHECK(std::abs(pa - pb) < 0.01);  // populations are order 1
    }
}

TEST_CASE("density matrix check flags defects") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.2;
  rho(1, 1) = -0.2;
  rho(0, 1) = std::complex<double>(0.0, 0.3);
  rho(1, 0) = std::complex<double>(0.0, 0.3);  // not the conjugate: hermiticity defect
  const auto chk = check_density_matrix(DensityMatrix{rho});
  CHECK(chk.trace_error < 1e-12);
  CHECK(chk.hermiticity_error > 0.1);
  CHECK(chk.min_eigenvalue < -0.1);
  CHECK(chk.positivity_warning);
}
