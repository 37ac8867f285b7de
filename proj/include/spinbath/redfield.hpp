// redfield.hpp - Redfield tensor assembly and density-matrix propagation.
//
// Works in the interaction picture: d/dt rho_ab = -sum_cd R_ab,cd rho_cd with
// no coherent commutator term, so coherences decay without oscillating. All
// frequencies are rad/s, R elements are 1/s, and rho lives in the eigenbasis
// of the static Hamiltonian.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spinbath/hamiltonian.hpp"
#include "spinbath/spectral_density.hpp"

namespace spinbath {

struct DensityMatrix {
  Eigen::MatrixXcd rho;

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  int dim() const { return static_cast<int>(rho.rows()); }
};

struct DensityMatrixCheck {
  double trace_error = 0.0;        // |tr(rho) - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;     // most negative population
  bool positivity_warning = false; // eigenvalue below -1e-6
};

DensityMatrixCheck check_density_matrix(const DensityMatrix& dm);

struct RedfieldSystem {
  EigenSystem eigen;
  Eigen::MatrixXcd r;  // n^2 x n^2 acting on vec(rho), vec index a*n + b
  bool secular = false;

  // Metadata describing how the tensor was built; not used numerically.
  Eigen::Vector3d field_tesla = Eigen::Vector3d::Zero();
  double temperature_k = 0.0;
  std::string model_name;

  int dim() const { return eigen.dim(); }
  Eigen::Index vec_index(int a, int b) const {
    return static_cast<Eigen::Index>(a) * dim() + b;
  }
};

// Rate function of one index quadruple:
//   Gamma_ab,cd = sum_jj' Re[ <a|sigma_j|b> <c|sigma_j'|d> J_jj'(omega_d - omega_c) ]
// The frequency argument always comes from the quadruple's own last index
// pair, and the real part spans the full product, making the value real.
double gamma_rate(const EigenSystem& eigen, const SpectralFunction& j_func, int a, int b,
                  int c, int d);

// Assembles R_ab,cd = (1/hbar^2) [ delta_bd sum_e Gamma_ae,ec
//                                 - Gamma_ca,bd - Gamma_db,ac
//                                 + delta_ac sum_e Gamma_be,ed ].
// With secular = true, elements with |omega_ab - omega_cd| larger than ten
// times the fastest relaxation rate are zeroed after assembly.
RedfieldSystem redfield_tensor(const EigenSystem& eigen, const SpectralFunction& j_func,
                               bool secular = false);

enum class PropagationMethod { matrix_exponential, adaptive_rk };

// rho(t_k) = exp(-R t_k) rho(0) on a strictly ascending grid with t_0 >= 0.
// The default path steps with cached matrix exponentials; the adaptive
// Runge-Kutta path integrates the same generator and agrees to 1e-8.
std::vector<DensityMatrix> propagate(const RedfieldSystem& rs, const DensityMatrix& rho0,
                                     const std::vector<double>& t_grid_sec,
                                     PropagationMethod method =
                                         PropagationMethod::matrix_exponential);

struct SteadyState {
  DensityMatrix state;   // trace-1 kernel representative
  int multiplicity = 1;  // kernel dimension of R
  std::vector<Eigen::MatrixXcd> basis;  // devectorized kernel basis vectors
};

// Stationary state of the dynamics. The relaxation tensor alone can carry a
// degenerate null space (couplings that act on only one subsystem conserve a
// whole operator manifold), so among R's kernel the returned state is the
// direction with the least coherent-precession norm ||[H, rho]|| — the only
// kernel element that is also stationary under the full equation of motion.
// multiplicity reports the kernel dimension of R itself, with a basis
// attached whenever callers want the conserved manifold.
SteadyState steady_state(const RedfieldSystem& rs);

// Thermal state of the eigensystem at temperature T, diagonal in its basis.
DensityMatrix gibbs_state(const EigenSystem& eigen, double temperature_k);

}  // namespace spinbath
