// relaxometry.hpp - T1/T2 measurement protocol on top of the Redfield engine:
// polarized initial states, decay signals, exponential fits, field and
// temperature sweeps with power-law exponents.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinbath/redfield.hpp"

namespace spinbath {

struct InitialState {
  enum class Kind { z_polarized, x_polarized };
  Kind kind = Kind::z_polarized;
  double m_i = 1.5;  // nuclear projection; +I by default for the copper qubit
};

// Product state |m_s = +1/2>|m_I> (z) or its equal-weight superposition with
// |m_s = -1/2>|m_I> (x), expressed in the eigenbasis of H_S.
DensityMatrix initial_state(const SpinSystem& sys, const EigenSystem& eigen,
                            const InitialState& spec);

enum class Observable { sz, sx_magnitude };

struct DecaySignal {
  std::vector<double> t_sec;
  std::vector<double> y;       // <S_z> or |<S_+>|, in units of hbar
  double y_inf = 0.0;          // fitted asymptote, filled by fit_decay users
};

// Expectation values along a propagated trajectory. sx_magnitude returns the
// coherence envelope |<S_+>|, which decays monotonically in the interaction
// picture and stays within the spin-1/2 bound 1/2.
DecaySignal observable_signal(const std::vector<DensityMatrix>& rhos,
                              const EigenSystem& eigen, Observable obs,
                              const std::vector<double>& t_grid_sec);

struct DecayFit {
  double time_const_sec = 0.0;
  double amplitude = 0.0;
  double asymptote = 0.0;
  double r_squared = 0.0;
  bool converged = false;
  bool flat = false;         // signal shows no resolvable decay
  bool low_quality = false;  // converged but r_squared < 0.995
};

// Least squares of y(t) = y_inf + A exp(-t/T). The decay constant is found by
// a one-dimensional search with (y_inf, A) eliminated exactly at each trial T;
// the bracket is seeded by log-linear regression. Needs >= 8 points.
DecayFit fit_decay(const DecaySignal& sig);

struct RelaxationTime {
  double seconds = 0.0;
  double r_squared = 0.0;
  bool infinite = false;  // no decay channel at all (J = 0 along this path)
  bool ok = false;        // fit converged and the value is usable
  DecayFit fit;
};

// Full protocol: Hamiltonian at B, Redfield tensor from the model, propagate
// the polarized state on an auto-scaled grid (span 10 / initial-rate
// estimate, refined once if the fitted constant is off scale), fit the decay.
RelaxationTime t1(const SpinSystem& sys, const SpectralDensityModel& model,
                  const Eigen::Vector3d& field_tesla, double temperature_k,
                  std::optional<double> m_i = std::nullopt);
RelaxationTime t2(const SpinSystem& sys, const SpectralDensityModel& model,
                  const Eigen::Vector3d& field_tesla, double temperature_k,
                  std::optional<double> m_i = std::nullopt);

// One named bath configuration within a sweep (toggles + noise parameters laid
// over a shared base model).
struct BathModel {
  std::string name;
  bool spin_lattice = true;
  bool magnetic_noise = false;
  NoiseParams noise{};
};

// The three configurations the simulator compares by default: pure
// spin-lattice, hybrid with field-independent noise, hybrid with b > 0.
std::vector<BathModel> default_model_family();

struct ScalingFit {
  double slope = 0.0;
  double std_error = 0.0;
  int n_used = 0;
};

// OLS slope of log y vs log x restricted to x in [range.first, range.second];
// needs at least 3 usable points with y > 0.
ScalingFit scaling_exponent(const std::vector<double>& x, const std::vector<double>& y,
                            std::pair<double, double> range);

struct SweepPoint {
  double b_tesla = 0.0;
  RelaxationTime t1;
  RelaxationTime t2;
};

struct SweepExponents {
  std::pair<double, double> range_tesla;
  ScalingFit t1_fit;
  ScalingFit t2_fit;
  bool ok = false;
};

struct ModelSweep {
  std::string model_name;
  bool with_hyperfine = true;
  std::vector<SweepPoint> points;
  std::vector<SweepExponents> exponents;
};

struct SweepResult {
  double temperature_k = 0.0;
  std::vector<ModelSweep> models;
};

// 24 log-spaced field magnitudes over 0.01 to 10 T.
std::vector<double> default_field_grid();

// T1/T2 for every model at every field point. with_hyperfine = false zeroes
// the hyperfine tensor (the A = 0 comparison variant). Exponent fits run over
// each requested field range; default is the 1 to 10 T window.
SweepResult field_sweep(const SpinSystem& sys, const SpectralDensityModel& base,
                        const std::vector<BathModel>& family,
                        const std::vector<double>& field_grid_tesla, double temperature_k,
                        bool with_hyperfine,
                        const std::vector<std::pair<double, double>>& exponent_ranges = {
                            {1.0, 10.0}});

struct TemperatureSweepResult {
  double b_tesla = 0.0;
  std::vector<double> temperature_k;
  std::vector<RelaxationTime> t1;
  ScalingFit exponent;
};

// T1 across temperatures at fixed field, plus the log-log slope. Stand-in
// spectra scale as (T/t_ref)^alpha automatically; tabulated spectra are used
// as-is and the caller is responsible for their temperature validity.
TemperatureSweepResult temperature_sweep(const SpinSystem& sys,
                                         const SpectralDensityModel& base,
                                         const BathModel& model,
                                         const Eigen::Vector3d& field_tesla,
                                         const std::vector<double>& temperatures_k);

}  // namespace spinbath
