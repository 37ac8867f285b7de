// trajectory.hpp - g-tensor time series: file ingestion and synthetic generation.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace spinbath {

// Symmetric 3x3 component order used in files and estimates.
inline constexpr std::array<std::pair<int, int>, 6> kGComponents = {
    {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
inline constexpr std::array<const char*, 6> kGComponentNames = {"gxx", "gyy", "gzz",
                                                                "gxy", "gxz", "gyz"};

struct GTrajectory {
  double dt_sec = 0.0;
  double temperature_k = 0.0;
  std::vector<Eigen::Matrix3d> samples;  // symmetric per frame

  int size() const { return static_cast<int>(samples.size()); }
  double duration_sec() const { return samples.empty() ? 0.0 : dt_sec * (size() - 1); }
};

enum class TrajectoryFormat { csv };

// Reads a trajectory CSV with header t_ps,gxx,gyy,gzz,gxy,gxz,gyz,temperature_K.
// Lines starting with '#' are metadata and skipped. Rejects NaN/inf rows (the
// error names the offending line), timestamp jitter beyond 1e-6 relative, and
// temperature drift within one file.
GTrajectory load_trajectory(const std::string& path,
                            TrajectoryFormat format = TrajectoryFormat::csv);

// Writes the same CSV layout; extra_header lines are emitted as '#' metadata.
void save_trajectory(const std::string& path, const GTrajectory& traj,
                     const std::vector<std::string>& extra_header = {});

// Linear up-sampling onto a grid `factor` times finer (dt -> dt/factor,
// endpoints preserved). A convenience for data delivered on a coarser grid
// than wanted; it adds no information beyond straight-line interpolation.
// factor < 1 or a trajectory with fewer than 2 samples is a domain error.
GTrajectory upsample_linear(const GTrajectory& traj, int factor);

struct OuParams {
  Eigen::Matrix3d mean_g = Eigen::Matrix3d::Identity() * 2.0;
  Eigen::Matrix3d variance = Eigen::Matrix3d::Zero();  // stationary variance per component
  double corr_time_sec = 1e-12;
  double dt_sec = 50e-15;
  double duration_sec = 900e-12;
  double temperature_k = 10.0;
  std::uint64_t seed = 1;
};

// Exact-discretization Ornstein-Uhlenbeck surrogate for an atomistic g(t)
// trajectory: each of the six tensor components relaxes independently with the
// same correlation time. Same seed and parameters reproduce the same samples
// on any platform (the normal deviates are generated by an explicit
// Box-Muller transform, not std::normal_distribution).
GTrajectory synth_ou_trajectory(const OuParams& params);

}  // namespace spinbath
