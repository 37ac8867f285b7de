#include "spinbath/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "spinbath/csv_io.hpp"
#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

constexpr std::array<const char*, 8> kTrajectoryHeader = {
    "t_ps", "gxx", "gyy", "gzz", "gxy", "gxz", "gyz", "temperature_K"};

// Uniform in (0,1], then Box-Muller. Explicit so the stream is identical on
// every platform for a given seed.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = uniform_open(rng);
  const double u2 = uniform_open(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

GTrajectory load_trajectory(const std::string& path, TrajectoryFormat format) {
  if (format != TrajectoryFormat::csv) {
    throw std::invalid_argument("load_trajectory: unsupported format");
  }
  const CsvTable table = read_csv(path);
  if (table.header.size() != kTrajectoryHeader.size()) {
    throw IoError(path + ": expected " + std::to_string(kTrajectoryHeader.size()) +
                  " columns in trajectory header");
  }
  for (size_t c = 0; c < kTrajectoryHeader.size(); ++c) {
    if (table.header[c] != kTrajectoryHeader[c]) {
      throw IoError(path + ": trajectory column " + std::to_string(c + 1) + " must be '" +
                    kTrajectoryHeader[c] + "', got '" + table.header[c] + "'");
    }
  }
  if (table.rows.size() < 2) throw IoError(path + ": need at least two samples");

  GTrajectory traj;
  traj.samples.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    for (size_t c = 0; c < table.rows[r].size(); ++c) {
      if (!std::isfinite(table.rows[r][c])) {
        throw IoError(path + ":" + std::to_string(table.line_numbers[r]) +
                      ": non-finite value in column '" + table.header[c] + "'");
      }
    }
    Eigen::Matrix3d g;
    for (size_t c = 0; c < kGComponents.size(); ++c) {
      const auto [i, j] = kGComponents[c];
      g(i, j) = g(j, i) = table.rows[r][c + 1];
    }
    traj.samples.push_back(g);
  }

  const double t0 = table.rows.front()[0];
  const double t1 = table.rows.back()[0];
  const double span_ps = t1 - t0;
  if (span_ps <= 0.0) throw IoError(path + ": timestamps must increase");
  const double dt_ps = span_ps / static_cast<double>(table.rows.size() - 1);
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const double expected = t0 + dt_ps * static_cast<double>(r);
    if (std::abs(table.rows[r][0] - expected) > 1e-6 * std::max(std::abs(expected), dt_ps)) {
      throw IoError(path + ":" + std::to_string(table.line_numbers[r]) +
                    ": non-uniform timestamp (jitter above 1e-6 relative)");
    }
  }
  traj.dt_sec = dt_ps * 1e-12;

  traj.temperature_k = table.rows.front().back();
  for (size_t r = 0; r < table.rows.size(); ++r) {
    if (std::abs(table.rows[r].back() - traj.temperature_k) >
        1e-6 * std::max(1.0, std::abs(traj.temperature_k))) {
      throw IoError(path + ":" + std::to_string(table.line_numbers[r]) +
                    ": temperature drifts within one trajectory file");
    }
  }
  if (traj.temperature_k <= 0.0) throw IoError(path + ": temperature must be positive");
  return traj;
}

void save_trajectory(const std::string& path, const GTrajectory& traj,
                     const std::vector<std::string>& extra_header) {
  std::vector<std::string> header(kTrajectoryHeader.begin(), kTrajectoryHeader.end());
  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.samples.size());
  for (int k = 0; k < traj.size(); ++k) {
    std::vector<std::string> row;
    row.reserve(8);
    row.push_back(format_double(traj.dt_sec * 1e12 * k));
    for (const auto& [i, j] : kGComponents) {
      row.push_back(format_double(traj.samples[static_cast<size_t>(k)](i, j)));
    }
    row.push_back(format_double(traj.temperature_k));
    rows.push_back(std::move(row));
  }
  write_csv(path, extra_header, header, rows);
}

GTrajectory synth_ou_trajectory(const OuParams& params) {
  if (params.corr_time_sec <= 0.0) {
    throw std::invalid_argument("synth_ou_trajectory: correlation time must be positive");
  }
  if (params.dt_sec <= 0.0 || params.dt_sec >= 0.5 * params.corr_time_sec) {
    throw std::invalid_argument(
        "synth_ou_trajectory: need dt < corr_time/2 to resolve the process");
  }
  if (params.duration_sec < params.dt_sec) {
    throw std::invalid_argument("synth_ou_trajectory: duration shorter than one step");
  }
  std::array<double, 6> sigma{};
  for (size_t c = 0; c < kGComponents.size(); ++c) {
    const auto [i, j] = kGComponents[c];
    const double var = params.variance(i, j);
    if (var < 0.0) throw std::invalid_argument("synth_ou_trajectory: negative variance");
    sigma[c] = std::sqrt(var);
  }

  const int n = static_cast<int>(std::llround(params.duration_sec / params.dt_sec)) + 1;
  const double phi = std::exp(-params.dt_sec / params.corr_time_sec);
  const double kick = std::sqrt(1.0 - phi * phi);

  std::mt19937_64 rng(params.seed);
  std::array<double, 6> x{};
  // Start from the stationary distribution so every window is equivalent.
  for (size_t c = 0; c < 6; ++c) x[c] = sigma[c] * standard_normal(rng);

  GTrajectory traj;
  traj.dt_sec = params.dt_sec;
  traj.temperature_k = params.temperature_k;
  traj.samples.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (k > 0) {
      for (size_t c = 0; c < 6; ++c) {
        x[c] = x[c] * phi + sigma[c] * kick * standard_normal(rng);
      }
    }
    Eigen::Matrix3d g = params.mean_g;
    for (size_t c = 0; c < 6; ++c) {
      const auto [i, j] = kGComponents[c];
      g(i, j) += x[c];
      if (i != j) g(j, i) += x[c];
    }
    traj.samples.push_back(g);
  }
  return traj;
}

GTrajectory upsample_linear(const GTrajectory& traj, int factor) {
  if (factor < 1) throw std::invalid_argument("upsample_linear: factor must be >= 1");
  if (traj.size() < 2)
    throw std::invalid_argument("upsample_linear: need at least 2 samples");
  if (factor == 1) return traj;

  GTrajectory out;
  out.dt_sec = traj.dt_sec / factor;
  out.temperature_k = traj.temperature_k;
  out.samples.reserve(static_cast<size_t>((traj.size() - 1) * factor + 1));
  for (int k = 0; k + 1 < traj.size(); ++k) {
    const Eigen::Matrix3d& a = traj.samples[static_cast<size_t>(k)];
    const Eigen::Matrix3d& b = traj.samples[static_cast<size_t>(k + 1)];
    for (int m = 0; m < factor; ++m) {
      const double s = static_cast<double>(m) / factor;
      out.samples.push_back((1.0 - s) * a + s * b);
    }
  }
  out.samples.push_back(traj.samples.back());
  return out;
}

}  // namespace spinbath
