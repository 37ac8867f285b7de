// config.hpp - run configuration: TOML-like file with unit-tagged values,
// defaults matching the copper-qubit study, deterministic hash for output
// provenance headers.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinbath/acf.hpp"
#include "spinbath/relaxometry.hpp"
#include "spinbath/spectral_density.hpp"
#include "spinbath/spin_system.hpp"
#include "spinbath/trajectory.hpp"

namespace spinbath {

struct RunConfig {
  // [system]
  SpinSystem system = copper_qubit_system();

  // [bath]
  std::string spectrum_kind = "flat";  // flat | lorentzian | ou | file
  std::string spectrum_path;           // tabulated spectrum CSV when kind == file
  FlatG flat{};
  LorentzianG lorentz{};
  OuParams ou{};                       // also drives the synth command
  OhmicParams ohmic{};
  NoiseParams noise{.a_tesla2 = 16e-10, .b = 3e-8,
                    .gamma_pd_rad_per_sec = 0.001 * rad_per_sec_per_cm1};
  bool spin_lattice = true;
  bool magnetic_noise = true;

  // [acf]
  double acf_window_sec = 35e-12;
  double acf_overlap = 0.0;
  Taper taper{};
  int alpha_component = 2;  // gzz
  double alpha_omega_max_rad_per_sec = 200.0 * rad_per_sec_per_cm1;

  // [sweep]
  double b_min_tesla = 0.01;
  double b_max_tesla = 10.0;
  int b_points = 24;
  Eigen::Vector3d direction{0.0, 0.0, 1.0};
  double temperature_k = 10.0;
  std::pair<double, double> fit_range_tesla{1.0, 10.0};
  std::vector<std::string> models{"spin_lattice", "hybrid_a", "hybrid_ab"};
  bool hyperfine_variant = false;

  // [output]
  std::string out_dir = "out";
  bool plots = true;
};

// Parses config text. Sections [system] [bath] [acf] [sweep] [output]; values
// are numbers, booleans, quoted "magnitude unit" quantities, or arrays.
// Unknown sections/keys and malformed or mis-dimensioned values raise
// ConfigError naming origin:line.
RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Base spectral density model resolved from the config (loads the tabulated
// spectrum file when spectrum_kind == "file", synthesizes and estimates one
// when spectrum_kind == "ou").
SpectralDensityModel build_model(const RunConfig& cfg);

// Named bath variants for sweeps: spin_lattice (noise off), hybrid_a (noise
// with b forced to 0), hybrid_ab (noise as configured).
std::vector<BathModel> bath_family(const RunConfig& cfg);

// Log-spaced field magnitudes between b_min and b_max.
std::vector<double> field_grid(const RunConfig& cfg);

// Canonical text form of every result-affecting parameter (output routing —
// directory and plots flag — is excluded); equal setups serialize
// identically, so the FNV-1a hash of this string identifies a run setup.
std::string serialize_config(const RunConfig& cfg);
std::uint64_t fnv1a(std::string_view bytes);
std::string config_hash(const RunConfig& cfg);  // 16 hex digits

}  // namespace spinbath
