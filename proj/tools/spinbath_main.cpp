// spinbath_main.cpp - command line front end: spectrum | acf | scaling | sweep | synth.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinbath/acf.hpp"
#include "spinbath/config.hpp"
#include "spinbath/csv_io.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/hamiltonian.hpp"
#include "spinbath/relaxometry.hpp"
#include "spinbath/svg_plot.hpp"
#include "spinbath/trajectory.hpp"
#include "spinbath/units.hpp"

namespace fs = std::filesystem;
using namespace spinbath;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  bool no_plots = false;
  long long seed = -1;
};

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.no_plots) cfg.plots = false;
  if (opts.seed >= 0) cfg.ou.seed = static_cast<std::uint64_t>(opts.seed);
  return cfg;
}

// Provenance header for every output file. Deliberately no timestamps: a
// rerun with the same config must produce byte-identical files.
std::vector<std::string> metadata_lines(const RunConfig& cfg) {
  return {std::string("tool: spinbath ") + kToolVersion, "config: " + config_hash(cfg),
          "seed: " + std::to_string(cfg.ou.seed)};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

std::string label_for(double temperature_k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "T = %g K", temperature_k);
  return buf;
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto grid = field_grid(cfg);
  const auto zs = zeeman_spectrum(cfg.system, grid, cfg.direction.normalized());
  const int n_levels = static_cast<int>(zs.energies_rad_per_sec.cols());

  std::vector<std::string> header{"B_tesla"};
  for (int c = 0; c < n_levels; ++c) header.push_back("E" + std::to_string(c + 1) + "_rad_per_s");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < zs.field_tesla.size(); ++k) {
    std::vector<std::string> row{format_double(zs.field_tesla[k])};
    for (int c = 0; c < n_levels; ++c)
      row.push_back(format_double(zs.energies_rad_per_sec(static_cast<Eigen::Index>(k), c)));
    rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, "zeeman.csv"), metadata_lines(cfg), header, rows);

  if (cfg.plots) {
    PlotSpec plot;
    plot.title = "Zeeman spectrum";
    plot.x_label = "B (T)";
    plot.y_label = "level energy (rad/s)";
    plot.log_x = true;
    plot.metadata = metadata_lines(cfg);
    for (int c = 0; c < n_levels; ++c) {
      PlotSeries s;
      s.label = "level " + std::to_string(c + 1);
      for (std::size_t k = 0; k < zs.field_tesla.size(); ++k) {
        s.x.push_back(zs.field_tesla[k]);
        s.y.push_back(zs.energies_rad_per_sec(static_cast<Eigen::Index>(k), c));
      }
      plot.series.push_back(std::move(s));
    }
    write_svg(out_path(cfg, "zeeman.svg"), plot);
  }
  std::cout << "wrote " << out_path(cfg, "zeeman.csv") << " (" << zs.field_tesla.size()
            << " fields, " << n_levels << " levels)\n";
  return 0;
}

int cmd_acf(const RunConfig& cfg, const std::vector<std::string>& paths) {
  std::vector<SpectrumEstimate> spectra;
  std::vector<std::string> stems;
  for (const auto& path : paths) {
    const GTrajectory traj = load_trajectory(path);
    const auto est = windowed_acf(detrend(traj), cfg.acf_window_sec, cfg.acf_overlap);
    const auto spec = acf_spectrum(est, cfg.taper);
    const std::string stem = fs::path(path).stem().string();
    stems.push_back(stem);

    std::vector<std::string> header{"tau_ps"};
    for (const char* name : kGComponentNames) header.push_back(std::string("acf_") + name);
    for (const char* name : kGComponentNames) header.push_back(std::string("se_") + name);
    std::vector<std::vector<std::string>> rows;
    for (int m = 0; m < est.n_lags(); ++m) {
      std::vector<std::string> row{format_double(est.lag_sec(m) * 1e12)};
      for (int c = 0; c < 6; ++c)
        row.push_back(format_double(est.acf[static_cast<std::size_t>(c)][static_cast<std::size_t>(m)]));
      for (int c = 0; c < 6; ++c)
        row.push_back(
            format_double(est.std_error[static_cast<std::size_t>(c)][static_cast<std::size_t>(m)]));
      rows.push_back(std::move(row));
    }
    auto meta = metadata_lines(cfg);
    meta.push_back("trajectory: " + stem);
    meta.push_back("windows: " + std::to_string(est.n_windows));
    write_csv(out_path(cfg, "acf_" + stem + ".csv"), meta, header, rows);
    save_spectrum(out_path(cfg, "spectrum_" + stem + ".csv"), spec, meta);
    spectra.push_back(spec);
    std::cout << "wrote " << out_path(cfg, "spectrum_" + stem + ".csv") << " (T = "
              << spec.temperature_k << " K, " << spec.size() << " frequencies)\n";
  }

  if (cfg.plots) {
    for (int c = 0; c < 6; ++c) {
      PlotSpec plot;
      plot.title = std::string("fluctuation spectrum ") + kGComponentNames[static_cast<std::size_t>(c)];
      plot.x_label = "omega (cm-1)";
      plot.y_label = "G (s)";
      plot.metadata = metadata_lines(cfg);
      for (const auto& spec : spectra) {
        PlotSeries s;
        s.label = label_for(spec.temperature_k);
        for (int k = 0; k < spec.size(); ++k) {
          s.x.push_back(convert(spec.omega_rad_per_sec[static_cast<std::size_t>(k)],
                                Unit::rad_per_sec, Unit::wavenumber_cm));
          s.y.push_back(spec.g[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]);
        }
        plot.series.push_back(std::move(s));
      }
      write_svg(out_path(cfg, std::string("spectrum_") +
                                  kGComponentNames[static_cast<std::size_t>(c)] + ".svg"),
                plot);
    }
  }
  return 0;
}

int cmd_scaling(const RunConfig& cfg, const std::vector<std::string>& paths) {
  if (paths.size() < 3)
    throw ConfigError("scaling needs at least 3 trajectories at distinct temperatures");
  std::vector<SpectrumEstimate> spectra;
  for (const auto& path : paths) {
    const GTrajectory traj = load_trajectory(path);
    const auto est = windowed_acf(detrend(traj), cfg.acf_window_sec, cfg.acf_overlap);
    spectra.push_back(acf_spectrum(est, cfg.taper));
  }
  const auto alpha =
      temperature_exponent(spectra, cfg.alpha_component, cfg.alpha_omega_max_rad_per_sec);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < alpha.omega_rad_per_sec.size(); ++k)
    rows.push_back({format_double(convert(alpha.omega_rad_per_sec[k], Unit::rad_per_sec,
                                          Unit::wavenumber_cm)),
                    format_double(alpha.alpha[k])});
  write_csv(out_path(cfg, "alpha.csv"), metadata_lines(cfg), {"omega_cm1", "alpha"}, rows);

  rows.clear();
  for (std::size_t k = 0; k < alpha.hist_centers.size(); ++k)
    rows.push_back(
        {format_double(alpha.hist_centers[k]), std::to_string(alpha.hist_counts[k])});
  write_csv(out_path(cfg, "alpha_histogram.csv"), metadata_lines(cfg),
            {"alpha_center", "count"}, rows);

  if (cfg.plots) {
    PlotSpec plot;
    plot.title = std::string("temperature exponent, ") +
                 kGComponentNames[static_cast<std::size_t>(cfg.alpha_component)];
    plot.x_label = "omega (cm-1)";
    plot.y_label = "alpha";
    plot.metadata = metadata_lines(cfg);
    PlotSeries s;
    s.label = "alpha(omega)";
    for (std::size_t k = 0; k < alpha.omega_rad_per_sec.size(); ++k) {
      s.x.push_back(
          convert(alpha.omega_rad_per_sec[k], Unit::rad_per_sec, Unit::wavenumber_cm));
      s.y.push_back(alpha.alpha[k]);
    }
    plot.series.push_back(std::move(s));
    write_svg(out_path(cfg, "alpha.svg"), plot);

    PlotSpec hist;
    hist.title = "temperature exponent histogram";
    hist.x_label = "alpha";
    hist.y_label = "count";
    hist.metadata = metadata_lines(cfg);
    PlotSeries hs;
    hs.label = "frequencies";
    for (std::size_t k = 0; k < alpha.hist_centers.size(); ++k) {
      hs.x.push_back(alpha.hist_centers[k]);
      hs.y.push_back(alpha.hist_counts[k]);
    }
    hist.series.push_back(std::move(hs));
    write_svg(out_path(cfg, "alpha_histogram.svg"), hist);
  }

  std::printf("alpha = %.4f +/- %.4f over %d frequencies\n", alpha.mean, alpha.stddev,
              alpha.n_valid);
  return 0;
}

void append_sweep_rows(std::vector<std::vector<std::string>>& rows, const SweepResult& result) {
  for (const auto& ms : result.models)
    for (const auto& pt : ms.points)
      rows.push_back({format_double(pt.b_tesla), format_double(pt.t1.seconds),
                      format_double(pt.t2.seconds), ms.model_name,
                      format_double(pt.t1.r_squared), format_double(pt.t2.r_squared),
                      ms.with_hyperfine ? "1" : "0"});
}

void print_exponents(const SweepResult& result) {
  for (const auto& ms : result.models) {
    for (const auto& se : ms.exponents) {
      if (!se.ok) {
        std::printf("%-14s%s  [%g, %g] T: too few converged points for a slope fit\n",
                    ms.model_name.c_str(), ms.with_hyperfine ? "" : " (A=0)",
                    se.range_tesla.first, se.range_tesla.second);
        continue;
      }
      std::printf(
          "%-14s%s  [%g, %g] T: T1 ~ B^(%.3f +/- %.3f), T2 ~ B^(%.3f +/- %.3f)\n",
          ms.model_name.c_str(), ms.with_hyperfine ? "" : " (A=0)", se.range_tesla.first,
          se.range_tesla.second, se.t1_fit.slope, se.t1_fit.std_error, se.t2_fit.slope,
          se.t2_fit.std_error);
    }
  }
}

int sweep_failures(const SweepResult& result) {
  int failures = 0;
  for (const auto& ms : result.models)
    for (const auto& pt : ms.points) {
      if (!pt.t1.ok) {
        std::fprintf(stderr, "T1 fit failed: model=%s B=%g T\n", ms.model_name.c_str(),
                     pt.b_tesla);
        ++failures;
      }
      if (!pt.t2.ok) {
        std::fprintf(stderr, "T2 fit failed: model=%s B=%g T\n", ms.model_name.c_str(),
                     pt.b_tesla);
        ++failures;
      }
    }
  return failures;
}

void sweep_plot(const RunConfig& cfg, const std::vector<const SweepResult*>& results,
                bool use_t1, const std::string& path) {
  PlotSpec plot;
  plot.title = use_t1 ? "T1 vs field" : "T2 vs field";
  plot.x_label = "B (T)";
  plot.y_label = use_t1 ? "T1 (s)" : "T2 (s)";
  plot.log_x = true;
  plot.log_y = true;
  plot.metadata = metadata_lines(cfg);
  for (const SweepResult* result : results) {
    for (const auto& ms : result->models) {
      PlotSeries s;
      s.label = ms.model_name + (ms.with_hyperfine ? "" : " (A=0)");
      for (const auto& pt : ms.points) {
        s.x.push_back(pt.b_tesla);
        s.y.push_back(use_t1 ? pt.t1.seconds : pt.t2.seconds);
      }
      plot.series.push_back(std::move(s));
    }
  }
  write_svg(path, plot);
}

int cmd_sweep(const RunConfig& cfg) {
  const auto model = build_model(cfg);
  const auto family = bath_family(cfg);
  const auto grid = field_grid(cfg);
  const std::vector<std::pair<double, double>> ranges{cfg.fit_range_tesla};

  const SweepResult full =
      field_sweep(cfg.system, model, family, grid, cfg.temperature_k, true, ranges);
  std::optional<SweepResult> bare;
  if (cfg.hyperfine_variant)
    bare = field_sweep(cfg.system, model, family, grid, cfg.temperature_k, false, ranges);

  std::vector<std::vector<std::string>> rows;
  append_sweep_rows(rows, full);
  if (bare) append_sweep_rows(rows, *bare);
  write_csv(out_path(cfg, "sweep.csv"), metadata_lines(cfg),
            {"B_tesla", "T1_s", "T2_s", "model", "r2_T1", "r2_T2", "with_hyperfine"},
            rows);

  std::vector<const SweepResult*> results{&full};
  if (bare) results.push_back(&*bare);
  if (cfg.plots) {
    sweep_plot(cfg, results, true, out_path(cfg, "t1_vs_field.svg"));
    sweep_plot(cfg, results, false, out_path(cfg, "t2_vs_field.svg"));
  }

  std::cout << "wrote " << out_path(cfg, "sweep.csv") << " (" << rows.size()
            << " points at T = " << cfg.temperature_k << " K)\n";
  print_exponents(full);
  if (bare) print_exponents(*bare);

  int failures = sweep_failures(full);
  if (bare) failures += sweep_failures(*bare);
  if (failures > 0) {
    std::fprintf(stderr, "%d sweep point(s) failed to fit\n", failures);
    return 3;
  }
  return 0;
}

int cmd_synth(const RunConfig& cfg) {
  const GTrajectory traj = synth_ou_trajectory(cfg.ou);
  auto meta = metadata_lines(cfg);
  meta.push_back("ou_variance: " + format_double(cfg.ou.variance(0, 0)));
  meta.push_back("ou_corr_time_s: " + format_double(cfg.ou.corr_time_sec));
  meta.push_back("ou_dt_s: " + format_double(cfg.ou.dt_sec));
  meta.push_back("ou_duration_s: " + format_double(cfg.ou.duration_sec));
  const std::string path = out_path(cfg, "trajectory_ou.csv");
  save_trajectory(path, traj, meta);
  std::cout << "wrote " << path << " (" << traj.size() << " frames, seed "
            << cfg.ou.seed << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molecular spin qubit T1/T2 simulator (Redfield dynamics over hybrid "
               "spin-lattice + magnetic-noise spectral densities)"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "configuration file (TOML-like)");
  app.add_option("--out", opts.out_dir, "output directory (overrides config)");
  app.add_flag("--no-plots", opts.no_plots, "skip SVG output");
  app.add_option("--seed", opts.seed, "override the synthetic-trajectory RNG seed");

  auto* sub_spectrum =
      app.add_subcommand("spectrum", "Zeeman level diagram over the field grid");
  std::vector<std::string> acf_paths;
  auto* sub_acf = app.add_subcommand("acf", "autocorrelation and fluctuation spectrum "
                                            "of g-tensor trajectories");
  sub_acf->add_option("trajectories", acf_paths, "trajectory CSV files")->required();
  std::vector<std::string> scaling_paths;
  auto* sub_scaling = app.add_subcommand(
      "scaling", "temperature exponent alpha from trajectories at several temperatures");
  sub_scaling->add_option("trajectories", scaling_paths, "trajectory CSV files")
      ->required();
  auto* sub_sweep =
      app.add_subcommand("sweep", "T1/T2 field sweep for the configured bath models");
  auto* sub_synth =
      app.add_subcommand("synth", "synthesize an Ornstein-Uhlenbeck g(t) trajectory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad usage is a configuration error
  }

  try {
    const RunConfig cfg = resolve_config(opts);
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);

    if (sub_spectrum->parsed()) return cmd_spectrum(cfg);
    if (sub_acf->parsed()) return cmd_acf(cfg, acf_paths);
    if (sub_scaling->parsed()) return cmd_scaling(cfg, scaling_paths);
    if (sub_sweep->parsed()) return cmd_sweep(cfg);
    if (sub_synth->parsed()) return cmd_synth(cfg);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
