#include "spinbath/acf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spinbath/constants.hpp"
#include "spinbath/csv_io.hpp"
#include "spinbath/errors.hpp"

namespace spinbath {

FluctuationSeries detrend(const GTrajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("detrend: empty trajectory");
  FluctuationSeries out;
  out.dt_sec = traj.dt_sec;
  out.temperature_k = traj.temperature_k;
  out.mean_g = Eigen::Matrix3d::Zero();
  for (const auto& g : traj.samples) out.mean_g += g;
  out.mean_g /= static_cast<double>(traj.samples.size());
  out.delta.reserve(traj.samples.size());
  for (const auto& g : traj.samples) out.delta.push_back(g - out.mean_g);
  return out;
}

AcfEstimate windowed_acf(const FluctuationSeries& series, double window_sec, double overlap) {
  if (series.dt_sec <= 0.0) throw std::invalid_argument("windowed_acf: dt must be positive");
  if (overlap < 0.0 || overlap >= 1.0) {
    throw std::invalid_argument("windowed_acf: overlap must lie in [0, 1)");
  }
  const int n = series.size();
  const int nw = static_cast<int>(std::llround(window_sec / series.dt_sec));
  if (nw < 8) throw std::invalid_argument("windowed_acf: window must span at least 8 samples");
  if (nw > n) throw std::invalid_argument("windowed_acf: window longer than the series");

  const int n_lags = nw / 2 + 1;  // lags restricted to half the window
  const int stride = std::max(1, static_cast<int>(std::llround(nw * (1.0 - overlap))));

  std::vector<int> starts;
  for (int s = 0; s + nw <= n; s += stride) starts.push_back(s);
  const int n_windows = static_cast<int>(starts.size());

  AcfEstimate est;
  est.dt_sec = series.dt_sec;
  est.temperature_k = series.temperature_k;
  est.mean_g = series.mean_g;
  est.window_samples = nw;
  est.n_windows = n_windows;

  std::vector<double> comp(static_cast<size_t>(n));
  std::vector<double> per_window(static_cast<size_t>(n_windows));
  for (size_t c = 0; c < kGComponents.size(); ++c) {
    const auto [i, j] = kGComponents[c];
    for (int k = 0; k < n; ++k) comp[static_cast<size_t>(k)] = series.delta[static_cast<size_t>(k)](i, j);

    est.acf[c].assign(static_cast<size_t>(n_lags), 0.0);
    est.std_error[c].assign(static_cast<size_t>(n_lags), 0.0);
    for (int m = 0; m < n_lags; ++m) {
      double mean = 0.0;
      for (int w = 0; w < n_windows; ++w) {
        const int s = starts[static_cast<size_t>(w)];
        double acc = 0.0;
        for (int k = s; k + m < s + nw; ++k) acc += comp[static_cast<size_t>(k + m)] * comp[static_cast<size_t>(k)];
        per_window[static_cast<size_t>(w)] = acc / nw;  // biased normalization
        mean += per_window[static_cast<size_t>(w)];
      }
      mean /= n_windows;
      est.acf[c][static_cast<size_t>(m)] = mean;
      if (n_windows > 1) {
        double ss = 0.0;
        for (int w = 0; w < n_windows; ++w) {
          const double d = per_window[static_cast<size_t>(w)] - mean;
          ss += d * d;
        }
        est.std_error[c][static_cast<size_t>(m)] =
            std::sqrt(ss / (n_windows - 1)) / std::sqrt(static_cast<double>(n_windows));
      }
    }
  }
  return est;
}

SpectrumEstimate acf_spectrum(const AcfEstimate& est, const Taper& taper) {
  const int n_lags = est.n_lags();
  if (n_lags < 2) throw std::invalid_argument("acf_spectrum: need at least two lags");
  if (taper.kind == Taper::Kind::exponential && taper.rate_per_sec < 0.0) {
    throw std::invalid_argument("acf_spectrum: taper rate must be non-negative");
  }
  const double dt = est.dt_sec;
  const double t_max = dt * (n_lags - 1);

  SpectrumEstimate spec;
  spec.temperature_k = est.temperature_k;
  const double d_omega = 2.0 * std::numbers::pi / t_max;  // resolution fixed by max lag
  const int n_omega = (n_lags - 1) / 2 + 1;               // top point reaches ~pi/dt
  spec.omega_rad_per_sec.resize(static_cast<size_t>(n_omega));
  for (int k = 0; k < n_omega; ++k) spec.omega_rad_per_sec[static_cast<size_t>(k)] = d_omega * k;

  std::vector<double> damped(static_cast<size_t>(n_lags));
  const double pref = dt / std::sqrt(2.0 * std::numbers::pi);
  for (size_t c = 0; c < est.acf.size(); ++c) {
    for (int m = 0; m < n_lags; ++m) {
      double v = est.acf[c][static_cast<size_t>(m)];
      if (taper.kind == Taper::Kind::exponential) v *= std::exp(-taper.rate_per_sec * dt * m);
      if (m == 0 || m == n_lags - 1) v *= 0.5;  // trapezoidal end weights
      damped[static_cast<size_t>(m)] = v;
    }
    spec.g[c].assign(static_cast<size_t>(n_omega), 0.0);
    for (int k = 0; k < n_omega; ++k) {
      const double w = spec.omega_rad_per_sec[static_cast<size_t>(k)];
      double acc = 0.0;
      for (int m = 0; m < n_lags; ++m) acc += damped[static_cast<size_t>(m)] * std::cos(w * dt * m);
      spec.g[c][static_cast<size_t>(k)] = pref * acc;
    }
  }
  return spec;
}

void save_spectrum(const std::string& path, const SpectrumEstimate& spec,
                   const std::vector<std::string>& extra_header) {
  std::vector<std::string> header = {"omega_cm1", "Gxx", "Gyy", "Gzz", "Gxy", "Gxz", "Gyz"};
  std::vector<std::string> meta = extra_header;
  meta.push_back("temperature_K: " + format_double(spec.temperature_k));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<size_t>(spec.size()));
  for (int k = 0; k < spec.size(); ++k) {
    std::vector<std::string> row;
    row.push_back(format_double(spec.omega_rad_per_sec[static_cast<size_t>(k)] / rad_per_sec_per_cm1));
    for (size_t c = 0; c < spec.g.size(); ++c) row.push_back(format_double(spec.g[c][static_cast<size_t>(k)]));
    rows.push_back(std::move(row));
  }
  write_csv(path, meta, header, rows);
}

SpectrumEstimate load_spectrum(const std::string& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> expect = {"omega_cm1", "Gxx", "Gyy", "Gzz", "Gxy", "Gxz", "Gyz"};
  if (table.header != expect) throw IoError(path + ": unexpected spectrum header");

  SpectrumEstimate spec;
  spec.temperature_k = 0.0;
  for (const auto& comment : table.comments) {
    const std::string key = "temperature_K:";
    if (comment.rfind(key, 0) == 0) spec.temperature_k = std::strtod(comment.c_str() + key.size(), nullptr);
  }
  if (spec.temperature_k <= 0.0) {
    throw IoError(path + ": missing '# temperature_K:' metadata line");
  }
  for (size_t r = 0; r < table.rows.size(); ++r) {
    spec.omega_rad_per_sec.push_back(table.rows[r][0] * rad_per_sec_per_cm1);
    for (size_t c = 0; c < 6; ++c) spec.g[c].push_back(table.rows[r][c + 1]);
  }
  if (spec.size() < 2) throw IoError(path + ": need at least two spectrum rows");
  for (int k = 1; k < spec.size(); ++k) {
    if (spec.omega_rad_per_sec[static_cast<size_t>(k)] <=
        spec.omega_rad_per_sec[static_cast<size_t>(k - 1)]) {
      throw IoError(path + ": omega grid must be strictly increasing");
    }
  }
  return spec;
}

namespace {

double interp_loglinear_x(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  // Plain linear interpolation; callers guarantee xs ascending and x inside.
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const size_t hi = static_cast<size_t>(it - xs.begin());
  const size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace

AlphaEstimate temperature_exponent(const std::vector<SpectrumEstimate>& spectra, int component,
                                   double omega_max_rad_per_sec) {
  if (spectra.size() < 3) {
    throw std::invalid_argument("temperature_exponent: need spectra at three or more temperatures");
  }
  if (component < 0 || component > 5) {
    throw std::invalid_argument("temperature_exponent: component index out of range");
  }
  for (size_t s = 0; s < spectra.size(); ++s) {
    if (spectra[s].temperature_k <= 0.0) {
      throw std::invalid_argument("temperature_exponent: spectra need positive temperatures");
    }
    for (size_t t = s + 1; t < spectra.size(); ++t) {
      if (std::abs(spectra[s].temperature_k - spectra[t].temperature_k) <
          1e-9 * spectra[s].temperature_k) {
        throw std::invalid_argument("temperature_exponent: duplicate temperature");
      }
    }
  }

  // Fit on the first spectrum's grid, restricted to the band covered by all.
  double band = omega_max_rad_per_sec;
  for (const auto& s : spectra) band = std::min(band, s.omega_rad_per_sec.back());

  AlphaEstimate out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < spectra.front().size(); ++k) {
    const double w = spectra.front().omega_rad_per_sec[static_cast<size_t>(k)];
    if (w <= 0.0 || w > band) continue;  // omega = 0 excluded from scaling fits
    std::vector<double> log_t, log_g;
    for (const auto& s : spectra) {
      const double g = interp_loglinear_x(s.omega_rad_per_sec, s.g[static_cast<size_t>(component)], w);
      if (g > 0.0 && std::isfinite(g)) {
        log_t.push_back(std::log(s.temperature_k));
        log_g.push_back(std::log(g));
      }
    }
    out.omega_rad_per_sec.push_back(w);
    if (log_t.size() < 3) {
      out.alpha.push_back(nan);
      continue;
    }
    double mx = 0.0, my = 0.0;
    for (size_t p = 0; p < log_t.size(); ++p) {
      mx += log_t[p];
      my += log_g[p];
    }
    mx /= static_cast<double>(log_t.size());
    my /= static_cast<double>(log_t.size());
    double sxx = 0.0, sxy = 0.0;
    for (size_t p = 0; p < log_t.size(); ++p) {
      sxx += (log_t[p] - mx) * (log_t[p] - mx);
      sxy += (log_t[p] - mx) * (log_g[p] - my);
    }
    out.alpha.push_back(sxy / sxx);
  }

  double sum = 0.0;
  for (double a : out.alpha) {
    if (std::isfinite(a)) {
      sum += a;
      ++out.n_valid;
    }
  }
  if (out.n_valid == 0) {
    out.mean = nan;
    out.stddev = nan;
    return out;
  }
  out.mean = sum / out.n_valid;
  double ss = 0.0;
  for (double a : out.alpha) {
    if (std::isfinite(a)) ss += (a - out.mean) * (a - out.mean);
  }
  out.stddev = out.n_valid > 1 ? std::sqrt(ss / (out.n_valid - 1)) : 0.0;

  // Histogram of the per-frequency exponents (25 bins across the range).
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double a : out.alpha) {
    if (std::isfinite(a)) {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  const int n_bins = 25;
  if (hi - lo < 1e-12) hi = lo + 1e-12;
  const double width = (hi - lo) / n_bins;
  out.hist_centers.resize(n_bins);
  out.hist_counts.assign(n_bins, 0);
  for (int b = 0; b < n_bins; ++b) out.hist_centers[static_cast<size_t>(b)] = lo + width * (b + 0.5);
  for (double a : out.alpha) {
    if (!std::isfinite(a)) continue;
    int b = static_cast<int>((a - lo) / width);
    b = std::clamp(b, 0, n_bins - 1);
    ++out.hist_counts[static_cast<size_t>(b)];
  }
  return out;
}

}  // namespace spinbath
