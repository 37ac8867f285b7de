// acf.hpp - autocorrelation estimation and one-sided cosine spectra of g-tensor
// fluctuations, plus the temperature-scaling exponent extracted from them.
//
// Spectrum convention: G(omega) = Re[(1/sqrt(2 pi)) integral_0^inf dt acf(t)
// e^{i omega t}], discretized with trapezoidal weights. G carries units of
// seconds (per Hz) since the fluctuations are dimensionless.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinbath/trajectory.hpp"

namespace spinbath {

struct FluctuationSeries {
  double dt_sec = 0.0;
  double temperature_k = 0.0;
  Eigen::Matrix3d mean_g = Eigen::Matrix3d::Zero();
  std::vector<Eigen::Matrix3d> delta;  // zero-mean deviations

  int size() const { return static_cast<int>(delta.size()); }
};

// Subtracts the whole-trajectory time average from every frame.
FluctuationSeries detrend(const GTrajectory& traj);

struct AcfEstimate {
  double dt_sec = 0.0;
  double temperature_k = 0.0;
  Eigen::Matrix3d mean_g = Eigen::Matrix3d::Zero();
  int window_samples = 0;
  int n_windows = 0;
  std::array<std::vector<double>, 6> acf;        // per component, lags 0..n_lags-1
  std::array<std::vector<double>, 6> std_error;  // scatter of the window mean per lag

  int n_lags() const { return static_cast<int>(acf[0].size()); }
  double lag_sec(int m) const { return dt_sec * m; }
};

// Windowed autocorrelation of the detrended series. Within each window the
// biased estimator acf[m] = (1/N) sum_k d[k+m] d[k] is used (divides by the
// window length N, not N-m), and estimates are averaged across windows.
// Windows are non-overlapping by default (overlap = 0); a trailing partial
// window is discarded. Lags run to N/2. Requires at least 8 samples per
// window and one full window in the series.
AcfEstimate windowed_acf(const FluctuationSeries& series, double window_sec,
                         double overlap = 0.0);

struct Taper {
  enum class Kind { none, exponential };
  Kind kind = Kind::none;
  double rate_per_sec = 0.0;  // exponential damping of acf(t), regularization only
};

struct SpectrumEstimate {
  double temperature_k = 0.0;
  std::vector<double> omega_rad_per_sec;   // uniform grid from 0, spacing 2 pi / t_max
  std::array<std::vector<double>, 6> g;    // per component, seconds

  int size() const { return static_cast<int>(omega_rad_per_sec.size()); }
};

// One-sided cosine transform of the estimated ACF on a grid reaching the
// Nyquist frequency pi/dt. The optional exponential taper damps the long-lag
// noise floor; it is a regularization knob, off by default.
SpectrumEstimate acf_spectrum(const AcfEstimate& est, const Taper& taper = {});

// Spectrum CSV: columns omega_cm1,Gxx,Gyy,Gzz,Gxy,Gxz,Gyz, '#' metadata lines.
void save_spectrum(const std::string& path, const SpectrumEstimate& spec,
                   const std::vector<std::string>& extra_header = {});
SpectrumEstimate load_spectrum(const std::string& path);

struct AlphaEstimate {
  std::vector<double> omega_rad_per_sec;  // omega = 0 excluded
  std::vector<double> alpha;              // NaN where fewer than 3 usable points
  double mean = 0.0;
  double stddev = 0.0;
  int n_valid = 0;
  std::vector<double> hist_centers;
  std::vector<int> hist_counts;
};

// Per-frequency exponent alpha(omega) from an ordinary least-squares fit of
// log G vs log T across spectra at three or more temperatures. Frequencies
// where G <= 0 at some temperature drop that temperature from the fit; the
// summary mean/stddev runs over frequencies in (0, omega_max].
AlphaEstimate temperature_exponent(const std::vector<SpectrumEstimate>& spectra,
                                   int component, double omega_max_rad_per_sec);

}  // namespace spinbath
