// relaxometry.cpp - decay protocols, exponential fitting, and parameter sweeps.
#include "spinbath/relaxometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "spinbath/errors.hpp"
#include "spinbath/hamiltonian.hpp"

namespace spinbath {

namespace {

constexpr double kFitQualityFloor = 0.995;
constexpr int kGridPoints = 400;

Eigen::VectorXcd vec_rho(const Eigen::MatrixXcd& rho) {
  const int n = static_cast<int>(rho.rows());
  Eigen::VectorXcd v(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(static_cast<Eigen::Index>(a) * n + b) = rho(a, b);
  return v;
}

Eigen::MatrixXcd unvec_rho(const Eigen::VectorXcd& v, int n) {
  Eigen::MatrixXcd rho(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rho(a, b) = v(static_cast<Eigen::Index>(a) * n + b);
  return rho;
}

// Observable matrices in the eigenbasis, in units of hbar.
Eigen::MatrixXcd sz_operator(const EigenSystem& eigen) { return 0.5 * eigen.sigma[2]; }

Eigen::MatrixXcd splus_operator(const EigenSystem& eigen) {
  return 0.5 * (eigen.sigma[0] + std::complex<double>(0.0, 1.0) * eigen.sigma[1]);
}

double signal_value(const Eigen::MatrixXcd& rho, const EigenSystem& eigen, Observable obs) {
  if (obs == Observable::sz) return std::real((rho * sz_operator(eigen)).trace());
  return std::abs((rho * splus_operator(eigen)).trace());
}

// d/dt of the signal at rho, given drho/dt = -unvec(R vec(rho)).
double signal_derivative(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho,
                         const EigenSystem& eigen, Observable obs) {
  if (obs == Observable::sz) return std::real((drho * sz_operator(eigen)).trace());
  const auto sp = splus_operator(eigen);
  const std::complex<double> c = (rho * sp).trace();
  const std::complex<double> dc = (drho * sp).trace();
  const double mag = std::abs(c);
  if (mag < 1e-300) return std::abs(dc);
  return std::real(std::conj(c) * dc) / mag;
}

// Linear least squares of y = y_inf + A e^(-t/T) at fixed T. Returns the sum
// of squared residuals, or +inf when the basis is degenerate at this T.
double linear_subproblem(const std::vector<double>& t, const std::vector<double>& y,
                         double time_const, double* y_inf, double* amplitude) {
  const std::size_t n = t.size();
  double s1 = 0, se = 0, see = 0, sy = 0, sey = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::exp(-t[k] / time_const);
    s1 += 1.0;
    se += e;
    see += e * e;
    sy += y[k];
    sey += e * y[k];
  }
  const double det = s1 * see - se * se;
  if (!(std::abs(det) > 1e-300)) return std::numeric_limits<double>::infinity();
  const double c0 = (see * sy - se * sey) / det;
  const double c1 = (s1 * sey - se * sy) / det;
  double sse = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = y[k] - c0 - c1 * std::exp(-t[k] / time_const);
    sse += r * r;
  }
  if (y_inf) *y_inf = c0;
  if (amplitude) *amplitude = c1;
  return sse;
}

// Log-linear seed for the decay constant: regress ln|y - y_inf0| on t using
// the tail mean as the asymptote guess.
double seed_time_constant(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double y_inf0 = 0.0;
  for (std::size_t k = n - tail; k < n; ++k) y_inf0 += y[k];
  y_inf0 /= static_cast<double>(tail);

  const double z0 = y[0] - y_inf0;
  const double sign = z0 >= 0 ? 1.0 : -1.0;
  const double floor = std::max(std::abs(z0) * 1e-3, 1e-300);
  double st = 0, sz = 0, stt = 0, stz = 0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double z = sign * (y[k] - y_inf0);
    if (z <= floor) continue;
    const double lz = std::log(z);
    st += t[k];
    sz += lz;
    stt += t[k] * t[k];
    stz += t[k] * lz;
    ++m;
  }
  if (m >= 3) {
    const double det = static_cast<double>(m) * stt - st * st;
    if (std::abs(det) > 0) {
      const double slope = (static_cast<double>(m) * stz - st * sz) / det;
      if (slope < 0 && std::isfinite(slope)) return -1.0 / slope;
    }
  }
  return (t.back() - t.front()) / 3.0;  // fallback when the seed regression fails
}

RelaxationTime measure_decay(const SpinSystem& sys, const SpectralDensityModel& model,
                             const Eigen::Vector3d& field_tesla, double temperature_k,
                             std::optional<double> m_i, InitialState::Kind kind,
                             Observable obs) {
  SpectralDensityModel local = model;
  local.field_tesla = field_tesla;
  local.temperature_k = temperature_k;

  const auto h = build_hamiltonian(sys, field_tesla);
  const auto eigen = eigensystem(sys, h);
  auto rs = redfield_tensor(eigen, spectral_function(local), false);
  rs.field_tesla = field_tesla;
  rs.temperature_k = temperature_k;

  RelaxationTime out;
  const double r_norm = rs.r.cwiseAbs().maxCoeff();
  if (r_norm == 0.0) {
    out.infinite = true;
    out.ok = true;
    out.seconds = std::numeric_limits<double>::infinity();
    out.r_squared = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  InitialState init;
  init.kind = kind;
  init.m_i = m_i.value_or(sys.nuclear_spin);
  const DensityMatrix rho0 = initial_state(sys, eigen, init);

  const int n = eigen.dim();
  const double y0 = signal_value(rho0.rho, eigen, obs);
  const Eigen::MatrixXcd drho0 = unvec_rho(-(rs.r * vec_rho(rho0.rho)).eval(), n);
  const double dy0 = signal_derivative(rho0.rho, drho0, eigen, obs);

  const auto steady = steady_state(rs);
  const double y_ss = signal_value(steady.state.rho, eigen, obs);
  const double scale = std::max(std::abs(y0 - y_ss), 1e-3);
  const double rate0 = std::abs(dy0) / scale;
  if (!(rate0 > 0.0)) {
    out.infinite = true;
    out.ok = true;
    out.seconds = std::numeric_limits<double>::infinity();
    out.r_squared = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  auto run_fit = [&](double span_sec) {
    std::vector<double> grid(kGridPoints);
    for (int k = 0; k < kGridPoints; ++k)
      grid[static_cast<std::size_t>(k)] = span_sec * k / (kGridPoints - 1);
    const auto rhos = propagate(rs, rho0, grid);
    const auto sig = observable_signal(rhos, eigen, obs, grid);
    return fit_decay(sig);
  };

  double span = 10.0 / rate0;
  DecayFit fit = run_fit(span);
  // One refinement pass when the first span was badly scaled: the fitted
  // constant off the top (> span/2) or crammed into the first few samples.
  if (fit.converged && !fit.flat) {
    const double dt = span / (kGridPoints - 1);
    if (fit.time_const_sec > 0.5 * span || fit.time_const_sec < 20.0 * dt) {
      const DecayFit refit = run_fit(10.0 * fit.time_const_sec);
      if (refit.converged && !refit.flat) fit = refit;
    }
  }

  out.fit = fit;
  out.r_squared = fit.r_squared;
  if (fit.flat) {
    out.infinite = true;
    out.ok = true;
    out.seconds = std::numeric_limits<double>::infinity();
    return out;
  }
  out.seconds = fit.time_const_sec;
  out.ok = fit.converged && std::isfinite(out.seconds) && out.seconds > 0.0;
  return out;
}

SpectralDensityModel apply_bath_model(const SpectralDensityModel& base, const BathModel& bm) {
  SpectralDensityModel m = base;
  m.spin_lattice_enabled = bm.spin_lattice;
  m.magnetic_noise_enabled = bm.magnetic_noise;
  m.noise = bm.noise;
  return m;
}

}  // namespace

DensityMatrix initial_state(const SpinSystem& sys, const EigenSystem& eigen,
                            const InitialState& spec) {
  const double i_spin = sys.nuclear_spin;
  const double steps = i_spin - spec.m_i;
  if (spec.m_i < -i_spin - 1e-9 || spec.m_i > i_spin + 1e-9 ||
      std::abs(steps - std::round(steps)) > 1e-9)
    throw std::invalid_argument("initial_state: m_i must be one of -I, -I+1, ..., I");

  const int nd = sys.nuclear_dim();
  const int n_idx = static_cast<int>(std::llround(steps));  // m_I descending
  const int dim = sys.dim();
  if (eigen.dim() != dim)
    throw std::invalid_argument("initial_state: eigensystem dimension mismatch");

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  if (spec.kind == InitialState::Kind::z_polarized) {
    psi(n_idx) = 1.0;  // |m_s=+1/2> block is the first nuclear_dim entries
  } else {
    const double w = 1.0 / std::sqrt(2.0);
    psi(n_idx) = w;
    psi(nd + n_idx) = w;
  }

  // Rotate from the product basis into the eigenbasis.
  const Eigen::VectorXcd psi_eig = eigen.states.adjoint() * psi;
  DensityMatrix dm = DensityMatrix::pure(psi_eig);
  const double purity = std::real((dm.rho * dm.rho).trace());
  if (std::abs(purity - 1.0) > 1e-12)
    throw NumericalError("initial_state: constructed state is not pure");
  return dm;
}

DecaySignal observable_signal(const std::vector<DensityMatrix>& rhos,
                              const EigenSystem& eigen, Observable obs,
                              const std::vector<double>& t_grid_sec) {
  if (rhos.size() != t_grid_sec.size())
    throw std::invalid_argument("observable_signal: grid and state counts differ");
  DecaySignal sig;
  sig.t_sec = t_grid_sec;
  sig.y.reserve(rhos.size());
  for (const auto& dm : rhos) {
    const double v = signal_value(dm.rho, eigen, obs);
    if (std::abs(v) > 0.5 + 1e-9)
      throw NumericalError("observable_signal: spin-1/2 expectation bound exceeded");
    sig.y.push_back(v);
  }
  return sig;
}

DecayFit fit_decay(const DecaySignal& sig) {
  const std::size_t n = sig.t_sec.size();
  if (n < 8 || sig.y.size() != n)
    throw std::invalid_argument("fit_decay: need at least 8 samples");

  DecayFit fit;
  const auto [lo_it, hi_it] = std::minmax_element(sig.y.begin(), sig.y.end());
  const double swing = *hi_it - *lo_it;
  const double level = std::max(std::abs(sig.y.front()), 1e-3);
  if (swing <= 1e-10 * level) {
    fit.flat = true;
    fit.asymptote = sig.y.front();
    fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }

  const double t_seed = seed_time_constant(sig.t_sec, sig.y);

  // Golden-section search on ln T; (y_inf, A) are solved exactly inside.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(t_seed) - std::log(50.0);
  double hi = std::log(t_seed) + std::log(50.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = linear_subproblem(sig.t_sec, sig.y, std::exp(x1), nullptr, nullptr);
  double f2 = linear_subproblem(sig.t_sec, sig.y, std::exp(x2), nullptr, nullptr);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = linear_subproblem(sig.t_sec, sig.y, std::exp(x1), nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = linear_subproblem(sig.t_sec, sig.y, std::exp(x2), nullptr, nullptr);
    }
  }
  const double t_best = std::exp(0.5 * (lo + hi));
  double y_inf = 0.0, amplitude = 0.0;
  const double sse = linear_subproblem(sig.t_sec, sig.y, t_best, &y_inf, &amplitude);

  double mean = 0.0;
  for (double v : sig.y) mean += v;
  mean /= static_cast<double>(n);
  double ss_tot = 0.0;
  for (double v : sig.y) ss_tot += (v - mean) * (v - mean);

  fit.time_const_sec = t_best;
  fit.amplitude = amplitude;
  fit.asymptote = y_inf;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - sse / ss_tot : 0.0;
  fit.converged = std::isfinite(sse) && std::isfinite(t_best) && t_best > 0.0 &&
                  std::isfinite(amplitude) && std::isfinite(y_inf);
  fit.low_quality = fit.converged && fit.r_squared < kFitQualityFloor;
  return fit;
}

RelaxationTime t1(const SpinSystem& sys, const SpectralDensityModel& model,
                  const Eigen::Vector3d& field_tesla, double temperature_k,
                  std::optional<double> m_i) {
  return measure_decay(sys, model, field_tesla, temperature_k, m_i,
                       InitialState::Kind::z_polarized, Observable::sz);
}

RelaxationTime t2(const SpinSystem& sys, const SpectralDensityModel& model,
                  const Eigen::Vector3d& field_tesla, double temperature_k,
                  std::optional<double> m_i) {
  return measure_decay(sys, model, field_tesla, temperature_k, m_i,
                       InitialState::Kind::x_polarized, Observable::sx_magnitude);
}

std::vector<BathModel> default_model_family() {
  std::vector<BathModel> family(3);
  family[0].name = "spin_lattice";
  family[0].spin_lattice = true;
  family[0].magnetic_noise = false;

  family[1].name = "hybrid_a";
  family[1].spin_lattice = true;
  family[1].magnetic_noise = true;
  family[1].noise.b = 0.0;

  family[2].name = "hybrid_ab";
  family[2].spin_lattice = true;
  family[2].magnetic_noise = true;
  family[2].noise.b = 3e-8;
  return family;
}

ScalingFit scaling_exponent(const std::vector<double>& x, const std::vector<double>& y,
                            std::pair<double, double> range) {
  if (x.size() != y.size())
    throw std::invalid_argument("scaling_exponent: x and y lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < range.first || x[k] > range.second) continue;
    if (!(y[k] > 0.0) || !std::isfinite(y[k]) || !(x[k] > 0.0)) continue;
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(y[k]));
  }
  const std::size_t m = lx.size();
  if (m < 3)
    throw std::invalid_argument("scaling_exponent: need at least 3 positive points in range");

  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sx += lx[k];
    sy += ly[k];
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("scaling_exponent: degenerate abscissa");
  ScalingFit out;
  out.slope = sxy / sxx;
  out.n_used = static_cast<int>(m);
  double sse = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = (ly[k] - my) - out.slope * (lx[k] - mx);
    sse += r * r;
  }
  out.std_error = std::sqrt(sse / (static_cast<double>(m) - 2.0) / sxx);
  return out;
}

std::vector<double> default_field_grid() {
  constexpr int n = 24;
  std::vector<double> grid(n);
  const double lo = std::log10(0.01);
  const double hi = std::log10(10.0);
  for (int k = 0; k < n; ++k)
    grid[static_cast<std::size_t>(k)] = std::pow(10.0, lo + (hi - lo) * k / (n - 1));
  return grid;
}

SweepResult field_sweep(const SpinSystem& sys, const SpectralDensityModel& base,
                        const std::vector<BathModel>& family,
                        const std::vector<double>& field_grid_tesla, double temperature_k,
                        bool with_hyperfine,
                        const std::vector<std::pair<double, double>>& exponent_ranges) {
  if (field_grid_tesla.empty())
    throw std::invalid_argument("field_sweep: empty field grid");
  for (double b : field_grid_tesla)
    if (!(b > 0.0)) throw std::invalid_argument("field_sweep: fields must be positive");

  SpinSystem local_sys = sys;
  if (!with_hyperfine) local_sys.hyperfine = HyperfineTensor{};

  Eigen::Vector3d dir = base.field_tesla;
  if (dir.norm() == 0.0) dir = Eigen::Vector3d::UnitZ();
  dir.normalize();

  SweepResult result;
  result.temperature_k = temperature_k;
  for (const auto& bm : family) {
    ModelSweep ms;
    ms.model_name = bm.name;
    ms.with_hyperfine = with_hyperfine;
    const SpectralDensityModel model = apply_bath_model(base, bm);
    for (double b : field_grid_tesla) {
      SweepPoint pt;
      pt.b_tesla = b;
      const Eigen::Vector3d field = b * dir;
      pt.t1 = t1(local_sys, model, field, temperature_k);
      pt.t2 = t2(local_sys, model, field, temperature_k);
      ms.points.push_back(pt);
    }
    for (const auto& range : exponent_ranges) {
      SweepExponents se;
      se.range_tesla = range;
      std::vector<double> bs, t1s, t2s;
      for (const auto& pt : ms.points) {
        bs.push_back(pt.b_tesla);
        t1s.push_back(pt.t1.ok && !pt.t1.infinite ? pt.t1.seconds : -1.0);
        t2s.push_back(pt.t2.ok && !pt.t2.infinite ? pt.t2.seconds : -1.0);
      }
      try {
        se.t1_fit = scaling_exponent(bs, t1s, range);
        se.t2_fit = scaling_exponent(bs, t2s, range);
        se.ok = true;
      } catch (const std::invalid_argument&) {
        se.ok = false;  // too few converged points in this range; left unfit
      }
      ms.exponents.push_back(se);
    }
    result.models.push_back(std::move(ms));
  }
  return result;
}

TemperatureSweepResult temperature_sweep(const SpinSystem& sys,
                                         const SpectralDensityModel& base,
                                         const BathModel& model,
                                         const Eigen::Vector3d& field_tesla,
                                         const std::vector<double>& temperatures_k) {
  if (temperatures_k.size() < 2)
    throw std::invalid_argument("temperature_sweep: need at least 2 temperatures");
  for (double t : temperatures_k)
    if (!(t > 0.0))
      throw std::invalid_argument("temperature_sweep: temperatures must be positive");

  const SpectralDensityModel m = apply_bath_model(base, model);
  TemperatureSweepResult out;
  out.b_tesla = field_tesla.norm();
  out.temperature_k = temperatures_k;
  for (double temp : temperatures_k) out.t1.push_back(t1(sys, m, field_tesla, temp));

  std::vector<double> t1s;
  for (const auto& rt : out.t1)
    t1s.push_back(rt.ok && !rt.infinite ? rt.seconds : -1.0);
  const auto [tmin, tmax] =
      std::minmax_element(temperatures_k.begin(), temperatures_k.end());
  if (temperatures_k.size() >= 3) {
    out.exponent = scaling_exponent(temperatures_k, t1s, {*tmin, *tmax});
  } else {
    // Two points define the slope exactly; no residual-based error estimate.
    if (t1s[0] > 0 && t1s[1] > 0 && temperatures_k[0] != temperatures_k[1]) {
      out.exponent.slope = (std::log(t1s[1]) - std::log(t1s[0])) /
                           (std::log(temperatures_k[1]) - std::log(temperatures_k[0]));
      out.exponent.std_error = std::numeric_limits<double>::quiet_NaN();
      out.exponent.n_used = 2;
    } else {
      throw std::invalid_argument("temperature_sweep: two-point sweep did not converge");
    }
  }
  return out;
}

}  // namespace spinbath
