#include "spinbath/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinbath {

namespace {

constexpr double half_mu_b = 0.5 * PhysConstants::mu_bohr;
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void check_noise(const NoiseParams& noise) {
  if (noise.a_tesla2 < 0.0 || noise.b < 0.0 || noise.gamma_pd_rad_per_sec <= 0.0) {
    throw std::invalid_argument("NoiseParams: need a >= 0, b >= 0, gamma_pd > 0");
  }
}

int component_index(int i, int j) {
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  if (lo == hi) return lo;                   // xx, yy, zz
  if (lo == 0) return hi == 1 ? 3 : 4;       // xy, xz
  return 5;                                  // yz
}

double tabulated_value(const SpectrumEstimate& spec, int i, int j, double omega_abs) {
  const auto& xs = spec.omega_rad_per_sec;
  if (omega_abs > xs.back()) return 0.0;  // clamp beyond the estimated band
  const auto& ys = spec.g[static_cast<size_t>(component_index(i, j))];
  const auto it = std::upper_bound(xs.begin(), xs.end(), omega_abs);
  double v;
  if (it == xs.begin()) {
    v = ys.front();
  } else if (it == xs.end()) {
    v = ys.back();
  } else {
    const size_t hi = static_cast<size_t>(it - xs.begin());
    const size_t lo = hi - 1;
    const double t = (omega_abs - xs[lo]) / (xs[hi] - xs[lo]);
    v = ys[lo] + t * (ys[hi] - ys[lo]);
  }
  return std::max(v, 0.0);  // estimator noise below zero is unphysical
}

}  // namespace

OhmicParams OhmicParams::from_lambda_inv_cm1(double lambda_inv_cm1) {
  if (lambda_inv_cm1 <= 0.0) {
    throw std::invalid_argument("OhmicParams: 1/lambda must be positive");
  }
  return OhmicParams{1.0 / (lambda_inv_cm1 * rad_per_sec_per_cm1)};
}

double g_spectrum_value(const GSpectrumSource& source, int i, int j, double omega_abs,
                        double temperature_k) {
  if (i < 0 || i > 2 || j < 0 || j > 2) {
    throw std::invalid_argument("g_spectrum_value: axis index out of range");
  }
  if (omega_abs < 0.0) throw std::invalid_argument("g_spectrum_value: omega must be >= 0");
  if (const auto* flat = std::get_if<FlatG>(&source)) {
    return flat->g0_sec * std::pow(temperature_k / flat->t_ref_k, flat->temp_exponent);
  }
  if (const auto* lor = std::get_if<LorentzianG>(&source)) {
    const double g = lor->gamma_rad_per_sec;
    const double base = inv_sqrt_2pi * lor->variance * g / (g * g + omega_abs * omega_abs);
    return base * std::pow(temperature_k / lor->t_ref_k, lor->temp_exponent);
  }
  return tabulated_value(std::get<TabulatedG>(source).spectrum, i, j, omega_abs);
}

namespace {

double spin_lattice_j_at(const SpectralDensityModel& model, int j, int jp, double omega_abs,
                         double temperature_k) {
  if (j != jp || omega_abs == 0.0) return 0.0;  // delta_jj' and Ohmic suppression
  double bg = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double bi = model.field_tesla(i);
    if (bi == 0.0) continue;
    bg += bi * bi * g_spectrum_value(model.g_spectrum, i, j, omega_abs, temperature_k);
  }
  return half_mu_b * half_mu_b * model.ohmic.lambda_sec_per_rad * omega_abs * bg;
}

}  // namespace

double spin_lattice_j(const SpectralDensityModel& model, int j, int jp, double omega_abs) {
  if (omega_abs < 0.0) throw std::invalid_argument("spin_lattice_j: omega must be >= 0");
  return spin_lattice_j_at(model, j, jp, omega_abs, model.temperature_k);
}

NoiseAmplitude noise_amplitude(const NoiseParams& noise, double b_magnitude_tesla) {
  check_noise(noise);
  if (b_magnitude_tesla < 0.0) {
    throw std::invalid_argument("noise_amplitude: field magnitude must be >= 0");
  }
  NoiseAmplitude amp;
  amp.a_b_tesla2 = noise.a_tesla2 + noise.b * b_magnitude_tesla * b_magnitude_tesla;
  amp.delta_b_tesla = std::sqrt(amp.a_b_tesla2);
  return amp;
}

double magnetic_noise_spectrum(const NoiseParams& noise, double b_magnitude_tesla,
                               double omega) {
  const double a_b = noise_amplitude(noise, b_magnitude_tesla).a_b_tesla2;
  const double g = noise.gamma_pd_rad_per_sec;
  return inv_sqrt_2pi * a_b * g / (g * g + omega * omega);
}

double magnetic_noise_j(const SpectralDensityModel& model, int j, int jp, double omega) {
  const double g_db = magnetic_noise_spectrum(model.noise, model.field_tesla.norm(), omega);
  double gg = 0.0;
  for (int i = 0; i < 3; ++i) gg += model.mean_g.m(i, j) * model.mean_g.m(i, jp);
  return half_mu_b * half_mu_b * gg * g_db;
}

double total_j(const SpectralDensityModel& model, int j, int jp, double omega_signed,
               double temperature_k) {
  if (j < 0 || j > 2 || jp < 0 || jp > 2) {
    throw std::invalid_argument("total_j: axis index out of range");
  }
  if (temperature_k <= 0.0) throw std::invalid_argument("total_j: temperature must be positive");

  double total = 0.0;
  if (model.spin_lattice_enabled) {
    const double j_pos = spin_lattice_j_at(model, j, jp, std::abs(omega_signed), temperature_k);
    if (omega_signed >= 0.0) {
      total += j_pos;
    } else {
      // Absorption side carries the Boltzmann penalty relative to emission.
      const double x = PhysConstants::hbar * std::abs(omega_signed) /
                       (PhysConstants::k_boltz * temperature_k);
      total += std::exp(-x) * j_pos;
    }
  }
  if (model.magnetic_noise_enabled) {
    total += magnetic_noise_j(model, j, jp, omega_signed);  // even in omega
  }
  return total;
}

SpectralFunction spectral_function(const SpectralDensityModel& model) {
  return [model](int j, int jp, double omega) {
    return total_j(model, j, jp, omega, model.temperature_k);
  };
}

}  // namespace spinbath
