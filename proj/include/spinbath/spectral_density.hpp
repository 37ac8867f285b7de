// spectral_density.hpp - hybrid bath spectral density J_jj'(omega).
//
// The total density is the sum of two parts:
//   spin-lattice  J^dg_jj'(w) = delta_jj' (mu_B/2)^2 lambda w sum_i B_i^2 G_ij(w)
//   magnetic noise J^dB_jj'(w) = (mu_B/2)^2 sum_i g_ij g_ij' G^dB(w)
// where G_ij is the spectrum of dimensionless g-tensor fluctuations (seconds)
// and G^dB(w) = (1/sqrt(2 pi)) A_B gamma_pd / (gamma_pd^2 + w^2) with
// A_B = a + b B^2 (tesla^2 seconds). J carries units of J^2 s throughout.
//
// Sign convention: positive omega is emission (a downward transition of the
// spin system). The spin-lattice part extends to negative frequencies through
// the detailed-balance factor J(-|w|) = e^{-hbar|w|/kT} J(|w|) and vanishes at
// w = 0; the magnetic-noise part is even in omega and carries no such factor.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>

#include "spinbath/acf.hpp"
#include "spinbath/constants.hpp"
#include "spinbath/spin_system.hpp"

namespace spinbath {

struct OhmicParams {
  double lambda_sec_per_rad = 1.0 / (6.9 * rad_per_sec_per_cm1);  // 1/lambda = 6.9 cm^-1

  static OhmicParams from_lambda_inv_cm1(double lambda_inv_cm1);
};

struct NoiseParams {
  double a_tesla2 = 16e-10;                                  // field-independent variance
  double b = 0.0;                                            // field-dependent coefficient
  double gamma_pd_rad_per_sec = 0.001 * rad_per_sec_per_cm1; // Lorentzian width
};

// Analytic stand-ins let the pipeline run without trajectory data. Both scale
// with temperature as (T / t_ref)^temp_exponent; tabulated spectra are used at
// face value for whatever temperature they were estimated at.
struct FlatG {
  double g0_sec = 2e-20;
  double temp_exponent = 1.0;
  double t_ref_k = 10.0;
};

struct LorentzianG {
  double variance = 1e-6;                 // dimensionless fluctuation variance
  double gamma_rad_per_sec = 1e12;        // inverse correlation time
  double temp_exponent = 1.0;
  double t_ref_k = 10.0;
};

struct TabulatedG {
  SpectrumEstimate spectrum;
};

using GSpectrumSource = std::variant<FlatG, LorentzianG, TabulatedG>;

struct SpectralDensityModel {
  GSpectrumSource g_spectrum = FlatG{};
  OhmicParams ohmic{};
  NoiseParams noise{};
  GTensor mean_g = GTensor::axial(2.1106, 2.0364);
  Eigen::Vector3d field_tesla{0.0, 0.0, 1.0};
  double temperature_k = 10.0;
  bool spin_lattice_enabled = true;
  bool magnetic_noise_enabled = true;
};

// G_ij(omega >= 0) of the fluctuation spectrum source at the given temperature.
// Tabulated spectra are interpolated linearly, clamped to zero beyond the grid
// and wherever estimator noise dips negative.
double g_spectrum_value(const GSpectrumSource& source, int i, int j, double omega_abs,
                        double temperature_k);

// Spin-lattice part at omega >= 0 (zero for j != j' and at omega = 0).
double spin_lattice_j(const SpectralDensityModel& model, int j, int jp, double omega_abs);

struct NoiseAmplitude {
  double a_b_tesla2 = 0.0;
  double delta_b_tesla = 0.0;
};

// A_B = a + b B^2 and the noise magnitude deltaB = sqrt(A_B).
NoiseAmplitude noise_amplitude(const NoiseParams& noise, double b_magnitude_tesla);

// Lorentzian field-noise spectrum G^dB(omega), even in omega, units T^2 s.
double magnetic_noise_spectrum(const NoiseParams& noise, double b_magnitude_tesla,
                               double omega);

// Magnetic-noise part, any omega.
double magnetic_noise_j(const SpectralDensityModel& model, int j, int jp, double omega);

// Total J_jj'(omega) for signed omega with the detailed-balance extension of
// the spin-lattice part evaluated at the given temperature.
double total_j(const SpectralDensityModel& model, int j, int jp, double omega_signed,
               double temperature_k);

// The (j, j', omega) -> J closure consumed by the Redfield engine; binds the
// model's own temperature.
using SpectralFunction = std::function<double(int, int, double)>;
SpectralFunction spectral_function(const SpectralDensityModel& model);

}  // namespace spinbath
