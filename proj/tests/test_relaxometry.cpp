// test_relaxometry.cpp - decay fitting, initial states, T1/T2 protocol
// invariants, and sweep plumbing.
#include "doctest.h"
#include "spinbath/hamiltonian.hpp"
#include "spinbath/relaxometry.hpp"
#include "spinbath/spectral_density.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace spinbath;

namespace {

SpectralDensityModel flat_model(double g0, bool noise_on = false) {
  SpectralDensityModel m;
  m.g_spectrum = FlatG{g0, 0.0, 10.0};  // temperature independent
  m.noise = NoiseParams{};              // a = 16e-10, b = 0
  m.spin_lattice_enabled = true;
  m.magnetic_noise_enabled = noise_on;
  return m;
}

const Eigen::Vector3d kZ{0.0, 0.0, 1.0};

}  // namespace

TEST_CASE("fit_decay recovers exact exponential parameters") {
  const double t_const = 2.5e-3, amp = 0.45, asym = 0.05;
  DecaySignal sig;
  for (int k = 0; k < 60; ++k) {
    const double t = k * 2e-4;
    sig.t_sec.push_back(t);
    sig.y.push_back(asym + amp * std::exp(-t / t_const));
  }
  const auto fit = fit_decay(sig);
  CHECK(fit.converged);
  CHECK(!fit.flat);
  CHECK(!fit.low_quality);
  CHECK(fit.time_const_sec == doctest::Approx(t_const).epsilon(1e-6));
  CHECK(fit.amplitude == doctest::Approx(amp).epsilon(1e-6));
  CHECK(fit.asymptote == doctest::Approx(asym).epsilon(1e-6));
  CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("fit_decay classifies a flat signal instead of inventing a constant") {
  DecaySignal sig;
  for (int k = 0; k < 20; ++k) {
    sig.t_sec.push_back(k * 1e-3);
    sig.y.push_back(0.25);
  }
  const auto fit = fit_decay(sig);
  CHECK(fit.flat);
}

TEST_CASE("fit_decay flags noisy data as low quality") {
  DecaySignal sig;
  for (int k = 0; k < 40; ++k) {
    const double t = k * 1e-3;
    sig.t_sec.push_back(t);
    // strong deterministic ripple on top of the decay ruins r_squared
    sig.y.push_back(std::exp(-t / 5e-3) + 0.3 * std::sin(7.0 * k));
  }
  const auto fit = fit_decay(sig);
  CHECK(fit.converged);
  CHECK(fit.low_quality);
  CHECK(fit.r_squared < 0.995);
}

TEST_CASE("fit_decay needs at least eight samples") {
  DecaySignal sig;
  for (int k = 0; k < 7; ++k) {
    sig.t_sec.push_back(k * 1e-3);
    sig.y.push_back(std::exp(-k * 0.3));
  }
  CHECK_THROWS_AS(fit_decay(sig), std::invalid_argument);
}

TEST_CASE("initial states have the advertised polarizations") {
  const auto sys = copper_qubit_system();
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, kZ));

  for (double m_i : {1.5, 0.5, -0.5, -1.5}) {
    const auto rho_z = initial_state(sys, eigen, {InitialState::Kind::z_polarized, m_i});
    const auto rho_x = initial_state(sys, eigen, {InitialState::Kind::x_polarized, m_i});

    // purity
    CHECK(std::abs((rho_z.rho * rho_z.rho).trace().real() - 1.0) < 1e-10);
    CHECK(std::abs((rho_x.rho * rho_x.rho).trace().real() - 1.0) < 1e-10);

    const double sz_z = 0.5 * (rho_z.rho * eigen.sigma[2]).trace().real();
    const double sz_x = 0.5 * (rho_x.rho * eigen.sigma[2]).trace().real();
    const double sx_x = 0.5 * (rho_x.rho * eigen.sigma[0]).trace().real();
    CHECK(sz_z == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(sz_x) < 1e-9);
    CHECK(sx_x == doctest::Approx(0.5).epsilon(1e-9));
  }

  CHECK_THROWS_AS(initial_state(sys, eigen, {InitialState::Kind::z_polarized, 0.3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(initial_state(sys, eigen, {InitialState::Kind::z_polarized, 2.5}),
                  std::invalid_argument);
}

TEST_CASE("observable_signal reports the coherence envelope within the spin bound") {
  const auto sys = copper_qubit_system();
  const auto eigen = eigensystem(sys, build_hamiltonian(sys, kZ));
  const auto rho_x = initial_state(sys, eigen, {InitialState::Kind::x_polarized, 1.5});
  const auto sig = observable_signal({rho_x}, eigen, Observable::sx_magnitude, {0.0});
  REQUIRE(sig.y.size() == 1);
  CHECK(sig.y[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("t1 and t2 report an infinite time when nothing couples") {
  const auto sys = copper_qubit_system();
  SpectralDensityModel dead = flat_model(0.0);
  dead.magnetic_noise_enabled = false;
  const auto r1 = t1(sys, dead, kZ, 10.0);
  const auto r2 = t2(sys, dead, kZ, 10.0);
  CHECK(r1.infinite);
  CHECK(r1.ok);
  CHECK(std::isinf(r1.seconds));
  CHECK(r2.infinite);
}

TEST_CASE("doubling the spectral density halves the relaxation time") {
  const auto sys = copper_qubit_system();
  const auto r_base = t1(sys, flat_model(2e-20), kZ, 10.0);
  const auto r_double = t1(sys, flat_model(4e-20), kZ, 10.0);
  REQUIRE(r_base.ok);
  REQUIRE(r_double.ok);
  CHECK(r_double.seconds / r_base.seconds == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("nuclear projection choice shifts T1 by less than twenty percent") {
  const auto sys = copper_qubit_system();
  const auto model = flat_model(2e-20);
  const auto r_top = t1(sys, model, kZ, 10.0, 1.5);
  const auto r_mid = t1(sys, model, kZ, 10.0, -0.5);
  REQUIRE(r_top.ok);
  REQUIRE(r_mid.ok);
  CHECK(std::abs(r_mid.seconds / r_top.seconds - 1.0) < 0.20);
}

TEST_CASE("without pure dephasing T2 equals 2 T1 within five percent") {
  const auto sys = copper_qubit_system();
  const auto model = flat_model(2e-20);  // magnetic noise off
  for (double b : {0.5, 2.0}) {
    const Eigen::Vector3d field = b * kZ;
    const auto r1 = t1(sys, model, field, 10.0);
    const auto r2 = t2(sys, model, field, 10.0);
    REQUIRE(r1.ok);
    REQUIRE(r2.ok);
    CHECK(r2.seconds / (2.0 * r1.seconds) == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("adding magnetic noise never lengthens T2") {
  const auto sys = copper_qubit_system();
  const auto quiet = t2(sys, flat_model(2e-20, false), kZ, 10.0);
  const auto noisy = t2(sys, flat_model(2e-20, true), kZ, 10.0);
  REQUIRE(quiet.ok);
  REQUIRE(noisy.ok);
  CHECK(noisy.seconds <= quiet.seconds * (1.0 + 1e-6));
}

TEST_CASE("scaling_exponent nails constructed power laws") {
  std::vector<double> x, y2, y3;
  for (int k = 1; k <= 12; ++k) {
    const double v = 0.5 * k;
    x.push_back(v);
    y2.push_back(3.0 * v * v);
    y3.push_back(7.0 / (v * v * v));
  }
  const auto f2 = scaling_exponent(x, y2, {x.front(), x.back()});
  const auto f3 = scaling_exponent(x, y3, {x.front(), x.back()});
  CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f3.slope == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(f2.n_used == 12);

  // range restriction drops points
  const auto part = scaling_exponent(x, y2, {1.0, 3.0});
  CHECK(part.n_used == 5);
  CHECK(part.slope == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("scaling_exponent tolerates mild deterministic ripple") {
  std::vector<double> x, y;
  for (int k = 0; k < 24; ++k) {
    const double v = std::pow(10.0, -1.0 + k * (2.0 / 23.0));
    x.push_back(v);
    y.push_back((1.0 / v) * (1.0 + 0.02 * std::sin(3.0 * k)));
  }
  const auto fit = scaling_exponent(x, y, {x.front(), x.back()});
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.03));
  CHECK(fit.std_error < 0.05);
}

TEST_CASE("scaling_exponent rejects unusable inputs") {
  CHECK_THROWS_AS(scaling_exponent({1.0, 2.0}, {1.0, 2.0}, {0.5, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scaling_exponent({1.0, 2.0, 3.0}, {1.0, -2.0, 0.0}, {0.5, 4.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scaling_exponent({1.0, 2.0, 3.0}, {1.0, 2.0}, {0.5, 4.0}),
                  std::invalid_argument);
}

TEST_CASE("default model family covers the three bath configurations") {
  const auto family = default_model_family();
  REQUIRE(family.size() == 3);
  CHECK(family[0].name == "spin_lattice");
  CHECK(family[0].spin_lattice);
  CHECK(!family[0].magnetic_noise);
  CHECK(family[1].name == "hybrid_a");
  CHECK(family[1].magnetic_noise);
  CHECK(family[1].noise.b == 0.0);
  CHECK(family[2].name == "hybrid_ab");
  CHECK(family[2].noise.b > 0.0);
}

TEST_CASE("default field grid spans 0.01 to 10 tesla with 24 points") {
  const auto grid = default_field_grid();
  REQUIRE(grid.size() == 24);
  CHECK(grid.front() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(10.0).epsilon(1e-12));
  for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] > grid[k - 1]);
}

TEST_CASE("field_sweep fills points, exponents, and the hyperfine toggle") {
  const auto sys = copper_qubit_system();
  const auto base = flat_model(2e-20);
  std::vector<BathModel> family = {{"spin_lattice", true, false, NoiseParams{}}};
  const std::vector<double> grid = {1.0, 2.2, 4.6, 10.0};

  const auto with_a = field_sweep(sys, base, family, grid, 10.0, true);
  REQUIRE(with_a.models.size() == 1);
  const auto& m = with_a.models[0];
  CHECK(m.model_name == "spin_lattice");
  CHECK(m.with_hyperfine);
  REQUIRE(m.points.size() == 4);
  for (const auto& p : m.points) {
    CHECK(p.t1.ok);
    CHECK(p.t2.ok);
    CHECK(p.t1.seconds > 0.0);
  }
  REQUIRE(m.exponents.size() == 1);
  CHECK(m.exponents[0].ok);
  CHECK(m.exponents[0].range_tesla.first == doctest::Approx(1.0));
  CHECK(m.exponents[0].t1_fit.n_used == 4);

  const auto no_a = field_sweep(sys, base, family, grid, 10.0, false);
  CHECK(!no_a.models[0].with_hyperfine);
  // zeroing the hyperfine tensor changes the measured times
  CHECK(no_a.models[0].points[0].t1.seconds !=
        doctest::Approx(m.points[0].t1.seconds).epsilon(1e-6));

  CHECK_THROWS_AS(field_sweep(sys, base, family, {}, 10.0, true), std::invalid_argument);
  CHECK_THROWS_AS(field_sweep(sys, base, family, {0.0, 1.0}, 10.0, true),
                  std::invalid_argument);
}

TEST_CASE("temperature_sweep recovers the stand-in temperature exponent") {
  const auto sys = copper_qubit_system();
  SpectralDensityModel base;
  base.g_spectrum = FlatG{2e-20, 1.0, 10.0};  // G linear in T
  base.magnetic_noise_enabled = false;
  const BathModel model{"spin_lattice", true, false, NoiseParams{}};
  const auto sweep =
      temperature_sweep(sys, base, model, kZ, {20.0, 60.0, 180.0});
  REQUIRE(sweep.t1.size() == 3);
  for (const auto& r : sweep.t1) CHECK(r.ok);
  CHECK(sweep.exponent.slope == doctest::Approx(-1.0).epsilon(0.05));

  CHECK_THROWS_AS(temperature_sweep(sys, base, model, kZ, {10.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(temperature_sweep(sys, base, model, kZ, {10.0, -5.0}),
                  std::invalid_argument);
}
