// test_config.cpp - config parsing, unit tags, validation, derived model
// construction, and the provenance hash.
#include "doctest.h"
#include "spinbath/config.hpp"
#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"

#include <cmath>
#include <string>

using namespace spinbath;

namespace {

constexpr double kTwoPi = 6.283185307179586;

bool mentions(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string error_text(const std::string& cfg) {
  try {
    parse_config(cfg, "inline");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config yields the copper-qubit defaults") {
  const auto cfg = parse_config("", "inline");
  CHECK(cfg.system.nuclear_spin == 1.5);
  CHECK(cfg.system.g.m(0, 0) == doctest::Approx(2.1106));
  CHECK(cfg.system.g.m(2, 2) == doctest::Approx(2.0364));
  CHECK(cfg.system.hyperfine.m(2, 2) ==
        doctest::Approx(kTwoPi * 611e6).epsilon(1e-12));
  CHECK(cfg.system.hyperfine.m(0, 0) ==
        doctest::Approx(kTwoPi * 79.4e6).epsilon(1e-12));
  CHECK(cfg.spectrum_kind == "flat");
  CHECK(cfg.noise.a_tesla2 == doctest::Approx(16e-10));
  CHECK(cfg.noise.b == doctest::Approx(3e-8));
  CHECK(cfg.noise.gamma_pd_rad_per_sec ==
        doctest::Approx(0.001 * rad_per_sec_per_cm1).epsilon(1e-12));
  CHECK(cfg.b_min_tesla == 0.01);
  CHECK(cfg.b_max_tesla == 10.0);
  CHECK(cfg.b_points == 24);
  CHECK(cfg.temperature_k == 10.0);
  CHECK(cfg.models.size() == 3);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.plots);
}

TEST_CASE("unit-tagged values convert through the declared unit") {
  const std::string text = R"(
[system]
a_par = "611 MHz"
a_perp = "0.00265 cm-1"
[bath]
g0 = "0.02 ns"
gamma_pd = "0.002 cm-1"
[acf]
window = "35 ps"
alpha_omega_max = "200 cm-1"
[sweep]
b_min = "10 mT"
temperature = "300 K"
)";
  const auto cfg = parse_config(text, "inline");
  CHECK(cfg.system.hyperfine.m(2, 2) ==
        doctest::Approx(kTwoPi * 611e6).epsilon(1e-12));
  CHECK(cfg.system.hyperfine.m(0, 0) ==
        doctest::Approx(0.00265 * rad_per_sec_per_cm1).epsilon(1e-12));
  CHECK(cfg.flat.g0_sec == doctest::Approx(2e-11).epsilon(1e-12));
  CHECK(cfg.noise.gamma_pd_rad_per_sec ==
        doctest::Approx(0.002 * rad_per_sec_per_cm1).epsilon(1e-12));
  CHECK(cfg.acf_window_sec == doctest::Approx(35e-12).epsilon(1e-12));
  CHECK(cfg.alpha_omega_max_rad_per_sec ==
        doctest::Approx(200.0 * rad_per_sec_per_cm1).epsilon(1e-12));
  CHECK(cfg.b_min_tesla == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(cfg.temperature_k == 300.0);
}

TEST_CASE("errors carry the origin and line number") {
  CHECK(mentions(error_text("[sweep]\nnope = 3\n"), "inline:2"));
  CHECK(mentions(error_text("[sweep]\nnope = 3\n"), "unknown key"));
  CHECK(mentions(error_text("\n\n[warp]\n"), "inline:3"));
  CHECK(mentions(error_text("[warp]\nx = 1\n"), "unknown section"));
  CHECK(mentions(error_text("x = 1\n"), "outside of any"));
}

TEST_CASE("quantities demand a quoted magnitude-unit pair of the right dimension") {
  // bare number where a quantity is expected
  CHECK(mentions(error_text("[bath]\ng0 = 2e-20\n"), "g0"));
  // wrong dimension
  CHECK(mentions(error_text("[bath]\ng0 = \"5 T\"\n"), "unit"));
  // malformed magnitude
  CHECK(mentions(error_text("[bath]\ng0 = \"abc s\"\n"), "malformed"));
  // unknown unit name
  CHECK_THROWS_AS(parse_config("[bath]\ng0 = \"1 parsec\"\n", "inline"), ConfigError);
}

TEST_CASE("validation rejects inconsistent parameter combinations") {
  CHECK_THROWS_AS(parse_config("[sweep]\nb_min = \"5 T\"\nb_max = \"2 T\"\n", "x"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\nfit_min = \"9 T\"\nfit_max = \"1 T\"\n", "x"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\nb_points = 1\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\ndirection = [0, 0, 0]\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\nmodels = [\"other\"]\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nnuclear_spin = 0.3\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\ntemperature = \"-4 K\"\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[output]\nplots = maybe\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[acf]\noverlap = 1.5\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[acf]\nalpha_component = \"gqq\"\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("[bath]\nspectrum = \"cubic\"\n", "x"), ConfigError);
}

TEST_CASE("arrays, booleans, and comments parse") {
  const std::string text = R"(
# leading comment
[sweep]
direction = [0, 1, 1]   # in-plane tilt
models = ["spin_lattice", "hybrid_ab"]
hyperfine_variant = true
[output]
plots = false
directory = "results # not a comment"
[bath]
magnetic_noise = false
)";
  const auto cfg = parse_config(text, "inline");
  CHECK(cfg.direction == Eigen::Vector3d(0, 1, 1));
  REQUIRE(cfg.models.size() == 2);
  CHECK(cfg.models[1] == "hybrid_ab");
  CHECK(cfg.hyperfine_variant);
  CHECK(!cfg.plots);
  CHECK(cfg.out_dir == "results # not a comment");
  CHECK(!cfg.magnetic_noise);
}

TEST_CASE("bath_family applies the three noise policies") {
  auto cfg = parse_config("[bath]\nb = 5e-8\n", "inline");
  const auto family = bath_family(cfg);
  REQUIRE(family.size() == 3);
  CHECK(!family[0].magnetic_noise);       // spin_lattice
  CHECK(family[1].magnetic_noise);
  CHECK(family[1].noise.b == 0.0);        // hybrid_a forces b = 0
  CHECK(family[2].noise.b == doctest::Approx(5e-8));
  CHECK(family[1].noise.a_tesla2 == doctest::Approx(16e-10));

  cfg.models = {"hybrid_ab"};
  const auto one = bath_family(cfg);
  REQUIRE(one.size() == 1);
  CHECK(one[0].name == "hybrid_ab");
}

TEST_CASE("field grid is log spaced between the configured endpoints") {
  const auto cfg = parse_config(
      "[sweep]\nb_min = \"0.1 T\"\nb_max = \"10 T\"\nb_points = 5\n", "inline");
  const auto grid = field_grid(cfg);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(grid[2] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < grid.size(); ++k)
    CHECK(grid[k] / grid[k - 1] == doctest::Approx(grid[1] / grid[0]).epsilon(1e-12));
}

TEST_CASE("build_model resolves spectrum kind, toggles, and direction") {
  auto cfg = parse_config("[bath]\nspectrum = \"lorentzian\"\n[sweep]\ndirection = [0, 0, 2]\n",
                          "inline");
  const auto model = build_model(cfg);
  CHECK(std::holds_alternative<LorentzianG>(model.g_spectrum));
  CHECK(model.field_tesla == Eigen::Vector3d(0, 0, 1));  // normalized
  CHECK(model.temperature_k == cfg.temperature_k);
  CHECK(model.magnetic_noise_enabled == cfg.magnetic_noise);
  CHECK(model.mean_g.m(0, 0) == doctest::Approx(2.1106));

  cfg.spectrum_kind = "flat";
  CHECK(std::holds_alternative<FlatG>(build_model(cfg).g_spectrum));
}

TEST_CASE("config hash is stable under formatting and sensitive to values") {
  const auto a = parse_config("[sweep]\ntemperature = \"10 K\"\n", "inline");
  const auto b = parse_config("# comment\n\n[sweep]\n  temperature   =  \"10 K\"  \n", "other");
  const auto c = parse_config("[sweep]\ntemperature = \"11 K\"\n", "inline");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  // where results land must not change what they are called
  auto d = a;
  d.out_dir = "somewhere/else";
  d.plots = !d.plots;
  CHECK(config_hash(a) == config_hash(d));
  CHECK(config_hash(a).size() == 16);
  for (char ch : config_hash(a)) CHECK(std::isxdigit(static_cast<unsigned char>(ch)));
}

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 14695981039346656037ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("load_config reports unreadable paths") {
  CHECK_THROWS_AS(load_config("/nonexistent/dir/conf.toml"), IoError);
}
