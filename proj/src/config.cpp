// config.cpp - TOML-like config parsing with unit tags, plus model assembly.
#include "spinbath/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinbath/csv_io.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/units.hpp"

namespace spinbath {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;  // raw text, quotes included
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') quoted = !quoted;
    if (line[k] == '#' && !quoted) return line.substr(0, k);
  }
  return line;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double as_number(const Entry& e, const std::string& origin) {
  const char* s = e.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    fail(origin, e.line, "key '" + e.key + "' expects a number, got '" + e.value + "'");
  return v;
}

int as_int(const Entry& e, const std::string& origin) {
  const double v = as_number(e, origin);
  if (std::abs(v - std::round(v)) > 1e-9)
    fail(origin, e.line, "key '" + e.key + "' expects an integer");
  return static_cast<int>(std::llround(v));
}

bool as_bool(const Entry& e, const std::string& origin) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  fail(origin, e.line, "key '" + e.key + "' expects true or false");
}

std::string as_string(const Entry& e, const std::string& origin) {
  if (e.value.size() < 2 || e.value.front() != '"' || e.value.back() != '"')
    fail(origin, e.line, "key '" + e.key + "' expects a quoted string");
  return e.value.substr(1, e.value.size() - 2);
}

// "magnitude unit" with a mandatory tag of the expected dimension, converted
// to the requested target unit.
double as_quantity(const Entry& e, const std::string& origin, Dimension dim,
                   Unit target) {
  const std::string body = as_string(e, origin);
  const auto space = body.find_first_of(" \t");
  if (space == std::string::npos)
    fail(origin, e.line,
         "key '" + e.key + "' needs a unit tag, e.g. \"0.001 cm-1\"");
  const std::string mag = trim(body.substr(0, space));
  const std::string tag = trim(body.substr(space + 1));
  const char* s = mag.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    fail(origin, e.line, "key '" + e.key + "' has a malformed magnitude '" + mag + "'");
  Unit u;
  try {
    u = parse_unit(tag);
  } catch (const std::invalid_argument& ex) {
    fail(origin, e.line, "key '" + e.key + "': " + ex.what());
  }
  if (dimension_of(u) != dim)
    fail(origin, e.line, "key '" + e.key + "' has unit '" + tag +
                             "' of the wrong dimension");
  return convert(v, u, target);
}

std::vector<std::string> split_array(const Entry& e, const std::string& origin) {
  const std::string v = trim(e.value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    fail(origin, e.line, "key '" + e.key + "' expects an array [..]");
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const char c = v[k];
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  return items;
}

std::vector<double> as_number_array(const Entry& e, const std::string& origin) {
  std::vector<double> out;
  for (const auto& item : split_array(e, origin)) {
    const char* s = item.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
      fail(origin, e.line, "key '" + e.key + "': array element '" + item +
                               "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> as_string_array(const Entry& e, const std::string& origin) {
  std::vector<std::string> out;
  for (const auto& item : split_array(e, origin)) {
    if (item.size() < 2 || item.front() != '"' || item.back() != '"')
      fail(origin, e.line, "key '" + e.key + "': array element '" + item +
                               "' is not a quoted string");
    out.push_back(item.substr(1, item.size() - 2));
  }
  return out;
}

void require_positive(double v, const Entry& e, const std::string& origin) {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(origin, e.line, "key '" + e.key + "' must be positive and finite");
}

void require_non_negative(double v, const Entry& e, const std::string& origin) {
  if (!(v >= 0.0) || !std::isfinite(v))
    fail(origin, e.line, "key '" + e.key + "' must be non-negative and finite");
}

int component_index(const std::string& name) {
  for (std::size_t k = 0; k < kGComponentNames.size(); ++k)
    if (name == kGComponentNames[k]) return static_cast<int>(k);
  return -1;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  static const std::vector<std::string> kSections = {"system", "bath", "acf", "sweep",
                                                     "output"};
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(origin, line_no, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
        fail(origin, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, line_no, "expected 'key = value', got '" + line + "'");
    if (section.empty()) fail(origin, line_no, "key outside of any [section]");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.key.empty() || e.value.empty())
      fail(origin, line_no, "expected 'key = value', got '" + line + "'");
    entries.push_back(std::move(e));
  }

  RunConfig cfg;
  // System parameters are collected first, then the SpinSystem is rebuilt.
  double nuclear_spin = cfg.system.nuclear_spin;
  double g_perp = 2.1106, g_par = 2.0364;
  double a_perp = cfg.system.hyperfine.m(0, 0);
  double a_par = cfg.system.hyperfine.m(2, 2);

  for (const auto& e : entries) {
    const std::string where = e.section + "." + e.key;
    if (e.section == "system") {
      if (e.key == "nuclear_spin") {
        nuclear_spin = as_number(e, origin);
        const double twice = 2.0 * nuclear_spin;
        if (nuclear_spin < 0 || std::abs(twice - std::round(twice)) > 1e-9)
          fail(origin, e.line, "nuclear_spin must be a non-negative half-integer");
      } else if (e.key == "g_perp") {
        g_perp = as_number(e, origin);
        require_positive(g_perp, e, origin);
      } else if (e.key == "g_par") {
        g_par = as_number(e, origin);
        require_positive(g_par, e, origin);
      } else if (e.key == "a_perp") {
        a_perp = as_quantity(e, origin, Dimension::energy, Unit::rad_per_sec);
      } else if (e.key == "a_par") {
        a_par = as_quantity(e, origin, Dimension::energy, Unit::rad_per_sec);
      } else {
        fail(origin, e.line, "unknown key '" + e.key + "' in [system]");
      }
    } else if (e.section == "bath") {
      if (e.key == "spectrum") {
        const std::string v = as_string(e, origin);
        if (v == "flat" || v == "lorentzian" || v == "ou") {
          cfg.spectrum_kind = v;
          cfg.spectrum_path.clear();
        } else if (v.size() > 4 && v.substr(v.size() - 4) == ".csv") {
          cfg.spectrum_kind = "file";
          cfg.spectrum_path = v;
        } else {
          fail(origin, e.line,
               "spectrum must be flat, lorentzian, ou, or a .csv path");
        }
      } else if (e.key == "g0") {
        cfg.flat.g0_sec = as_quantity(e, origin, Dimension::time, Unit::second);
        require_positive(cfg.flat.g0_sec, e, origin);
      } else if (e.key == "temp_exponent") {
        cfg.flat.temp_exponent = as_number(e, origin);
        cfg.lorentz.temp_exponent = cfg.flat.temp_exponent;
      } else if (e.key == "t_ref") {
        const double t = as_quantity(e, origin, Dimension::temperature, Unit::kelvin);
        require_positive(t, e, origin);
        cfg.flat.t_ref_k = t;
        cfg.lorentz.t_ref_k = t;
      } else if (e.key == "lorentz_variance") {
        cfg.lorentz.variance = as_number(e, origin);
        require_non_negative(cfg.lorentz.variance, e, origin);
      } else if (e.key == "lorentz_gamma") {
        cfg.lorentz.gamma_rad_per_sec =
            as_quantity(e, origin, Dimension::energy, Unit::rad_per_sec);
        require_positive(cfg.lorentz.gamma_rad_per_sec, e, origin);
      } else if (e.key == "inv_lambda") {
        const double v = as_quantity(e, origin, Dimension::energy, Unit::rad_per_sec);
        require_positive(v, e, origin);
        cfg.ohmic.lambda_sec_per_rad = 1.0 / v;
      } else if (e.key == "gamma_pd") {
        cfg.noise.gamma_pd_rad_per_sec =
            as_quantity(e, origin, Dimension::energy, Unit::rad_per_sec);
        require_positive(cfg.noise.gamma_pd_rad_per_sec, e, origin);
      } else if (e.key == "a") {
        cfg.noise.a_tesla2 =
            as_quantity(e, origin, Dimension::field_squared, Unit::tesla_squared);
        require_non_negative(cfg.noise.a_tesla2, e, origin);
      } else if (e.key == "b") {
        cfg.noise.b = as_number(e, origin);
        require_non_negative(cfg.noise.b, e, origin);
      } else if (e.key == "spin_lattice") {
        cfg.spin_lattice = as_bool(e, origin);
      } else if (e.key == "magnetic_noise") {
        cfg.magnetic_noise = as_bool(e, origin);
      } else if (e.key == "ou_variance") {
        const double v = as_number(e, origin);
        require_non_negative(v, e, origin);
        cfg.ou.variance = Eigen::Matrix3d::Constant(v);
      } else if (e.key == "ou_corr_time") {
        cfg.ou.corr_time_sec = as_quantity(e, origin, Dimension::time, Unit::second);
        require_positive(cfg.ou.corr_time_sec, e, origin);
      } else if (e.key == "ou_dt") {
        cfg.ou.dt_sec = as_quantity(e, origin, Dimension::time, Unit::second);
        require_positive(cfg.ou.dt_sec, e, origin);
      } else if (e.key == "ou_duration") {
        cfg.ou.duration_sec = as_quantity(e, origin, Dimension::time, Unit::second);
        require_positive(cfg.ou.duration_sec, e, origin);
      } else if (e.key == "ou_seed") {
        const int s = as_int(e, origin);
        if (s < 0) fail(origin, e.line, "ou_seed must be non-negative");
        cfg.ou.seed = static_cast<std::uint64_t>(s);
      } else {
        fail(origin, e.line, "unknown key '" + e.key + "' in [bath]");
      }
    } else if (e.section == "acf") {
      if (e.key == "window") {
        cfg.acf_window_sec = as_quantity(e, origin, Dimension::time, Unit::second);
        require_positive(cfg.acf_window_sec, e, origin);
      } else if (e.key == "overlap") {
        cfg.acf_overlap = as_number(e, origin);
        if (cfg.acf_overlap < 0.0 || cfg.acf_overlap >= 1.0)
          fail(origin, e.line, "overlap must lie in [0, 1)");
      } else if (e.key == "taper") {
        const std::string v = as_string(e, origin);
        if (v == "none")
          cfg.taper.kind = Taper::Kind::none;
        else if (v == "exponential")
          cfg.taper.kind = Taper::Kind::exponential;
        else
          fail(origin, e.line, "taper must be none or exponential");
      } else if (e.key == "taper_rate") {
        cfg.taper.rate_per_sec = as_number(e, origin);
        require_non_negative(cfg.taper.rate_per_sec, e, origin);
      } else if (e.key == "alpha_component") {
        const int idx = component_index(as_string(e, origin));
        if (idx < 0)
          fail(origin, e.line, "alpha_component must be one of gxx..gyz");
        cfg.alpha_component = idx;
      } else if (e.key == "alpha_omega_max") {
        cfg.alpha_omega_max_rad_per_sec =
            as_quantity(e, origin, Dimension::energy, Unit::rad_per_sec);
        require_positive(cfg.alpha_omega_max_rad_per_sec, e, origin);
      } else {
        fail(origin, e.line, "unknown key '" + e.key + "' in [acf]");
      }
    } else if (e.section == "sweep") {
      if (e.key == "b_min") {
        cfg.b_min_tesla = as_quantity(e, origin, Dimension::field, Unit::tesla);
        require_positive(cfg.b_min_tesla, e, origin);
      } else if (e.key == "b_max") {
        cfg.b_max_tesla = as_quantity(e, origin, Dimension::field, Unit::tesla);
        require_positive(cfg.b_max_tesla, e, origin);
      } else if (e.key == "b_points") {
        cfg.b_points = as_int(e, origin);
        if (cfg.b_points < 2) fail(origin, e.line, "b_points must be at least 2");
      } else if (e.key == "direction") {
        const auto v = as_number_array(e, origin);
        if (v.size() != 3)
          fail(origin, e.line, "direction must have exactly 3 components");
        cfg.direction = Eigen::Vector3d(v[0], v[1], v[2]);
        if (cfg.direction.norm() == 0.0)
          fail(origin, e.line, "direction must be nonzero");
      } else if (e.key == "temperature") {
        cfg.temperature_k =
            as_quantity(e, origin, Dimension::temperature, Unit::kelvin);
        require_positive(cfg.temperature_k, e, origin);
      } else if (e.key == "fit_min") {
        cfg.fit_range_tesla.first =
            as_quantity(e, origin, Dimension::field, Unit::tesla);
        require_positive(cfg.fit_range_tesla.first, e, origin);
      } else if (e.key == "fit_max") {
        cfg.fit_range_tesla.second =
            as_quantity(e, origin, Dimension::field, Unit::tesla);
        require_positive(cfg.fit_range_tesla.second, e, origin);
      } else if (e.key == "models") {
        cfg.models = as_string_array(e, origin);
        if (cfg.models.empty()) fail(origin, e.line, "models must not be empty");
        for (const auto& name : cfg.models)
          if (name != "spin_lattice" && name != "hybrid_a" && name != "hybrid_ab")
            fail(origin, e.line, "unknown model '" + name + "'");
      } else if (e.key == "hyperfine_variant") {
        cfg.hyperfine_variant = as_bool(e, origin);
      } else {
        fail(origin, e.line, "unknown key '" + e.key + "' in [sweep]");
      }
    } else if (e.section == "output") {
      if (e.key == "directory") {
        cfg.out_dir = as_string(e, origin);
        if (cfg.out_dir.empty()) fail(origin, e.line, "directory must not be empty");
      } else if (e.key == "plots") {
        cfg.plots = as_bool(e, origin);
      } else {
        fail(origin, e.line, "unknown key '" + e.key + "' in [output]");
      }
    }
  }

  if (!(cfg.b_min_tesla < cfg.b_max_tesla))
    throw ConfigError(origin + ": b_min must be smaller than b_max");
  if (!(cfg.fit_range_tesla.first < cfg.fit_range_tesla.second))
    throw ConfigError(origin + ": fit_min must be smaller than fit_max");

  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  g.diagonal() << g_perp, g_perp, g_par;
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  a.diagonal() << a_perp, a_perp, a_par;
  cfg.system.nuclear_spin = nuclear_spin;
  cfg.system.g = GTensor(g);
  cfg.system.hyperfine = HyperfineTensor(a);

  // The OU surrogate fluctuates about the configured g-tensor.
  cfg.ou.mean_g = cfg.system.g.m;
  cfg.ou.temperature_k = cfg.temperature_k;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

SpectralDensityModel build_model(const RunConfig& cfg) {
  SpectralDensityModel m;
  m.ohmic = cfg.ohmic;
  m.noise = cfg.noise;
  m.mean_g = cfg.system.g;
  m.field_tesla = cfg.direction.normalized();
  m.temperature_k = cfg.temperature_k;
  m.spin_lattice_enabled = cfg.spin_lattice;
  m.magnetic_noise_enabled = cfg.magnetic_noise;
  if (cfg.spectrum_kind == "flat") {
    m.g_spectrum = cfg.flat;
  } else if (cfg.spectrum_kind == "lorentzian") {
    m.g_spectrum = cfg.lorentz;
  } else if (cfg.spectrum_kind == "file") {
    m.g_spectrum = TabulatedG{load_spectrum(cfg.spectrum_path)};
  } else if (cfg.spectrum_kind == "ou") {
    const GTrajectory traj = synth_ou_trajectory(cfg.ou);
    const auto est = windowed_acf(detrend(traj), cfg.acf_window_sec, cfg.acf_overlap);
    m.g_spectrum = TabulatedG{acf_spectrum(est, cfg.taper)};
  } else {
    throw ConfigError("unknown spectrum kind '" + cfg.spectrum_kind + "'");
  }
  return m;
}

std::vector<BathModel> bath_family(const RunConfig& cfg) {
  std::vector<BathModel> out;
  for (const auto& name : cfg.models) {
    BathModel bm;
    bm.name = name;
    bm.noise = cfg.noise;
    if (name == "spin_lattice") {
      bm.spin_lattice = true;
      bm.magnetic_noise = false;
    } else if (name == "hybrid_a") {
      bm.spin_lattice = true;
      bm.magnetic_noise = true;
      bm.noise.b = 0.0;
    } else {  // hybrid_ab, validated at parse time
      bm.spin_lattice = true;
      bm.magnetic_noise = true;
    }
    out.push_back(std::move(bm));
  }
  return out;
}

std::vector<double> field_grid(const RunConfig& cfg) {
  std::vector<double> grid(static_cast<std::size_t>(cfg.b_points));
  const double lo = std::log10(cfg.b_min_tesla);
  const double hi = std::log10(cfg.b_max_tesla);
  for (int k = 0; k < cfg.b_points; ++k)
    grid[static_cast<std::size_t>(k)] =
        std::pow(10.0, lo + (hi - lo) * k / (cfg.b_points - 1));
  return grid;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  auto kv = [&](const char* key, const std::string& v) { out << key << "=" << v << "\n"; };
  auto kvd = [&](const char* key, double v) { kv(key, format_double(v)); };

  kvd("system.nuclear_spin", cfg.system.nuclear_spin);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out << "system.g_" << i << j << "=" << format_double(cfg.system.g.m(i, j)) << "\n";
      out << "system.a_" << i << j << "="
          << format_double(cfg.system.hyperfine.m(i, j)) << "\n";
    }
  kv("bath.spectrum", cfg.spectrum_kind);
  kv("bath.spectrum_path", cfg.spectrum_path);
  kvd("bath.g0", cfg.flat.g0_sec);
  kvd("bath.temp_exponent", cfg.flat.temp_exponent);
  kvd("bath.t_ref", cfg.flat.t_ref_k);
  kvd("bath.lorentz_variance", cfg.lorentz.variance);
  kvd("bath.lorentz_gamma", cfg.lorentz.gamma_rad_per_sec);
  kvd("bath.lambda", cfg.ohmic.lambda_sec_per_rad);
  kvd("bath.gamma_pd", cfg.noise.gamma_pd_rad_per_sec);
  kvd("bath.a", cfg.noise.a_tesla2);
  kvd("bath.b", cfg.noise.b);
  kv("bath.spin_lattice", cfg.spin_lattice ? "true" : "false");
  kv("bath.magnetic_noise", cfg.magnetic_noise ? "true" : "false");
  kvd("bath.ou_variance", cfg.ou.variance(0, 0));
  kvd("bath.ou_corr_time", cfg.ou.corr_time_sec);
  kvd("bath.ou_dt", cfg.ou.dt_sec);
  kvd("bath.ou_duration", cfg.ou.duration_sec);
  kv("bath.ou_seed", std::to_string(cfg.ou.seed));
  kvd("acf.window", cfg.acf_window_sec);
  kvd("acf.overlap", cfg.acf_overlap);
  kv("acf.taper", cfg.taper.kind == Taper::Kind::none ? "none" : "exponential");
  kvd("acf.taper_rate", cfg.taper.rate_per_sec);
  kv("acf.alpha_component",
     kGComponentNames[static_cast<std::size_t>(cfg.alpha_component)]);
  kvd("acf.alpha_omega_max", cfg.alpha_omega_max_rad_per_sec);
  kvd("sweep.b_min", cfg.b_min_tesla);
  kvd("sweep.b_max", cfg.b_max_tesla);
  kv("sweep.b_points", std::to_string(cfg.b_points));
  for (int i = 0; i < 3; ++i) {
    out << "sweep.direction_" << i << "=" << format_double(cfg.direction(i)) << "\n";
  }
  kvd("sweep.temperature", cfg.temperature_k);
  kvd("sweep.fit_min", cfg.fit_range_tesla.first);
  kvd("sweep.fit_max", cfg.fit_range_tesla.second);
  for (const auto& name : cfg.models) kv("sweep.model", name);
  kv("sweep.hyperfine_variant", cfg.hyperfine_variant ? "true" : "false");
  // Output routing (directory, plots flag) is deliberately not serialized:
  // it cannot change a computed number, and the hash should identify runs
  // that produce the same data.
  return out.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  const std::uint64_t h = fnv1a(serialize_config(cfg));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spinbath
