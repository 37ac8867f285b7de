#include "spinbath/units.hpp"

#include <numbers>
#include <stdexcept>

#include "spinbath/constants.hpp"

namespace spinbath {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double h_planck = two_pi * PhysConstants::hbar;
}  // namespace

Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::joule:
    case Unit::rad_per_sec:
    case Unit::hertz:
    case Unit::megahertz:
    case Unit::gigahertz:
    case Unit::wavenumber_cm:
      return Dimension::energy;
    case Unit::kelvin:
      return Dimension::temperature;
    case Unit::tesla:
    case Unit::millitesla:
    case Unit::microtesla:
      return Dimension::field;
    case Unit::tesla_squared:
      return Dimension::field_squared;
    case Unit::second:
    case Unit::millisecond:
    case Unit::microsecond:
    case Unit::nanosecond:
    case Unit::picosecond:
    case Unit::femtosecond:
      return Dimension::time;
    case Unit::dimensionless:
      return Dimension::none;
  }
  throw std::invalid_argument("unknown unit tag");
}

double to_canonical_factor(Unit u) {
  switch (u) {
    case Unit::joule:
      return 1.0;
    case Unit::rad_per_sec:
      return PhysConstants::hbar;  // E = hbar * omega
    case Unit::hertz:
      return h_planck;  // E = h * nu
    case Unit::megahertz:
      return h_planck * 1e6;
    case Unit::gigahertz:
      return h_planck * 1e9;
    case Unit::wavenumber_cm:
      return h_planck * PhysConstants::c_light * 100.0;  // E = h c nu~
    case Unit::kelvin:
      return 1.0;
    case Unit::tesla:
      return 1.0;
    case Unit::millitesla:
      return 1e-3;
    case Unit::microtesla:
      return 1e-6;
    case Unit::tesla_squared:
      return 1.0;
    case Unit::second:
      return 1.0;
    case Unit::millisecond:
      return 1e-3;
    case Unit::microsecond:
      return 1e-6;
    case Unit::nanosecond:
      return 1e-9;
    case Unit::picosecond:
      return 1e-12;
    case Unit::femtosecond:
      return 1e-15;
    case Unit::dimensionless:
      return 1.0;
  }
  throw std::invalid_argument("unknown unit tag");
}

double convert(double value, Unit from, Unit to) {
  if (dimension_of(from) != dimension_of(to)) {
    throw std::invalid_argument("convert: incompatible dimensions (" +
                                unit_name(from) + " -> " + unit_name(to) + ")");
  }
  return value * to_canonical_factor(from) / to_canonical_factor(to);
}

Unit parse_unit(const std::string& name) {
  if (name == "J") return Unit::joule;
  if (name == "rad/s") return Unit::rad_per_sec;
  if (name == "Hz") return Unit::hertz;
  if (name == "MHz") return Unit::megahertz;
  if (name == "GHz") return Unit::gigahertz;
  if (name == "cm-1" || name == "cm^-1") return Unit::wavenumber_cm;
  if (name == "K") return Unit::kelvin;
  if (name == "T") return Unit::tesla;
  if (name == "mT") return Unit::millitesla;
  if (name == "uT") return Unit::microtesla;
  if (name == "T2" || name == "T^2") return Unit::tesla_squared;
  if (name == "s") return Unit::second;
  if (name == "ms") return Unit::millisecond;
  if (name == "us") return Unit::microsecond;
  if (name == "ns") return Unit::nanosecond;
  if (name == "ps") return Unit::picosecond;
  if (name == "fs") return Unit::femtosecond;
  if (name.empty() || name == "1") return Unit::dimensionless;
  throw std::invalid_argument("unknown unit name '" + name + "'");
}

std::string unit_name(Unit u) {
  switch (u) {
    case Unit::joule: return "J";
    case Unit::rad_per_sec: return "rad/s";
    case Unit::hertz: return "Hz";
    case Unit::megahertz: return "MHz";
    case Unit::gigahertz: return "GHz";
    case Unit::wavenumber_cm: return "cm-1";
    case Unit::kelvin: return "K";
    case Unit::tesla: return "T";
    case Unit::millitesla: return "mT";
    case Unit::microtesla: return "uT";
    case Unit::tesla_squared: return "T2";
    case Unit::second: return "s";
    case Unit::millisecond: return "ms";
    case Unit::microsecond: return "us";
    case Unit::nanosecond: return "ns";
    case Unit::picosecond: return "ps";
    case Unit::femtosecond: return "fs";
    case Unit::dimensionless: return "";
  }
  return "?";
}

}  // namespace spinbath
