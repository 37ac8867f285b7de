// units.hpp - unit-tagged quantities and conversions to internal canonical units.
//
// Canonical internal units: energy in joules, time in seconds, field in tesla,
// temperature in kelvin. Energy, ordinary frequency and wavenumber interconvert
// through hbar and 2*pi*c; that whole family is treated as one dimension.
#pragma once

#include <string>

namespace spinbath {

enum class Unit {
  joule,
  rad_per_sec,
  hertz,
  megahertz,
  gigahertz,
  wavenumber_cm,  // cm^-1
  kelvin,
  tesla,
  millitesla,
  microtesla,
  tesla_squared,
  second,
  millisecond,
  microsecond,
  nanosecond,
  picosecond,
  femtosecond,
  dimensionless,
};

enum class Dimension { energy, temperature, field, field_squared, time, none };

Dimension dimension_of(Unit u);

// Multiply a value in unit u by this factor to land in the canonical unit of
// its dimension (J, K, T, T^2, s, or 1).
double to_canonical_factor(Unit u);

// Converts between units of the same dimension; throws std::invalid_argument
// on a dimension mismatch. Round trips are exact to 1e-12 relative.
double convert(double value, Unit from, Unit to);

// Parses unit names as they appear in config files ("cm-1", "MHz", "mT", ...).
// Throws std::invalid_argument for unknown names.
Unit parse_unit(const std::string& name);

std::string unit_name(Unit u);

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::dimensionless;

  double in(Unit target) const { return convert(value, unit, target); }
  double canonical() const { return value * to_canonical_factor(unit); }
};

}  // namespace spinbath
