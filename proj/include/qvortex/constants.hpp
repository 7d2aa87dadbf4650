#pragma once

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "qvortex/errors.hpp"

namespace qvortex {

/// SI constants. Defaults are CODATA 2018.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;          // [J s], exact
  double electron_mass = 9.1093837015e-31;  // [kg]
  double light_speed = 299792458.0;       // [m/s], exact
  double bohr_radius = 5.29177210903e-11;   // [m]
  double electron_volt = 1.602176634e-19;   // [J], exact
  double proton_mass = 1.67262192369e-27;   // [kg]
  std::map<std::string, std::string> sources = {
      {"hbar", "CODATA 2018 (exact)"},
      {"electron_mass", "CODATA 2018"},
      {"light_speed", "SI definition (exact)"},
      {"bohr_radius", "CODATA 2018"},
      {"electron_volt", "SI definition (exact)"},
      {"proton_mass", "CODATA 2018"}};

  double compton_wavelength() const {
    return 2.0 * 3.14159265358979323846 * hbar / (electron_mass * light_speed);
  }

  void validate() const {
    for (double v : {hbar, electron_mass, light_speed, bohr_radius,
                     electron_volt, proton_mass})
      if (!(v > 0.0)) throw ConfigError("physical constants must be > 0");
  }
};

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

/// Parses a constants file:
///
///   # comment
///   hbar = 1.054571817e-34   # source: CODATA 2018 (exact)
///
/// Keys: hbar, electron_mass, light_speed, bohr_radius, electron_volt,
/// proton_mass. Unlisted keys keep their defaults; unknown keys are errors.
inline PhysicalConstants parse_constants(std::istream& in,
                                         const std::string& origin = "<constants>") {
  PhysicalConstants c;
  const std::map<std::string, double*> slots = {
      {"hbar", &c.hbar},
      {"electron_mass", &c.electron_mass},
      {"light_speed", &c.light_speed},
      {"bohr_radius", &c.bohr_radius},
      {"electron_volt", &c.electron_volt},
      {"proton_mass", &c.proton_mass}};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string source;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      const std::string comment = detail::trim(line.substr(hash + 1));
      if (comment.rfind("source:", 0) == 0) source = detail::trim(comment.substr(7));
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string text = detail::trim(line.substr(eq + 1));
    const auto slot = slots.find(key);
    if (slot == slots.end())
      throw ConfigError(where + ": unknown constant '" + key + "'");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno != 0)
      throw ConfigError(where + ": '" + key + "' is not a decimal number: " + text);
    *slot->second = v;
    c.sources[key] = source.empty() ? origin : source;
  }
  c.validate();
  return c;
}

inline PhysicalConstants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open constants file " + path);
  return parse_constants(in, path);
}

}  // namespace qvortex
