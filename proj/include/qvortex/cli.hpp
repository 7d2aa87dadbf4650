#pragma once

// Command-line front end. `run` is the whole program and can be called
// in-process; the qvortex executable is a thin wrapper around it.

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qvortex/checks.hpp"
#include "qvortex/constants.hpp"
#include "qvortex/errors.hpp"
#include "qvortex/io.hpp"
#include "qvortex/vacuum_estimates.hpp"
#include "qvortex/vortex_dynamics.hpp"
#include "qvortex/vortex_geometry.hpp"
#include "qvortex/wave_interference.hpp"

namespace qvortex::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_check = 2, exit_numerical = 3 };

struct ParamDef {
  std::string key;
  double value;
  std::string help;
  bool integer = false;
};

struct Grid {
  std::size_t nz = 0;  // transverse count (z, or r)
  std::size_t ny = 0;  // longitudinal count (y, or t)
};

struct RunConfig {
  std::string subcommand;
  std::map<std::string, double> params;
  std::filesystem::path out_dir = "qvortex_out";
  std::vector<std::string> formats;
  std::uint64_t seed = 1;
  std::optional<Grid> grid;
  bool strict = false;
  bool general = false;
  std::string constants_path;

  double get(const std::string& key) const { return params.at(key); }
  std::size_t count(const std::string& key) const {
    return static_cast<std::size_t>(params.at(key));
  }
  bool wants(const std::string& fmt) const {
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
  }
};

using io::CsvTable;
using io::OutputSet;
using Runner = std::function<int(const RunConfig&, OutputSet&, std::ostream&)>;

struct Subcommand {
  std::string name;
  std::string description;
  std::vector<ParamDef> params;
  std::vector<std::string> formats;          // accepted
  std::vector<std::string> default_formats;
  bool uses_grid = false;
  Grid default_grid;
  Runner run;
};

// ---------------------------------------------------------------------------
// Parsing helpers

inline Grid parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError("grid must look like AxB, got '" + text + "'");
    const auto v = std::stoull(s);
    if (v < 2 || v > 100000) throw ConfigError("grid sizes must be in [2, 100000]");
    return static_cast<std::size_t>(v);
  };
  if (x == std::string::npos) throw ConfigError("grid must look like AxB, got '" + text + "'");
  return {number(text.substr(0, x)), number(text.substr(x + 1))};
}

inline double parse_number(const std::string& text, const std::string& where) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno != 0 || !std::isfinite(v))
    throw ConfigError(where + ": not a finite decimal number: '" + text + "'");
  return v;
}

inline std::vector<std::string> split_formats(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string f;
    while (std::getline(ss, f, ','))
      if (!f.empty() && std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

inline bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(where + ": expected a boolean, got '" + text + "'");
}

/// key = value lines, '#' comments. Keys use '-' or '_' interchangeably.
inline void apply_config_file(const std::string& path, const Subcommand& sub, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = qvortex::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = qvortex::detail::trim(line.substr(0, eq));
    const std::string value = qvortex::detail::trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (cfg.params.count(key)) {
      cfg.params[key] = parse_number(value, where + ": " + key);
    } else if (key == "seed") {
      if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(where + ": seed must be an unsigned integer");
      cfg.seed = std::stoull(value);
    } else if (key == "grid" && sub.uses_grid) {
      cfg.grid = parse_grid(value);
    } else if (key == "format") {
      cfg.formats = split_formats({value});
    } else if (key == "strict") {
      cfg.strict = parse_bool(value, where);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "general" && sub.name == "vortex-profile") {
      cfg.general = parse_bool(value, where);
    } else if (key == "constants" && sub.name == "estimates") {
      cfg.constants_path = value;
    } else {
      throw ConfigError(where + ": unknown key '" + key + "' for " + sub.name);
    }
  }
}

inline void validate_config(const Subcommand& sub, RunConfig& cfg) {
  for (const auto& d : sub.params) {
    const double v = cfg.params.at(d.key);
    if (d.integer && (v < 0 || v != std::floor(v) || v > 1e9))
      throw ConfigError("--" + d.key + " must be a non-negative integer");
  }
  if (cfg.formats.empty()) cfg.formats = sub.default_formats;
  for (const auto& f : cfg.formats)
    if (std::find(sub.formats.begin(), sub.formats.end(), f) == sub.formats.end())
      throw ConfigError("format '" + f + "' is not produced by " + sub.name);
  if (!cfg.grid && sub.uses_grid) cfg.grid = sub.default_grid;
}

inline void record_config(const RunConfig& cfg, OutputSet& out) {
  for (const auto& [k, v] : cfg.params) out.set("param." + k, v);
  out.set("param.seed", cfg.seed);
  if (cfg.grid) out.set("param.grid", std::to_string(cfg.grid->nz) + "x" + std::to_string(cfg.grid->ny));
  std::string fmts;
  for (const auto& f : cfg.formats) fmts += (fmts.empty() ? "" : ",") + f;
  out.set("param.format", fmts);
  out.set("param.strict", cfg.strict);
}

// ---------------------------------------------------------------------------
// Subcommands

inline void emit_table(const RunConfig& cfg, OutputSet& out, const std::string& stem,
                       const CsvTable& table) {
  if (cfg.wants("csv")) out.add(stem + ".csv", table.render());
  if (cfg.wants("json")) out.add(stem + ".json", table.to_json().dump() + "\n");
}

inline vortex::OscViscosityParams vortex_params(const RunConfig& cfg) {
  vortex::OscViscosityParams p;
  p.gamma = cfg.get("gamma");
  p.nu = cfg.get("nu");
  p.omega = cfg.get("omega");
  p.phi = cfg.get("phi");
  p.n = cfg.get("n");
  return p;
}

inline std::vector<ParamDef> vortex_defs() {
  return {{"gamma", 1.0, "circulation"},
          {"nu", 1.0, "viscosity amplitude"},
          {"omega", numerics::pi, "viscosity angular frequency"},
          {"phi", 0.0, "viscosity phase"},
          {"n", 16.0, "viscosity offset"},
          {"sigma", 0.0, "initial spread for the memory solution; 0 selects (nu/omega)(n + sin phi)"},
          {"r-max", 20.0, "largest radius"},
          {"t-max", 4.0, "last time"}};
}

/// omega_z and v_theta on the (r, t) grid for a spread tau(t) per row.
inline int write_profile(const RunConfig& cfg, OutputSet& out, const std::string& stem,
                         double gamma, const std::vector<double>& t,
                         const std::vector<double>& tau) {
  const auto r = numerics::linspace(0.0, cfg.get("r-max"), cfg.grid->nz);
  CsvTable table{{"t", "r", "omega_z", "v_theta"}, {}};
  std::vector<double> image;
  for (std::size_t j = 0; j < t.size(); ++j) {
    for (double ri : r) {
      const double w = vortex::vorticity_from_spread(ri, tau[j], gamma);
      table.add({t[j], ri, w, vortex::velocity_from_spread(ri, tau[j], gamma)});
      image.push_back(w);
    }
  }
  emit_table(cfg, out, stem, table);
  if (cfg.wants("ppm")) out.add(stem + ".ppm", io::render_ppm(image, r.size(), t.size()));
  return exit_ok;
}

inline vortex::MemoryViscosityParams memory_params(const RunConfig& cfg, bool with_noise) {
  const auto p = vortex_params(cfg);
  auto m = vortex::matched_memory_params(p);
  if (cfg.get("sigma") > 0.0) m.sigma = cfg.get("sigma");
  if (with_noise && cfg.get("noise-amplitude") != 0.0) {
    vortex::ColorNoiseParams np;
    np.amplitude = cfg.get("noise-amplitude");
    np.mean = cfg.get("noise-mean");
    np.modes = cfg.count("noise-modes");
    np.band_lo = cfg.get("noise-band-lo");
    np.band_hi = cfg.get("noise-band-hi");
    np.seed = cfg.seed;
    const auto noise = vortex::color_noise_kernel(np);
    const auto base = m.kernel;
    m.kernel = vortex::ViscosityKernel("cosine+color_noise",
                                       [base, noise](double s) { return base(s) + noise(s); });
  }
  return m;
}

inline int run_memory_profile(const RunConfig& cfg, OutputSet& out, const std::string& stem,
                              bool with_noise) {
  const auto m = memory_params(cfg, with_noise);
  const auto t = numerics::linspace(0.0, cfg.get("t-max"), cfg.grid->ny);
  const auto tau = vortex::memory_tau_series(t, m);
  out.set("kernel", m.kernel.name());
  out.set("sigma_used", m.sigma);
  const double r_probe = std::sqrt(4.0 * numerics::pi * tau[0]);
  auto w = [&](double r, double) { return vortex::vorticity_from_spread(r, tau[0], m.gamma); };
  out.set("oracle.velocity_quadrature_ratio",
          vortex::velocity_from_vorticity(w, r_probe, 0.0) /
              vortex::velocity_from_spread(r_probe, tau[0], m.gamma));
  return write_profile(cfg, out, stem, m.gamma, t, tau);
}

inline int run_vortex_profile(const RunConfig& cfg, OutputSet& out, std::ostream&) {
  if (cfg.general) return run_memory_profile(cfg, out, "vortex_profile", false);
  const auto p = vortex_params(cfg);
  p.validate();
  const auto t = numerics::linspace(0.0, cfg.get("t-max"), cfg.grid->ny);
  std::vector<double> tau;
  for (double ti : t) tau.push_back(vortex::spread_osc(ti, p) / (4.0 * numerics::pi));
  const double r_core = vortex::core_radius_extremum(0.0, p);
  auto w = [&](double r, double tt) { return vortex::vorticity_osc(r, tt, p); };
  out.set("oracle.velocity_quadrature_ratio",
          vortex::velocity_from_vorticity(w, r_core, 0.0) / vortex::velocity_osc(r_core, 0.0, p));
  out.set("core_radius_closed_form", vortex::core_radius(0.0, p));
  out.set("core_radius_argmax", r_core);
  out.set("oracle.core_radius_ratio", r_core / vortex::core_radius(0.0, p));
  return write_profile(cfg, out, "vortex_profile", p.gamma, t, tau);
}

inline int run_vortex_general(const RunConfig& cfg, OutputSet& out, std::ostream&) {
  return run_memory_profile(cfg, out, "vortex_general", true);
}

inline std::vector<ParamDef> helix_defs(double r0, double r1, double w2) {
  return {{"r0", r0, "poloidal radius"},
          {"r1", r1, "torus radius"},
          {"omega1", 1.0, "toroidal angular frequency"},
          {"omega2", w2, "poloidal angular frequency"},
          {"phi1", 0.0, "toroidal phase"},
          {"phi2", 0.0, "poloidal phase"},
          {"samples", 2001, "samples per ring", true},
          {"t-max", 0.0, "time span; 0 selects the closure period"}};
}

inline int run_helix(const RunConfig& cfg, OutputSet& out, std::ostream& log,
                     const std::string& stem, std::size_t n1, std::size_t n2) {
  const geometry::HelixParams base(cfg.get("r0"), cfg.get("r1"), cfg.get("omega1"),
                                   cfg.get("omega2"), cfg.get("phi1"), cfg.get("phi2"));
  const std::size_t samples = cfg.count("samples");
  if (samples < 2) throw ConfigError("--samples must be >= 2");
  if (n1 == 0 || n2 == 0) throw ConfigError("phase counts must be >= 1");
  double t_end = cfg.get("t-max");
  if (t_end < 0.0) throw ConfigError("--t-max must be >= 0");
  if (t_end == 0.0) {
    const auto period = geometry::closure_period(base);
    if (period) {
      t_end = *period;
      out.set("closure_period", *period);
    } else if (base.omega1() != 0.0) {
      t_end = 2.0 * numerics::pi / std::abs(base.omega1());
      log << "warning: frequencies are not commensurate; using one toroidal period\n";
      out.set("warning", "no-closure");
    } else {
      throw ConfigError("--t-max is required when omega1 = 0 and the path does not close");
    }
  }
  const auto t = numerics::linspace(0.0, t_end, samples);
  CsvTable table{{"t", "x", "y", "z", "vx", "vy", "vz"}, {}};
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const auto ring = base.with_phases(
          base.phi1() + 2.0 * numerics::pi * static_cast<double>(i) / static_cast<double>(n1),
          base.phi2() + 2.0 * numerics::pi * static_cast<double>(j) / static_cast<double>(n2));
      for (double ti : t) {
        const auto pt = geometry::ring_point(ti, ring);
        table.add({ti, pt.position[0], pt.position[1], pt.position[2], pt.velocity[0],
                   pt.velocity[1], pt.velocity[2]});
      }
    }
  }
  if (base.r1() / base.r0() <= geometry::ball_ratio_limit) {
    const auto s = geometry::opposite_velocity_sum(base);
    out.set("opposite_velocity_sum_x", s[0]);
    out.set("opposite_velocity_sum_y", s[1]);
    out.set("opposite_velocity_sum_z", s[2]);
  }
  emit_table(cfg, out, stem, table);
  return exit_ok;
}

inline int run_ring(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
  return run_helix(cfg, out, log, "ring", 1, 1);
}

inline int run_ball(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
  return run_helix(cfg, out, log, "ball", cfg.count("n-phi1"), cfg.count("n-phi2"));
}

inline std::vector<ParamDef> grating_defs(double trajectories) {
  return {{"n-slits", 9, "number of slits", true},
          {"wavelength", 5e-12, "de Broglie wavelength [m]"},
          {"slit-width", 25e-9, "Gaussian slit width b [m]"},
          {"pitch", 250e-9, "slit separation d [m]"},
          {"y-max", 6.0, "distance from the grating in Talbot lengths"},
          {"z-half", 6.0, "half-width of the z window in pitches"},
          {"trajectories", trajectories, "number of Bohmian trajectories", true}};
}

inline wave::GratingParams grating(const RunConfig& cfg) {
  wave::GratingParams g{static_cast<int>(cfg.get("n-slits")), cfg.get("slit-width"),
                      cfg.get("pitch"), cfg.get("wavelength")};
  g.validate();
  return g;
}

inline std::vector<double> y_rows(const RunConfig& cfg, const wave::GratingParams& g) {
  const double y_max = cfg.get("y-max") * wave::talbot_length(g);
  if (!(y_max > 0.0)) throw ConfigError("--y-max must be > 0");
  std::vector<double> y(cfg.grid->ny);
  for (std::size_t j = 0; j < y.size(); ++j)
    y[j] = y_max * static_cast<double>(j + 1) / static_cast<double>(y.size());
  return y;
}

/// Long-format bundle: one row per (y sample, trajectory) reached.
inline void add_trajectories(const RunConfig& cfg, OutputSet& out, const wave::GratingParams& g,
                             const std::vector<double>& rows) {
  const std::size_t count = cfg.count("trajectories");
  std::vector<double> y = {0.0};
  y.insert(y.end(), rows.begin(), rows.end());
  const auto starts = wave::seed_positions(count, g);
  const auto bundle = wave::trajectory_bundle(starts, y, g);
  CsvTable table{{"y", "index", "z"}, {}};
  std::size_t complete = 0;
  for (const auto& tr : bundle)
    if (tr.status == wave::TrajectoryStatus::complete) ++complete;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t k = 0; k < bundle.size(); ++k)
      if (i < bundle[k].z.size()) table.add({y[i], static_cast<double>(k), bundle[k].z[i]});
  out.set("trajectories", count);
  out.set("trajectories_complete", complete);
  out.set("no_crossings", wave::no_crossings(bundle));
  emit_table(cfg, out, "trajectories", table);
}

inline int run_interference(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
  const auto g = grating(cfg);
  const double half = cfg.get("z-half") * g.pitch;
  if (!(half > 0.0)) throw ConfigError("--z-half must be > 0");
  wave::DensityGrid grid{cfg.grid->nz, cfg.grid->ny, -half, half,
                         cfg.get("y-max") * wave::talbot_length(g)};
  const auto map = wave::density_map(grid, g);
  for (const auto& w : map.warnings) {
    if (cfg.strict) throw ConfigError(w + " (--strict)");
    log << "warning: " << w << "\n";
  }
  out.set("talbot_length_m", wave::talbot_length(g));
  out.set("warnings", map.warnings);
  CsvTable table{{"y", "z", "density"}, {}};
  for (std::size_t j = 0; j < map.field.ny(); ++j)
    for (std::size_t i = 0; i < map.field.nz(); ++i)
      table.add({map.field.y_axis[j], map.field.z_axis[i], map.density[j * map.field.nz() + i]});
  emit_table(cfg, out, "interference_density", table);
  if (cfg.wants("ppm"))
    out.add("interference_density.ppm",
            io::render_ppm(map.density, map.field.nz(), map.field.ny()));
  if (cfg.count("trajectories") > 0) add_trajectories(cfg, out, g, map.field.y_axis);
  return exit_ok;
}

inline int run_trajectories(const RunConfig& cfg, OutputSet& out, std::ostream&) {
  const auto g = grating(cfg);
  out.set("talbot_length_m", wave::talbot_length(g));
  add_trajectories(cfg, out, g, y_rows(cfg, g));
  return exit_ok;
}

inline int run_dispersion(const RunConfig& cfg, OutputSet& out, std::ostream&) {
  const PhysicalConstants c;
  estimates::DispersionParams s;
  s.pair_mass = cfg.get("mass-ratio") * c.electron_mass;
  s.rotation_momentum = c.hbar * cfg.get("rotation-wavenumber");
  s.form_factor_sigma = cfg.get("sigma-ratio") * s.rotation_momentum;
  s.validate();
  const std::size_t n = cfg.count("samples");
  if (n < 4) throw ConfigError("--samples must be >= 4");
  const double p_max = cfg.get("p-max") * s.rotation_momentum;
  if (!(p_max > 0.0)) throw ConfigError("--p-max must be > 0");
  CsvTable table{{"p", "epsilon", "free", "ratio"}, {}};
  for (std::size_t k = 1; k <= n; ++k) {
    const double p = p_max * static_cast<double>(k) / static_cast<double>(n);
    const double e = estimates::dispersion(p, s), f = estimates::free_dispersion(p, s);
    table.add({p, e, f, e / f});
  }
  const auto ext = estimates::dispersion_extrema(s, 0.0, p_max);
  for (const auto& x : ext) out.set(x.is_max ? "roton_max_p" : "roton_min_p", x.p);
  out.set("epsilon_at_p_R", estimates::dispersion(s.rotation_momentum, s));
  out.set("last_ratio", table.rows.back()[3]);
  emit_table(cfg, out, "dispersion", table);
  return exit_ok;
}

inline int run_estimates(const RunConfig& cfg, OutputSet& out, std::ostream&) {
  const PhysicalConstants c =
      cfg.constants_path.empty() ? PhysicalConstants{} : load_constants(cfg.constants_path);
  auto disk = estimates::disk_defaults(c);
  disk.disk_radius = cfg.get("disk-radius");
  disk.angular_rate = cfg.get("disk-rate");
  const auto report = estimates::estimates_report(c, disk, cfg.get("core-n"));
  io::Json j = io::Json::object();
  for (const auto& q : report) j[q.name] = q.value;
  for (const auto& q : report) j["unit." + q.name] = q.unit;
  for (const auto& [k, v] : c.sources) j["source." + k] = v;
  out.add("estimates.json", j.dump(2) + "\n");
  return exit_ok;
}

inline int run_check(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
  const auto results = checks::run_all(cfg.seed);
  io::Json j = io::Json::object();
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.passed;
    j["check." + r.name + ".passed"] = r.passed;
    log << (r.passed ? "PASS " : "FAIL ") << r.name;
    for (const auto& [k, v] : r.measured) {
      j["check." + r.name + "." + k] = v;
      log << " " << k << "=" << io::format_double(v);
    }
    log << "\n";
  }
  j["checks_passed"] = passed;
  j["checks_total"] = results.size();
  out.set("checks_passed", passed);
  out.set("checks_total", results.size());
  out.add("check.json", j.dump(2) + "\n");
  return passed == results.size() ? exit_ok : exit_check;
}

inline std::vector<Subcommand> subcommands() {
  auto general_defs = vortex_defs();
  general_defs.push_back({"noise-amplitude", 0.0, "RMS of the color-noise viscosity"});
  general_defs.push_back({"noise-mean", 0.0, "mean of the color-noise viscosity"});
  general_defs.push_back({"noise-modes", 32, "color-noise modes", true});
  general_defs.push_back({"noise-band-lo", 0.5, "lowest noise angular frequency"});
  general_defs.push_back({"noise-band-hi", 5.0, "highest noise angular frequency"});
  auto ball_defs = helix_defs(4.0, 0.01, 3.0);
  ball_defs.push_back({"n-phi1", 1, "toroidal phases filling the ball", true});
  ball_defs.push_back({"n-phi2", 1, "poloidal phases filling the ball", true});
  const std::vector<std::string> tables = {"csv", "json"};
  const std::vector<std::string> images = {"csv", "json", "ppm"};
  return {
      {"vortex-profile", "oscillating-viscosity vortex on an (r, t) grid", vortex_defs(), images,
       {"csv"}, true, {101, 41}, run_vortex_profile},
      {"vortex-general", "memory-kernel vortex with optional color noise", general_defs, images,
       {"csv"}, true, {101, 41}, run_vortex_general},
      {"ring", "helicoidal vortex ring path", helix_defs(2.0, 3.0, 12.0), tables, {"csv"},
       false, {}, run_ring},
      {"ball", "vortex ball path or point cloud", ball_defs, tables, {"csv"}, false, {},
       run_ball},
      {"interference", "N-slit density map and optional trajectory bundle", grating_defs(0),
       images, {"csv", "ppm"}, true, {512, 400}, run_interference},
      {"trajectories", "Bohmian trajectory bundle", grating_defs(100), tables, {"csv"}, true,
       {512, 400}, run_trajectories},
      {"dispersion", "roton dispersion curve",
       {{"p-max", 4.0, "largest momentum in units of p_R"},
        {"samples", 2000, "number of momenta", true},
        {"rotation-wavenumber", 1.89e10, "p_R / hbar [1/m]"},
        {"sigma-ratio", 0.5, "form-factor width in units of p_R"},
        {"mass-ratio", 2.0, "pair mass in electron masses"}},
       tables, {"csv"}, false, {}, run_dispersion},
      {"estimates", "physical-scale estimates",
       {{"disk-radius", 82.5e-3, "disk radius [m]"},
        {"disk-rate", 160.0, "disk angular rate [1/s]"},
        {"core-n", 31.0, "viscosity offset for the electron core radius"}},
       {"json"}, {"json"}, false, {}, run_estimates},
      {"check", "oracle suite", {}, {"json"}, {"json"}, false, {}, run_check},
  };
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  const auto subs = subcommands();
  CLI::App app{"Long-lived vortex, vortex ring and N-slit interference toolkit", "qvortex"};
  app.require_subcommand(1, 1);
#ifdef QVORTEX_VERSION
  app.set_version_flag("--version", QVORTEX_VERSION);
#endif

  struct Bound {
    std::map<std::string, double> raw;
    std::map<std::string, CLI::Option*> opts;
    std::string out_dir, grid, config, constants;
    std::vector<std::string> formats;
    std::uint64_t seed = 1;
    bool strict = false, general = false;
    CLI::Option *o_out, *o_grid = nullptr, *o_seed, *o_format, *o_strict, *o_general = nullptr;
    CLI::Option* o_constants = nullptr;
  };
  std::map<std::string, Bound> bound;
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.description);
    apps[s.name] = sub;
    auto& b = bound[s.name];
    for (const auto& d : s.params) {
      b.raw[d.key] = d.value;
      b.opts[d.key] = sub->add_option("--" + d.key, b.raw[d.key], d.help)->default_val(d.value);
    }
    b.o_out = sub->add_option("--out", b.out_dir, "output directory (default qvortex_out)");
    b.o_format = sub->add_option("--format", b.formats, "output formats: csv, json, ppm")
                     ->delimiter(',');
    b.o_seed = sub->add_option("--seed", b.seed, "random seed");
    b.o_strict = sub->add_flag("--strict", b.strict, "treat warnings as errors");
    sub->add_option("--config", b.config, "key = value configuration file");
    if (s.uses_grid) {
      const bool radial = s.name.rfind("vortex", 0) == 0;
      b.o_grid = sub->add_option("--grid", b.grid, radial ? "grid size NRxNT" : "grid size NZxNY");
    }
    if (s.name == "vortex-profile")
      b.o_general = sub->add_flag("--general", b.general, "use the memory-kernel solution");
    if (s.name == "estimates")
      b.o_constants = sub->add_option("--constants", b.constants, "constants file");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& s : subs)
    if (apps[s.name]->parsed()) chosen = &s;
  if (!chosen) return exit_config;
  auto& b = bound[chosen->name];

  try {
    RunConfig cfg;
    cfg.subcommand = chosen->name;
    for (const auto& d : chosen->params) cfg.params[d.key] = d.value;
    if (!b.config.empty()) apply_config_file(b.config, *chosen, cfg);
    for (const auto& d : chosen->params)
      if (b.opts[d.key]->count() > 0) cfg.params[d.key] = b.raw[d.key];
    if (b.o_out->count() > 0) cfg.out_dir = b.out_dir;
    if (b.o_format->count() > 0) cfg.formats = split_formats(b.formats);
    if (b.o_seed->count() > 0) cfg.seed = b.seed;
    if (b.o_strict->count() > 0) cfg.strict = b.strict;
    if (b.o_grid && b.o_grid->count() > 0) cfg.grid = parse_grid(b.grid);
    if (b.o_general && b.o_general->count() > 0) cfg.general = b.general;
    if (b.o_constants && b.o_constants->count() > 0) cfg.constants_path = b.constants;
    validate_config(*chosen, cfg);

    OutputSet outputs(chosen->name);
    record_config(cfg, outputs);
    if (chosen->name == "vortex-profile") outputs.set("param.general", cfg.general);
    const int code = chosen->run(cfg, outputs, out);
    const auto written = outputs.write(cfg.out_dir);
    out << "wrote " << written.size() << " files to " << cfg.out_dir.string() << "\n";
    return code;
  } catch (const std::invalid_argument& e) {  // ConfigError, InvalidParams
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace qvortex::cli
