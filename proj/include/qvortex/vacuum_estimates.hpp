#pragma once

// Physical-scale estimates: Nelson diffusion coefficient, Zitterbewegung
// scales, electron-positron pair orbit, roton dispersion and the
// rotating-disk vortex bundle.

#include <cmath>
#include <string>
#include <vector>

#include "qvortex/constants.hpp"
#include "qvortex/errors.hpp"
#include "qvortex/numerics.hpp"
#include "qvortex/vortex_dynamics.hpp"

namespace qvortex::estimates {

using numerics::pi;

/// Formula applied outside its stated validity regime.
class RegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A value with its SI unit string.
struct Quantity {
  std::string name;
  double value = 0.0;
  std::string unit;
};

/// nu_bar = hbar / 2m.
inline double nelson_diffusion(double mass, const PhysicalConstants& c = {}) {
  if (!(mass > 0.0)) throw InvalidParams("nelson_diffusion: mass must be > 0");
  return c.hbar / (2.0 * mass);
}

struct ZitterbewegungScales {
  double frequency = 0.0;            // Omega = 2 m c^2 / hbar [rad/s]
  double length = 0.0;               // sqrt(nu_bar / Omega) [m]
  double length_hbar_over_m = 0.0;   // sqrt((hbar/m) / Omega) [m]
  double compton_ratio = 0.0;        // lambda_C / length
};

/// The length scale uses nu_bar = hbar/2m as the viscosity; the hbar/m
/// variant is reported alongside.
inline ZitterbewegungScales zitterbewegung_scales(double mass,
                                                  const PhysicalConstants& c = {}) {
  if (!(mass > 0.0)) throw InvalidParams("zitterbewegung_scales: mass must be > 0");
  ZitterbewegungScales z;
  z.frequency = 2.0 * mass * c.light_speed * c.light_speed / c.hbar;
  z.length = std::sqrt(nelson_diffusion(mass, c) / z.frequency);
  z.length_hbar_over_m = std::sqrt((c.hbar / mass) / z.frequency);
  const double compton = 2.0 * pi * c.hbar / (mass * c.light_speed);
  z.compton_ratio = compton / z.length;
  return z;
}

/// Oscillating-vortex parameters at electron scale: nu = nu_bar,
/// Omega = 2 m c^2 / hbar, offset n.
inline vortex::OscViscosityParams electron_vortex(double n, const PhysicalConstants& c = {}) {
  vortex::OscViscosityParams p;
  p.gamma = 1.0;
  p.nu = nelson_diffusion(c.electron_mass, c);
  p.omega = zitterbewegung_scales(c.electron_mass, c).frequency;
  p.phi = 0.0;
  p.n = n;
  return p;
}

struct PairOrbit {
  double orbit_speed = 0.0;     // v_R = hbar / (r1 m_e) [m/s]
  double pair_energy_ev = 0.0;  // 2 x 13.6 eV
  double pair_mass = 0.0;       // m_p = 2 m_e [kg]
};

inline PairOrbit pair_orbit_quantities(const PhysicalConstants& c = {}) {
  return {c.hbar / (c.bohr_radius * c.electron_mass), 2.0 * 13.6, 2.0 * c.electron_mass};
}

// ---------------------------------------------------------------------------
// Roton dispersion

struct DispersionParams {
  double pair_mass = 0.0;          // m_p [kg]
  double rotation_momentum = 0.0;  // p_R [kg m/s]
  double form_factor_sigma = 0.0;  // sigma_f [kg m/s]

  void validate() const {
    if (!(pair_mass > 0.0)) throw InvalidParams("dispersion: m_p must be > 0");
    if (!(rotation_momentum > 0.0)) throw InvalidParams("dispersion: p_R must be > 0");
    if (!(form_factor_sigma > 0.0) || form_factor_sigma > rotation_momentum)
      throw InvalidParams("dispersion: need 0 < sigma_f <= p_R");
  }
};

/// m_p = 2 m_e, p_R / hbar = 1.89e10 1/m, sigma_f = 0.5 p_R.
inline DispersionParams roton_defaults(const PhysicalConstants& c = {}) {
  const double p_r = c.hbar * 1.89e10;
  return {2.0 * c.electron_mass, p_r, 0.5 * p_r};
}

inline double form_factor(double p, const DispersionParams& s) {
  const double x = p - s.rotation_momentum;
  return std::exp(-x * x / (2.0 * s.form_factor_sigma * s.form_factor_sigma));
}

/// eps(p) = (p + p_R f(p - p_R))^2 / (2 m_p).
inline double dispersion(double p, const DispersionParams& s) {
  if (p < 0.0) throw DomainError("dispersion: p must be >= 0");
  const double q = p + s.rotation_momentum * form_factor(p, s);
  return q * q / (2.0 * s.pair_mass);
}

inline double free_dispersion(double p, const DispersionParams& s) {
  return p * p / (2.0 * s.pair_mass);
}

struct Extremum {
  double p = 0.0;
  bool is_max = false;
};

/// Extrema of eps on [lo, hi] from sign changes of its forward difference on
/// `samples` uniform points.
inline std::vector<Extremum> dispersion_extrema(const DispersionParams& s, double lo,
                                                double hi, std::size_t samples = 4001) {
  const auto p = numerics::linspace(lo, hi, samples);
  std::vector<double> slope(samples - 1);
  for (std::size_t i = 0; i + 1 < samples; ++i)
    slope[i] = dispersion(p[i + 1], s) - dispersion(p[i], s);
  std::vector<Extremum> out;
  for (std::size_t i = 1; i < slope.size(); ++i) {
    if (slope[i - 1] > 0 && slope[i] <= 0) out.push_back({p[i], true});
    if (slope[i - 1] < 0 && slope[i] >= 0) out.push_back({p[i], false});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rotating-disk vortex bundle

struct DiskExperiment {
  double disk_radius = 0.0;   // R [m]
  double angular_rate = 0.0;  // Omega_disk [1/s]
  double orbit_radius = 0.0;  // r1 [m]
  double orbit_speed = 0.0;   // v_R [m/s]

  double disk_speed() const { return disk_radius * angular_rate; }

  void validate() const {
    if (!(disk_radius > 0.0) || !(angular_rate > 0.0) || !(orbit_radius > 0.0) ||
        !(orbit_speed > 0.0))
      throw InvalidParams("disk experiment: all inputs must be > 0");
  }
};

/// R = 82.5 mm, Omega = 160 1/s, r1 = Bohr radius, v_R = hbar/(r1 m_e).
inline DiskExperiment disk_defaults(const PhysicalConstants& c = {}) {
  return {82.5e-3, 160.0, c.bohr_radius, pair_orbit_quantities(c).orbit_speed};
}

struct VortexCount {
  double n_max = 0.0;
  double n_mean_ratio = 0.0;  // N_max sqrt(V_D v_R) / (v_R + V_D)
  double n_sqrt_ratio = 0.0;  // N_max sqrt(V_D / v_R)
  double form_ratio = 0.0;    // n_sqrt_ratio / n_mean_ratio = 1 + V_D / v_R
};

inline VortexCount vortex_count(const DiskExperiment& e) {
  e.validate();
  const double vd = e.disk_speed();
  const double vr = e.orbit_speed;
  if (vd >= vr) throw RegimeError("vortex_count: needs disk speed V_D < v_R");
  VortexCount n;
  n.n_max = (e.disk_radius * e.disk_radius) / (e.orbit_radius * e.orbit_radius);
  n.n_mean_ratio = n.n_max * std::sqrt(vd * vr) / (vr + vd);
  n.n_sqrt_ratio = n.n_max * std::sqrt(vd / vr);
  n.form_ratio = n.n_sqrt_ratio / n.n_mean_ratio;
  return n;
}

/// E = N m_p v_R^2 / 2.
inline double bundle_kinetic_energy(double n, double pair_mass, double orbit_speed) {
  if (n < 0.0 || !(pair_mass > 0.0) || !(orbit_speed > 0.0))
    throw InvalidParams("bundle_kinetic_energy: inputs must be positive");
  return n * pair_mass * orbit_speed * orbit_speed / 2.0;
}

/// Every estimate with its unit, in a stable order.
inline std::vector<Quantity> estimates_report(const PhysicalConstants& c,
                                              const DiskExperiment& disk,
                                              double core_offset_n = 31.0) {
  const double me = c.electron_mass;
  const auto zb = zitterbewegung_scales(me, c);
  const auto pair = pair_orbit_quantities(c);
  const auto count = vortex_count(disk);
  const auto electron = electron_vortex(core_offset_n, c);
  return {
      {"nelson_diffusion_electron", nelson_diffusion(me, c), "m^2/s"},
      {"nelson_diffusion_proton", nelson_diffusion(c.proton_mass, c), "m^2/s"},
      {"zitterbewegung_omega", zb.frequency, "rad/s"},
      {"zitterbewegung_length", zb.length, "m"},
      {"zitterbewegung_length_hbar_over_m", zb.length_hbar_over_m, "m"},
      {"compton_wavelength", c.compton_wavelength(), "m"},
      {"compton_ratio", zb.compton_ratio, "1"},
      {"electron_core_radius", vortex::core_radius(0.0, electron), "m"},
      {"electron_core_offset_n", core_offset_n, "1"},
      {"orbit_speed", pair.orbit_speed, "m/s"},
      {"pair_energy", pair.pair_energy_ev, "eV"},
      {"pair_mass", pair.pair_mass, "kg"},
      {"disk_speed", disk.disk_speed(), "m/s"},
      {"vortex_count_max", count.n_max, "1"},
      {"vortex_count", count.n_mean_ratio, "1"},
      {"vortex_count_sqrt_form", count.n_sqrt_ratio, "1"},
      {"vortex_count_form_ratio", count.form_ratio, "1"},
      {"bundle_energy_J", bundle_kinetic_energy(count.n_mean_ratio, pair.pair_mass,
                                              disk.orbit_speed),
       "J"},
      {"bundle_energy_J_sqrt_form", bundle_kinetic_energy(count.n_sqrt_ratio, pair.pair_mass,
                                                        disk.orbit_speed),
       "J"},
  };
}

}  // namespace qvortex::estimates
