#pragma once

// N-slit matter-wave field from the Gaussian-slit propagator solution,
// its density, polar form, Bohmian (paraxial) trajectories, and the
// quantum potential / osmotic velocity of a density slice.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qvortex/errors.hpp"
#include "qvortex/numerics.hpp"

namespace qvortex::wave {

using numerics::pi;
using cplx = std::complex<double>;

struct GratingParams {
  int n_slits = 9;
  double slit_width = 25e-9;  // b [m]
  double pitch = 250e-9;      // d [m]
  double wavelength = 5e-12;  // lambda [m]

  void validate() const {
    if (n_slits < 1) throw InvalidParams("grating: need N >= 1 slits");
    if (!(slit_width > 0.0)) throw InvalidParams("grating: slit width must be > 0");
    if (!(pitch > slit_width)) throw InvalidParams("grating: pitch must exceed slit width");
    if (!(wavelength > 0.0)) throw InvalidParams("grating: wavelength must be > 0");
  }

  double wavenumber() const { return 2.0 * pi / wavelength; }
  /// Half-width of the slit array, N d / 2.
  double half_aperture() const { return 0.5 * n_slits * pitch; }
};

/// Fullerene setup: N = 9, lambda = 5 pm, b = 5e3 lambda, d = 5e4 lambda.
inline GratingParams fullerene_grating() {
  constexpr double lambda = 5e-12;
  return {9, 5e3 * lambda, 5e4 * lambda, lambda};
}

inline double talbot_length(const GratingParams& g) {
  if (!(g.wavelength > 0.0)) throw InvalidParams("talbot_length: lambda must be > 0");
  return 2.0 * g.pitch * g.pitch / g.wavelength;
}

inline double slit_center(int n, const GratingParams& g) {
  return (n - 0.5 * (g.n_slits - 1)) * g.pitch;
}

/// 1 + i lambda y / (2 pi b^2), the complex beam-spread factor.
inline cplx spread_factor(double y, const GratingParams& g) {
  return {1.0, g.wavelength * y / (2.0 * pi * g.slit_width * g.slit_width)};
}

/// RMS width of a single-slit density beam at distance y.
inline double beam_sigma(double y, const GratingParams& g) {
  return g.slit_width * std::abs(spread_factor(y, g)) / std::sqrt(2.0);
}

struct WaveSample {
  cplx psi;
  cplx dpsi_dz;
};

/// Psi and d(Psi)/dz at (y, z).
inline WaveSample wave_with_gradient(double y, double z, const GratingParams& g) {
  if (y < 0.0) throw DomainError("wavefunction: y must be >= 0");
  const cplx a = spread_factor(y, g);
  const cplx inv = 1.0 / (2.0 * g.slit_width * g.slit_width * a);
  cplx sum = 0.0, dsum = 0.0;
  for (int n = 0; n < g.n_slits; ++n) {
    const double u = z - slit_center(n, g);
    const cplx term = std::exp(-u * u * inv);
    sum += term;
    dsum += -2.0 * u * inv * term;
  }
  const cplx pref = 1.0 / (static_cast<double>(g.n_slits) * std::sqrt(a));
  return {pref * sum, pref * dsum};
}

inline cplx wavefunction(double y, double z, const GratingParams& g) {
  return wave_with_gradient(y, z, g).psi;
}

/// Upper bound on max_z |Psi(y, z)|; the nodal threshold is taken relative
/// to it.
inline double amplitude_bound(double y, const GratingParams& g) {
  return 1.0 / std::sqrt(std::abs(spread_factor(y, g)));
}

inline constexpr double nodal_fraction = 1e-9;

// ---------------------------------------------------------------------------
// Sampled fields

struct ComplexField2D {
  std::vector<double> y_axis;
  std::vector<double> z_axis;
  std::vector<cplx> values;  // row-major: values[iy * nz + iz]

  std::size_t ny() const { return y_axis.size(); }
  std::size_t nz() const { return z_axis.size(); }
  cplx at(std::size_t iy, std::size_t iz) const { return values[iy * nz() + iz]; }
  std::span<const cplx> row(std::size_t iy) const {
    return {values.data() + iy * nz(), nz()};
  }

  void validate() const {
    if (values.size() != y_axis.size() * z_axis.size())
      throw InvalidParams("field: value count does not match grid");
    for (const auto* axis : {&y_axis, &z_axis})
      for (std::size_t i = 1; i < axis->size(); ++i)
        if (!((*axis)[i] > (*axis)[i - 1]))
          throw InvalidParams("field: axes must be strictly increasing");
  }

  std::vector<double> density() const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](cplx v) { return std::norm(v); });
    return out;
  }
};

struct DensityGrid {
  std::size_t nz = 512;
  std::size_t ny = 400;
  double z_min = 0.0;
  double z_max = 0.0;
  double y_max = 0.0;  // rows at y_max (j + 1) / ny, j = 0..ny-1
};

/// 512 x 400 over z in [-6d, 6d], y in (0, 6 y_T].
inline DensityGrid default_grid(const GratingParams& g) {
  return {512, 400, -6.0 * g.pitch, 6.0 * g.pitch, 6.0 * talbot_length(g)};
}

struct DensityMap {
  ComplexField2D field;
  std::vector<double> density;  // |Psi|^2, same layout as field.values
  std::vector<std::string> warnings;
};

inline DensityMap density_map(const DensityGrid& grid, const GratingParams& g) {
  g.validate();
  if (grid.nz < 2 || grid.ny < 1 || !(grid.z_max > grid.z_min) || !(grid.y_max > 0.0))
    throw InvalidParams("density_map: degenerate grid");
  DensityMap map;
  map.field.z_axis = numerics::linspace(grid.z_min, grid.z_max, grid.nz);
  map.field.y_axis.resize(grid.ny);
  for (std::size_t j = 0; j < grid.ny; ++j)
    map.field.y_axis[j] = grid.y_max * static_cast<double>(j + 1) / static_cast<double>(grid.ny);
  map.field.values.resize(grid.ny * grid.nz);
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nz; ++i)
      map.field.values[j * grid.nz + i] =
          wavefunction(map.field.y_axis[j], map.field.z_axis[i], g);
  map.density = map.field.density();
  const double dz = map.field.z_axis[1] - map.field.z_axis[0];
  if (dz > g.slit_width / 4.0)
    map.warnings.push_back("grid-too-coarse: z step " + std::to_string(dz) +
                           " m exceeds b/4 = " + std::to_string(g.slit_width / 4.0) + " m");
  return map;
}

/// Density |Psi(y, z)|^2 along z at fixed y.
inline std::vector<double> density_profile(double y, std::span<const double> z,
                                           const GratingParams& g) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::norm(wavefunction(y, z[i], g));
  return out;
}

/// Trapezoid z-integral of |Psi(y, .)|^2 over [z_lo, z_hi].
inline double row_norm(double y, const GratingParams& g, double z_lo, double z_hi,
                       std::size_t nz) {
  const auto z = numerics::linspace(z_lo, z_hi, nz);
  const auto p = density_profile(y, z, g);
  double s = 0.0;
  for (std::size_t i = 1; i < nz; ++i) s += 0.5 * (p[i] + p[i - 1]);
  return s * (z[1] - z[0]);
}

/// Local maxima above frac * max of a sampled profile.
inline std::size_t count_peaks(std::span<const double> p, double frac = 0.5) {
  if (p.size() < 3) return 0;
  const double top = *std::max_element(p.begin(), p.end());
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    if (p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] > frac * top) ++count;
  return count;
}

/// Pearson correlation of the grating-window (|z| <= N d / 2) density at
/// y = 0 and at y = y_T.
inline double talbot_revival_correlation(const GratingParams& g, std::size_t nz = 512) {
  const double half = g.half_aperture();
  const auto z = numerics::linspace(-half, half, nz);
  const auto p0 = density_profile(0.0, z, g);
  const auto p1 = density_profile(talbot_length(g), z, g);
  return numerics::pearson_correlation(p0, p1);
}

// ---------------------------------------------------------------------------
// Polar form

struct PolarDecomposition {
  std::vector<double> density;   // rho = |Psi|^2
  std::vector<double> action;    // S = hbar arg(Psi), unwrapped; NaN at nodes
  std::vector<bool> nodal;       // |Psi| below threshold
};

/// Psi = sqrt(rho) exp(i S / hbar) along one grid line. The phase is
/// unwrapped outward from `seed`; nodal samples are flagged and skipped.
inline PolarDecomposition polar_decompose(std::span<const cplx> line, double hbar,
                                          std::size_t seed,
                                          double nodal_threshold = 0.0) {
  const std::size_t n = line.size();
  if (seed >= n) throw InvalidParams("polar_decompose: seed out of range");
  PolarDecomposition out;
  out.density.resize(n);
  out.action.assign(n, std::nan(""));
  out.nodal.resize(n);
  double amax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.density[i] = std::norm(line[i]);
    amax = std::max(amax, std::abs(line[i]));
  }
  const double thr = nodal_threshold > 0.0 ? nodal_threshold : nodal_fraction * amax;
  for (std::size_t i = 0; i < n; ++i) out.nodal[i] = std::abs(line[i]) < thr;
  if (out.nodal[seed])
    throw NodalRegion("polar_decompose: field vanishes at the unwrap seed");

  out.action[seed] = std::arg(line[seed]);
  auto sweep = [&](long step) {
    double last = out.action[seed];
    for (long i = static_cast<long>(seed) + step; i >= 0 && i < static_cast<long>(n);
         i += step) {
      if (out.nodal[i]) continue;
      double ph = std::arg(line[i]);
      ph += 2.0 * pi * std::round((last - ph) / (2.0 * pi));
      out.action[i] = ph;
      last = ph;
    }
  };
  sweep(+1);
  sweep(-1);
  for (auto& s : out.action) s *= hbar;
  return out;
}

inline std::size_t nearest_index(std::span<const double> axis, double x) {
  const auto it = std::min_element(axis.begin(), axis.end(), [x](double a, double b) {
    return std::abs(a - x) < std::abs(b - x);
  });
  return static_cast<std::size_t>(it - axis.begin());
}

// ---------------------------------------------------------------------------
// Bohmian trajectories

/// Paraxial guidance slope dz/dy = Im(dPsi/dz / Psi) / k.
inline double bohmian_velocity(double y, double z, const GratingParams& g) {
  const WaveSample w = wave_with_gradient(y, z, g);
  if (std::abs(w.psi) < nodal_fraction * amplitude_bound(y, g))
    throw NodalRegion("bohmian_velocity: |Psi| below nodal threshold at y = " +
                      std::to_string(y) + ", z = " + std::to_string(z));
  return std::imag(w.dpsi_dz / w.psi) / g.wavenumber();
}

enum class TrajectoryStatus { complete, nodal_crossing, left_window };

struct BohmianTrajectory {
  double start_z = 0.0;
  std::vector<double> y;  // sampled positions, strictly increasing
  std::vector<double> z;
  TrajectoryStatus status = TrajectoryStatus::complete;
  std::string diagnostic;
};

struct TrajectoryOptions {
  double max_step = 0.0;      // <= y_T / 2000; 0 selects y_T / 2000
  double window_half = 0.0;   // |z| bound; 0 selects N d / 2 + 10 beam_sigma(y_end)
};

inline double default_max_step(const GratingParams& g) { return talbot_length(g) / 2000.0; }

/// Classic RK4 integration of dz/dy from (y_samples[0], z0), recording z at
/// every sample. Aborts (partial path + diagnostic) on entering a nodal
/// region or leaving the window.
inline BohmianTrajectory integrate_trajectory(double z0, std::span<const double> y_samples,
                                              const GratingParams& g,
                                              TrajectoryOptions opts = {}) {
  if (y_samples.empty()) throw InvalidParams("integrate_trajectory: no samples");
  if (y_samples.front() < 0.0) throw DomainError("integrate_trajectory: y must be >= 0");
  for (std::size_t i = 1; i < y_samples.size(); ++i)
    if (!(y_samples[i] > y_samples[i - 1]))
      throw InvalidParams("integrate_trajectory: y samples must increase");
  const double limit = default_max_step(g);
  if (opts.max_step <= 0.0) opts.max_step = limit;
  if (opts.max_step > limit * (1 + 1e-12))
    throw InvalidParams("integrate_trajectory: step must be <= y_T / 2000");
  if (opts.window_half <= 0.0)
    opts.window_half = g.half_aperture() + 10.0 * beam_sigma(y_samples.back(), g);

  BohmianTrajectory tr;
  tr.start_z = z0;
  tr.y.push_back(y_samples[0]);
  tr.z.push_back(z0);
  double z = z0;
  try {
    for (std::size_t i = 1; i < y_samples.size(); ++i) {
      const double y_from = y_samples[i - 1];
      const double span = y_samples[i] - y_from;
      const auto steps = static_cast<std::size_t>(std::ceil(span / opts.max_step - 1e-9));
      const double h = span / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) {
        const double y = y_from + h * static_cast<double>(s);
        const double k1 = bohmian_velocity(y, z, g);
        const double k2 = bohmian_velocity(y + h / 2, z + h / 2 * k1, g);
        const double k3 = bohmian_velocity(y + h / 2, z + h / 2 * k2, g);
        const double k4 = bohmian_velocity(y + h, z + h * k3, g);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      if (std::abs(z) > opts.window_half) {
        tr.status = TrajectoryStatus::left_window;
        tr.diagnostic = "left the z window at y = " + std::to_string(y_samples[i]);
        return tr;
      }
      tr.y.push_back(y_samples[i]);
      tr.z.push_back(z);
    }
  } catch (const NodalRegion& e) {
    tr.status = TrajectoryStatus::nodal_crossing;
    tr.diagnostic = e.what();
  }
  return tr;
}

/// Starting points distributed as the y = y0 density over the slit array:
/// z_k = F^{-1}((k + 1/2) / count), F the cumulative density.
inline std::vector<double> seed_positions(std::size_t count, const GratingParams& g,
                                          double y0 = 0.0, std::size_t resolution = 40001) {
  if (count == 0) return {};
  const double lo = slit_center(0, g) - 8.0 * std::max(g.slit_width, beam_sigma(y0, g));
  const double hi = -lo;
  const auto z = numerics::linspace(lo, hi, resolution);
  const auto p = density_profile(y0, z, g);
  std::vector<double> cdf(resolution, 0.0);
  for (std::size_t i = 1; i < resolution; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (p[i] + p[i - 1]) * (z[i] - z[i - 1]);
  const double total = cdf.back();
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double target = total * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cdf.begin()));
    const double frac = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
    out.push_back(z[i - 1] + frac * (z[i] - z[i - 1]));
  }
  return out;
}

inline std::vector<BohmianTrajectory> trajectory_bundle(std::span<const double> starts,
                                                        std::span<const double> y_samples,
                                                        const GratingParams& g,
                                                        const TrajectoryOptions& opts = {}) {
  std::vector<BohmianTrajectory> out;
  out.reserve(starts.size());
  for (double z0 : starts) out.push_back(integrate_trajectory(z0, y_samples, g, opts));
  return out;
}

/// True when every pair of trajectories keeps its z-order at every common
/// sample (bundle sorted by start).
inline bool no_crossings(const std::vector<BohmianTrajectory>& bundle) {
  for (std::size_t a = 1; a < bundle.size(); ++a) {
    const auto& lo = bundle[a - 1];
    const auto& hi = bundle[a];
    if (!(lo.start_z < hi.start_z)) return false;
    const std::size_t n = std::min(lo.z.size(), hi.z.size());
    for (std::size_t i = 0; i < n; ++i)
      if (!(lo.z[i] < hi.z[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Quantum potential and osmotic velocity

enum class SliceRole { density, action, potential, osmotic_speed };

struct ScalarField1D {
  std::vector<double> axis;
  std::vector<double> values;
  SliceRole role = SliceRole::density;
};

namespace detail {
inline void require_positive(std::span<const double> rho, const char* who) {
  for (double v : rho)
    if (!(v > 0.0)) throw NonpositiveDensity(std::string(who) + ": density must be > 0");
}
}  // namespace detail

/// Q = (hbar^2/8m)(grad rho / rho)^2 - (hbar^2/4m)(lap rho / rho) on a
/// uniform slice, second-order differences.
inline std::vector<double> quantum_potential(std::span<const double> rho, double mass,
                                             double h, double hbar) {
  detail::require_positive(rho, "quantum_potential");
  const auto g = numerics::gradient(rho, h);
  const auto l = numerics::second_derivative(rho, h);
  std::vector<double> q(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double a = g[i] / rho[i];
    q[i] = hbar * hbar / (8.0 * mass) * a * a - hbar * hbar / (4.0 * mass) * l[i] / rho[i];
  }
  return q;
}

/// Amplitude form Q = -(hbar^2/2m) lap R / R with R = sqrt(rho).
inline std::vector<double> quantum_potential_amplitude(std::span<const double> rho,
                                                       double mass, double h, double hbar) {
  detail::require_positive(rho, "quantum_potential_amplitude");
  std::vector<double> r(rho.size());
  std::transform(rho.begin(), rho.end(), r.begin(), [](double v) { return std::sqrt(v); });
  const auto l = numerics::second_derivative(r, h);
  std::vector<double> q(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) q[i] = -hbar * hbar / (2.0 * mass) * l[i] / r[i];
  return q;
}

/// u = (hbar/2m) grad rho / rho on a uniform slice.
inline std::vector<double> osmotic_velocity(std::span<const double> rho, double mass,
                                            double h, double hbar) {
  detail::require_positive(rho, "osmotic_velocity");
  const auto g = numerics::gradient(rho, h);
  std::vector<double> u(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) u[i] = hbar / (2.0 * mass) * g[i] / rho[i];
  return u;
}

/// Pointwise osmotic velocity of a smooth density callable, both published
/// forms: nu_bar d(ln rho)/dz and (hbar/m)(dR/dz)/R. Derivatives by complex
/// step, so the two routes agree to rounding.
struct OsmoticPair {
  double log_form;
  double amplitude_form;
};

template <class Density>
OsmoticPair osmotic_velocity_at(Density&& rho, double z, double mass, double hbar) {
  const double r0 = std::real(rho(cplx(z, 0.0)));
  if (!(r0 > 0.0)) throw NonpositiveDensity("osmotic_velocity_at: density must be > 0");
  const double nu_bar = hbar / (2.0 * mass);
  const double dlog = numerics::complex_step_derivative(
      [&](cplx x) { return std::log(rho(x)); }, z);
  const double dr = numerics::complex_step_derivative(
      [&](cplx x) { return std::sqrt(rho(x)); }, z);
  return {nu_bar * dlog, hbar / mass * dr / std::sqrt(r0)};
}

}  // namespace qvortex::wave
