#pragma once

// Vortex solutions of the radial vorticity diffusion equation
//   d(omega)/dt = kappa(t) (d2(omega)/dr2 + (1/r) d(omega)/dr)
// with an oscillating or memory-kernel viscosity, the Lamb-Oseen reference
// vortex, and the quadrature / finite-difference oracles used to check them.
//
// The closed forms are evaluated exactly as published even where their
// constant factors disagree with each other; the oracles measure the factors.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvortex/errors.hpp"
#include "qvortex/numerics.hpp"

namespace qvortex::vortex {

using numerics::pi;

/// Parameters of the oscillating-viscosity vortex. Defaults are the
/// illustrative reference set (Gamma=1, nu=1, Omega=pi, n=16).
struct OscViscosityParams {
  double gamma = 1.0;  // [m^2/s]
  double nu = 1.0;     // [m^2/s]
  double omega = pi;   // [rad/s]
  double phi = 0.0;    // [rad]
  double n = 16.0;

  void validate() const {
    if (!(nu >= 0.0) || !std::isfinite(nu))
      throw InvalidParams("nu must be finite and >= 0");
    if (!(omega > 0.0) || !std::isfinite(omega))
      throw InvalidParams("omega must be finite and > 0");
    if (!(n > 1.0) || !std::isfinite(n))
      throw InvalidParams("offset n must be finite and > 1");
    if (!std::isfinite(gamma) || !std::isfinite(phi))
      throw InvalidParams("gamma and phi must be finite");
  }
};

struct RadialSample {
  double r = 0.0;
  double t = 0.0;
  double omega_z = 0.0;
  double v_theta = 0.0;
};

/// Dimensionless viscosity modulation g(t) = cos(Omega t + phi).
inline double viscosity_g(double t, double omega, double phi) {
  return std::cos(omega * t + phi);
}

/// Gaussian spread D(t) = 4 pi (nu/Omega)(sin(Omega t + phi) + n).
inline double spread_osc(double t, const OscViscosityParams& p) {
  const double s = std::sin(p.omega * t + p.phi) + p.n;
  if (!(s > 0.0))
    throw InvalidParams("n + sin(Omega t + phi) <= 0 at t = " +
                        std::to_string(t));
  return 4.0 * pi * (p.nu / p.omega) * s;
}

/// Vorticity of the oscillating-viscosity vortex, Gamma/D exp(-r^2/D).
/// Templated on the radius type so complex-step derivatives can be taken.
template <class R = double>
R vorticity_osc(R r, double t, const OscViscosityParams& p) {
  const double d = spread_osc(t, p);
  return p.gamma / d * std::exp(-(r * r) / d);
}

/// Azimuthal speed Gamma/(2 pi r) (1 - exp(-r^2/D)); v(0) = 0 by its limit.
template <class R = double>
R velocity_osc(R r, double t, const OscViscosityParams& p) {
  const double d = spread_osc(t, p);
  if (r == R(0)) return R(0);
  const R x = r * r / d;
  if (std::abs(x) < 1e-300) return p.gamma * r / (2.0 * pi * d);
  return p.gamma / (2.0 * pi * r) * numerics::one_minus_exp_neg(x);
}

inline RadialSample sample_osc(double r, double t,
                               const OscViscosityParams& p) {
  return {r, t, vorticity_osc(r, t, p), velocity_osc(r, t, p)};
}

struct LambOseenValue {
  double vorticity = 0.0;
  double speed = 0.0;
};

/// Lamb-Oseen vortex with the published prefactors:
///   omega = Gamma/(4 pi nu t) exp(-r^2/4 nu t),
///   v     = Gamma/(4 pi r) (1 - exp(-r^2/4 nu t)).
inline LambOseenValue lamb_oseen(double r, double t, double gamma,
                                 double nu) {
  if (!(t > 0.0)) throw DomainError("lamb_oseen: t must be > 0");
  if (!(nu > 0.0)) throw DomainError("lamb_oseen: nu must be > 0");
  const double d = 4.0 * nu * t;
  LambOseenValue out;
  out.vorticity = gamma / (pi * d) * std::exp(-r * r / d);
  if (r == 0.0) {
    out.speed = 0.0;
  } else {
    out.speed = gamma / (4.0 * pi * r) * numerics::one_minus_exp_neg(r * r / d);
  }
  return out;
}

/// Nonzero root of ln(2a + 1) - a = 0 (about 1.2564312).
inline double solve_a0() {
  static const double root = [] {
    auto f = [](double a) { return std::log(2.0 * a + 1.0) - a; };
    auto df = [](double a) { return 2.0 / (2.0 * a + 1.0) - 1.0; };
    return numerics::bisect_newton(f, df, 1.0, 2.0, 1e-15).root;
  }();
  return root;
}

/// Published core-radius formula r_v = 2 sqrt(a0 (n + sin(Omega t + phi)))
/// sqrt(nu / Omega).
inline double core_radius(double t, const OscViscosityParams& p) {
  const double s = std::sin(p.omega * t + p.phi) + p.n;
  return 2.0 * std::sqrt(solve_a0() * s) * std::sqrt(p.nu / p.omega);
}

/// Radius where d(velocity_osc)/dr = 0, i.e. r^2 = a0 D(t). Differs from
/// core_radius() by a factor sqrt(pi).
inline double core_radius_extremum(double t, const OscViscosityParams& p) {
  return std::sqrt(solve_a0() * spread_osc(t, p));
}

/// Numerical maximiser of a radial speed profile v(r) on [lo, hi].
///
/// Golden-section search brackets the peak; the zero of dv/dr, obtained by
/// complex-step differentiation, is then bisected to machine precision.
/// `speed` must accept std::complex<double>.
template <class Speed>
double maximize_speed(Speed&& speed, double lo, double hi) {
  const double guess = numerics::golden_section_max(
      [&](double r) { return std::real(speed(std::complex<double>(r, 0.0))); },
      lo, hi, 1e-6);
  auto slope = [&](double r) {
    return numerics::complex_step_derivative(speed, r);
  };
  const double step0 = 1e-3 * std::max(guess, hi - lo);
  double a = guess, b = guess;
  for (double w = step0; slope(a) <= 0.0 && a > lo; w *= 2) a = std::max(lo, a - w);
  for (double w = step0; slope(b) >= 0.0 && b < hi; w *= 2) b = std::min(hi, b + w);
  return numerics::bisect(slope, a, b, 1e-16);
}

// ---------------------------------------------------------------------------
// Memory-kernel viscosity

/// Time-dependent viscosity nu(tau) [m^2/s]. Immutable after construction.
class ViscosityKernel {
 public:
  ViscosityKernel(std::string name, std::function<double(double)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  double operator()(double tau) const { return fn_(tau); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
};

inline ViscosityKernel zero_kernel() {
  return {"zero", [](double) { return 0.0; }};
}

inline ViscosityKernel constant_kernel(double nu) {
  return {"constant", [nu](double) { return nu; }};
}

/// nu(tau) = nu cos(Omega tau + phi).
inline ViscosityKernel cosine_kernel(double nu, double omega, double phi = 0.0) {
  return {"cosine",
          [nu, omega, phi](double tau) { return nu * std::cos(omega * tau + phi); }};
}

struct ColorNoiseParams {
  double amplitude = 1.0;  // RMS of nu(tau) [m^2/s]
  double mean = 0.0;       // constant offset [m^2/s]
  std::size_t modes = 32;
  double band_lo = 0.5;    // [rad/s]
  double band_hi = 5.0;    // [rad/s]
  std::uint64_t seed = 1;
};

/// Band-limited noise: mean + amplitude sqrt(2/K) sum_k cos(w_k tau + theta_k)
/// with w_k uniform in the band and theta_k uniform in [0, 2 pi).
///
/// Uniform variates are built from raw mt19937_64 output (53-bit mantissa),
/// whose sequence is fixed by the standard, so the table is reproducible
/// across platforms for a given seed.
inline ViscosityKernel color_noise_kernel(const ColorNoiseParams& np) {
  if (np.modes == 0) throw InvalidParams("color noise needs >= 1 mode");
  if (!(np.band_hi >= np.band_lo) || !(np.band_lo >= 0.0))
    throw InvalidParams("color noise band must satisfy 0 <= lo <= hi");
  struct Mode {
    double freq, phase;
  };
  std::mt19937_64 gen(np.seed);
  auto uniform = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  auto table = std::make_shared<std::vector<Mode>>();
  table->reserve(np.modes);
  for (std::size_t k = 0; k < np.modes; ++k) {
    const double f = np.band_lo + (np.band_hi - np.band_lo) * uniform();
    const double ph = 2.0 * pi * uniform();
    table->push_back({f, ph});
  }
  const double scale =
      np.amplitude * std::sqrt(2.0 / static_cast<double>(np.modes));
  const double mean = np.mean;
  std::shared_ptr<const std::vector<Mode>> frozen = std::move(table);
  return {"color_noise", [frozen, scale, mean](double tau) {
            double s = 0.0;
            for (const auto& m : *frozen) s += std::cos(m.freq * tau + m.phase);
            return mean + scale * s;
          }};
}

struct MemoryViscosityParams {
  double gamma = 1.0;
  ViscosityKernel kernel = zero_kernel();
  double sigma = 1.0;  // [m]
};

/// Effective spread tau(t) = int_0^t nu(s) ds + sigma^2 by adaptive
/// quadrature. Throws NonpositiveSpread if the result is <= 0.
inline double memory_tau(double t, const MemoryViscosityParams& p) {
  const double integral =
      t == 0.0 ? 0.0 : numerics::integrate(p.kernel, 0.0, t).value;
  const double tau = integral + p.sigma * p.sigma;
  if (!(tau > 0.0)) throw NonpositiveSpread(t, tau);
  return tau;
}

/// Checks tau(t) > 0 at every requested time before any field evaluation.
inline std::vector<double> memory_tau_series(std::span<const double> times,
                                             const MemoryViscosityParams& p) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(memory_tau(t, p));
  return out;
}

inline double vorticity_from_spread(double r, double tau, double gamma) {
  const double d = 4.0 * pi * tau;
  return gamma / d * std::exp(-r * r / d);
}

inline double velocity_from_spread(double r, double tau, double gamma) {
  const double d = 4.0 * pi * tau;
  if (r == 0.0) return 0.0;
  return gamma / (2.0 * pi * r) * numerics::one_minus_exp_neg(r * r / d);
}

inline double vorticity_general(double r, double t,
                                const MemoryViscosityParams& p) {
  return vorticity_from_spread(r, memory_tau(t, p), p.gamma);
}

inline double velocity_general(double r, double t,
                               const MemoryViscosityParams& p) {
  return velocity_from_spread(r, memory_tau(t, p), p.gamma);
}

/// Memory parameters whose solution coincides with the oscillating-viscosity
/// vortex: kernel nu cos(Omega tau + phi), sigma^2 = (nu/Omega)(n + sin phi).
inline MemoryViscosityParams matched_memory_params(const OscViscosityParams& p) {
  MemoryViscosityParams m;
  m.gamma = p.gamma;
  m.kernel = cosine_kernel(p.nu, p.omega, p.phi);
  m.sigma = std::sqrt((p.nu / p.omega) * (p.n + std::sin(p.phi)));
  return m;
}

// ---------------------------------------------------------------------------
// Oracles

struct FiniteSteps {
  double dr = 1e-2;
  double dt = 1e-3;
  FiniteSteps halved() const { return {dr / 2, dt / 2}; }
};

/// Centered-difference residual of the radial diffusion equation at (r, t)
/// for a single stencil size, without the convergence check.
template <class Field, class Kappa>
double heat_residual_stencil(Field&& w, Kappa&& kappa, double r, double t,
                             const FiniteSteps& h) {
  const double c = w(r, t);
  const double rp = w(r + h.dr, t);
  const double rm = w(r - h.dr, t);
  const double dwdt = (w(r, t + h.dt) - w(r, t - h.dt)) / (2.0 * h.dt);
  const double d2 = (rp - 2.0 * c + rm) / (h.dr * h.dr);
  const double d1 = (rp - rm) / (2.0 * h.dr);
  return dwdt - kappa(t) * (d2 + d1 / r);
}

/// Residual of d(omega)/dt - kappa(t)(omega_rr + omega_r / r) at (r, t).
///
/// Also evaluated at h/2 and h/4; if the successive differences do not
/// contract (above the round-off floor) the stencil is not in its asymptotic
/// range and StepTooLarge is thrown.
template <class Field, class Kappa>
double heat_residual(Field&& w, Kappa&& kappa, double r, double t,
                     const FiniteSteps& h) {
  if (!(r > 2.0 * h.dr))
    throw DomainError("heat_residual: need r > 2 dr for central differences");
  const double r0 = heat_residual_stencil(w, kappa, r, t, h);
  const double r1 = heat_residual_stencil(w, kappa, r, t, h.halved());
  const double r2 = heat_residual_stencil(w, kappa, r, t, h.halved().halved());
  const double fine_dr = h.dr / 4, fine_dt = h.dt / 4;
  const double mag = std::abs(w(r, t));
  const double floor = 64.0 * 2.2e-16 * mag *
                       (1.0 / fine_dt + std::abs(kappa(t)) *
                                            (4.0 / (fine_dr * fine_dr) +
                                             1.0 / (r * fine_dr)));
  const double d1 = std::abs(r0 - r1), d2 = std::abs(r1 - r2);
  if (d1 > floor && d2 > floor && d2 > 0.5 * d1)
    throw StepTooLarge("heat_residual: stencil differences do not contract (" +
                       std::to_string(d1) + " -> " + std::to_string(d2) + ")");
  return r0;
}

struct ResidualConvergence {
  std::vector<double> residuals;  // at h, h/2, h/4, ...
  double order = 0.0;             // log2 ratio of the last two residuals
  double extrapolated = 0.0;      // Richardson limit assuming order 2
};

template <class Field, class Kappa>
ResidualConvergence residual_convergence(Field&& w, Kappa&& kappa, double r,
                                         double t, FiniteSteps h,
                                         int levels = 4) {
  ResidualConvergence out;
  for (int i = 0; i < levels; ++i, h = h.halved())
    out.residuals.push_back(heat_residual_stencil(w, kappa, r, t, h));
  const auto n = out.residuals.size();
  if (n >= 2) {
    out.order = numerics::observed_order(out.residuals[n - 2], out.residuals[n - 1]);
    out.extrapolated = (4.0 * out.residuals[n - 1] - out.residuals[n - 2]) / 3.0;
  }
  return out;
}

/// v(r, t) = (1/r) int_0^r omega(r', t) r' dr' by adaptive quadrature.
template <class Field>
double velocity_from_vorticity(Field&& w, double r, double t,
                               const numerics::QuadratureOptions& opts = {}) {
  if (r < 0.0) throw DomainError("velocity_from_vorticity: r must be >= 0");
  if (r == 0.0) return 0.0;
  numerics::QuadratureOptions local = opts;
  local.abs_tol = std::min(opts.abs_tol, 1e-15 * r * r);
  const auto res = numerics::integrate(
      [&](double s) { return w(s, t) * s; }, 0.0, r, local);
  return res.value / r;
}

}  // namespace qvortex::vortex
