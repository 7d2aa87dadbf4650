#pragma once

// Oracle suite: cross-checks between independent evaluations of the same
// quantity, each with a measured number and a tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qvortex/numerics.hpp"
#include "qvortex/vortex_dynamics.hpp"
#include "qvortex/vortex_geometry.hpp"
#include "qvortex/wave_interference.hpp"

namespace qvortex::checks {

using numerics::pi;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> measured;
  std::string detail;
};

/// Reference parameters: Gamma = 1, nu = 1, Omega = pi, n = 16.
inline vortex::OscViscosityParams figure_vortex() { return {}; }

inline vortex::OscViscosityParams random_vortex(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  vortex::OscViscosityParams p;
  p.gamma = 0.2 + 3 * u(gen);
  p.nu = 0.05 + 2 * u(gen);
  p.omega = 0.3 + 6 * u(gen);
  p.phi = 2 * pi * u(gen);
  p.n = 1.5 + 40 * u(gen);
  return p;
}

/// Quadrature of the vorticity against the closed-form speed.
inline CheckResult velocity_prefactor_ratio() {
  const auto p = figure_vortex();
  auto w = [&](double r, double t) { return vortex::vorticity_osc(r, t, p); };
  double lo = INFINITY, hi = -INFINITY, worst = 0.0;
  for (double t = 0.0; t < 2.0; t += 0.25) {
    for (double r : {0.5, 2.0, 8.0, 20.0}) {
      const double ratio = vortex::velocity_from_vorticity(w, r, t) / vortex::velocity_osc(r, t, p);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      worst = std::max(worst, std::abs(ratio - pi));
    }
  }
  return {"vorticity_velocity_prefactor_ratio",
          worst <= 1e-6,
          {{"ratio_min", lo}, {"ratio_max", hi}, {"max_deviation_from_pi", worst}},
          "quadrature speed / closed-form speed, expected pi +- 1e-6"};
}

/// Second-order residual convergence with kappa = pi nu g(t).
inline CheckResult heat_residual_pi_viscosity() {
  const auto p = figure_vortex();
  auto w = [&](double r, double t) { return vortex::vorticity_osc(r, t, p); };
  auto k = [&](double t) { return pi * p.nu * vortex::viscosity_g(t, p.omega, p.phi); };
  const auto c = vortex::residual_convergence(w, k, 6.0, 0.3, {0.2, 0.02}, 4);
  return {"heat_residual_converges_with_pi_viscosity",
          c.order >= 1.9,
          {{"order", c.order}, {"finest_residual", c.residuals.back()}},
          "observed order of the centred residual, expected >= 1.9"};
}

/// With kappa = nu g(t) the residual tends to a nonzero constant.
inline CheckResult heat_residual_plain_viscosity() {
  const auto p = figure_vortex();
  auto w = [&](double r, double t) { return vortex::vorticity_osc(r, t, p); };
  auto good = [&](double t) { return pi * p.nu * vortex::viscosity_g(t, p.omega, p.phi); };
  auto plain = [&](double t) { return p.nu * vortex::viscosity_g(t, p.omega, p.phi); };
  const auto ref = vortex::residual_convergence(w, good, 6.0, 0.3, {0.2, 0.02}, 4);
  const auto c = vortex::residual_convergence(w, plain, 6.0, 0.3, {0.2, 0.02}, 4);
  const bool stalls = std::abs(c.order) < 0.5 &&
                      std::abs(c.residuals.back()) > 1e3 * std::abs(ref.residuals.back());
  return {"heat_residual_fails_with_plain_viscosity",
          stalls,
          {{"order", c.order}, {"finest_residual", c.residuals.back()}},
          "residual must not converge to zero"};
}

/// Ring velocity against centred differences of the position, r1 = 0.
inline CheckResult ring_velocity_derivative(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = INFINITY;
  const std::vector<double> times = {0.0, 0.37, 1.1, 2.6, 4.9};
  for (int i = 0; i < 20; ++i) {
    const geometry::HelixParams p(0.5 + 4 * u(gen), 0.0, -3 + 6 * u(gen), -10 + 20 * u(gen),
                                  2 * pi * u(gen), 2 * pi * u(gen));
    const double e1 = geometry::velocity_fd_error(p, times, 1e-3);
    const double e2 = geometry::velocity_fd_error(p, times, 5e-4);
    worst = std::min(worst, numerics::observed_order(e1, e2));
  }
  return {"ring_velocity_is_position_derivative",
          worst >= 1.9,
          {{"min_order", worst}},
          "r1 = 0, 20 random sets, expected order >= 1.9"};
}

/// t = 0 ball velocity (0, r0 w1, 3 r0 w1) and v+ + v- = (0, 2 r0 w1, 0).
inline CheckResult ball_velocities() {
  using namespace geometry;
  const double r0 = 4.0, w1 = 1.0;
  const geometry::HelixParams ball(r0, 0.0, w1, 3 * w1);
  const auto v = geometry::ring_velocity(0.0, ball);
  const bool exact = v[0] == 0.0 && v[1] == r0 * w1 && v[2] == 3 * r0 * w1;
  const auto s = geometry::opposite_velocity_sum(ball);
  const double dev = geometry::norm(s - geometry::Vec3{0.0, 2 * r0 * w1, 0.0});
  return {"ball_velocity_identities",
          exact && dev <= 1e-12 * r0 * w1,
          {{"initial_vx", v[0]}, {"initial_vy", v[1]}, {"initial_vz", v[2]},
           {"opposite_sum_deviation", dev}},
          "initial velocity exact; opposite sum within 1e-12"};
}

namespace detail {
// Two-Gaussian density, smooth and strictly positive.
template <class T>
T mixture_density(T z) {
  return std::exp(-(z - 0.4) * (z - 0.4) / 0.18) + 0.6 * std::exp(-(z + 0.5) * (z + 0.5) / 0.32);
}

inline double form_gap(std::size_t n) {
  const auto z = numerics::linspace(-3.0, 3.0, n);
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = mixture_density(z[i]);
  const double h = z[1] - z[0];
  const auto a = wave::quantum_potential(rho, 1.0, h, 1.0);
  const auto b = wave::quantum_potential_amplitude(rho, 1.0, h, 1.0);
  double gap = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(z[i]) <= 1.5) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}
}  // namespace detail

/// Density-gradient form of Q against the -(hbar^2/2m) R''/R form.
inline CheckResult quantum_potential_forms() {
  const double g1 = detail::form_gap(601), g2 = detail::form_gap(1201);
  const double order = numerics::observed_order(g1, g2);
  return {"quantum_potential_forms_agree",
          order >= 1.9,
          {{"gap_coarse", g1}, {"gap_fine", g2}, {"order", order}},
          "max |Q_rho - Q_R| on |z| <= 1.5 at h and h/2, expected order >= 1.9"};
}

/// Gaussian density: analytic Q at the grid centre.
inline CheckResult quantum_potential_gaussian() {
  const double s = 0.7, m = 1.3, hbar = 0.9;
  const std::size_t n = 8001;
  const auto z = numerics::linspace(-2.0, 2.0, n);
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::exp(-z[i] * z[i] / (s * s));
  const double h = z[1] - z[0];
  const auto qa = wave::quantum_potential(rho, m, h, hbar);
  const auto qb = wave::quantum_potential_amplitude(rho, m, h, hbar);
  const std::size_t c = n / 2;
  const double exact = hbar * hbar / (2 * m * s * s);
  const double ea = std::abs(qa[c] / exact - 1.0), eb = std::abs(qb[c] / exact - 1.0);
  return {"quantum_potential_gaussian_centre",
          ea <= 1e-6 && eb <= 1e-6,
          {{"exact", exact}, {"rel_error_density_form", ea}, {"rel_error_amplitude_form", eb}},
          "relative error at z = 0, expected <= 1e-6"};
}

/// nu_bar d ln(rho)/dz against (hbar/m) R'/R.
inline CheckResult osmotic_forms() {
  double worst = 0.0;
  for (double z = -1.5; z <= 1.5; z += 0.125) {
    const auto u = wave::osmotic_velocity_at(
        [](std::complex<double> x) { return detail::mixture_density(x); }, z, 1.0, 1.0);
    const double scale = std::max(std::abs(u.log_form), 1e-300);
    worst = std::max(worst, std::abs(u.log_form - u.amplitude_form) / scale);
  }
  return {"osmotic_velocity_forms_agree",
          worst <= 1e-12,
          {{"max_rel_difference", worst}},
          "expected <= 1e-12 relative"};
}

inline CheckResult talbot_revival() {
  const double c = wave::talbot_revival_correlation(wave::fullerene_grating());
  return {"talbot_revival_correlation",
          c >= 0.9,
          {{"correlation", c}},
          "density correlation at y = 0 and y = y_T over |z| <= N d / 2, expected >= 0.9"};
}

/// Numerical maximiser of the speed against the closed-form core radius.
/// The measured ratio is sqrt(pi); the check pins that factor.
inline CheckResult core_radius_ratio(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < 20; ++i) {
    const auto p = random_vortex(gen);
    const double t = 10 * u(gen);
    const double guess = vortex::core_radius_extremum(t, p);
    const double found = vortex::maximize_speed(
        [&](std::complex<double> r) { return vortex::velocity_osc(r, t, p); }, 0.0, 4 * guess);
    const double ratio = found / vortex::core_radius(t, p);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const double dev = std::max(std::abs(lo / std::sqrt(pi) - 1), std::abs(hi / std::sqrt(pi) - 1));
  return {"core_radius_formula_ratio",
          dev <= 1e-10,
          {{"ratio_min", lo}, {"ratio_max", hi}, {"max_rel_deviation_from_sqrt_pi", dev}},
          "numerical argmax / closed-form radius, measured factor sqrt(pi)"};
}

inline std::vector<CheckResult> run_all(std::uint64_t seed) {
  return {velocity_prefactor_ratio(), heat_residual_pi_viscosity(),
          heat_residual_plain_viscosity(), ring_velocity_derivative(seed),
          ball_velocities(), quantum_potential_forms(), quantum_potential_gaussian(),
          osmotic_forms(), talbot_revival(), core_radius_ratio(seed)};
}

}  // namespace qvortex::checks
