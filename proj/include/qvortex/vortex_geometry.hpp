#pragma once

// Kinematics of the helicoidal vortex ring and its vortex-ball limit.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "qvortex/errors.hpp"
#include "qvortex/numerics.hpp"

namespace qvortex::geometry {

using numerics::pi;
using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double norm(const Vec3& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

inline double reduce_phase(double phi) {
  double r = std::fmod(phi, 2.0 * pi);
  if (r < 0.0) r += 2.0 * pi;
  return r;
}

/// Torus geometry: tube radius r0, torus radius r1, toroidal frequency
/// omega1, poloidal frequency omega2. r1 -> 0 is the vortex ball.
class HelixParams {
 public:
  HelixParams(double r0, double r1, double omega1, double omega2,
              double phi1 = 0.0, double phi2 = 0.0)
      : r0_(r0), r1_(r1), omega1_(omega1), omega2_(omega2),
        phi1_(reduce_phase(phi1)), phi2_(reduce_phase(phi2)) {
    if (!(r0 > 0.0)) throw InvalidParams("helix: r0 must be > 0");
    if (!(r1 >= 0.0)) throw InvalidParams("helix: r1 must be >= 0");
    if (!std::isfinite(omega1) || !std::isfinite(omega2) ||
        !std::isfinite(phi1) || !std::isfinite(phi2) || !std::isfinite(r0) ||
        !std::isfinite(r1))
      throw InvalidParams("helix: parameters must be finite");
  }

  double r0() const { return r0_; }
  double r1() const { return r1_; }
  double omega1() const { return omega1_; }
  double omega2() const { return omega2_; }
  double phi1() const { return phi1_; }
  double phi2() const { return phi2_; }

  HelixParams with_phases(double phi1, double phi2) const {
    return {r0_, r1_, omega1_, omega2_, phi1, phi2};
  }

 private:
  double r0_, r1_, omega1_, omega2_, phi1_, phi2_;
};

struct PathPoint {
  double t = 0.0;
  Vec3 position{};
  Vec3 velocity{};
};

inline Vec3 ring_position(double t, const HelixParams& p) {
  const double a1 = p.omega1() * t + p.phi1();
  const double a2 = p.omega2() * t + p.phi2();
  const double rho = p.r1() + p.r0() * std::cos(a2);
  return {rho * std::cos(a1), rho * std::sin(a1), p.r0() * std::sin(a2)};
}

/// Velocity of a point on the ring, with the poloidal frequency and phase
/// (omega2, phi2) in the poloidal terms.
inline Vec3 ring_velocity(double t, const HelixParams& p) {
  const double a1 = p.omega1() * t + p.phi1();
  const double a2 = p.omega2() * t + p.phi2();
  const double r0 = p.r0(), r1 = p.r1(), w1 = p.omega1(), w2 = p.omega2();
  const double s1 = std::sin(a1), c1 = std::cos(a1);
  const double s2 = std::sin(a2), c2 = std::cos(a2);
  return {-r0 * w2 * s2 * c1 - r0 * w1 * c2 * s1 - r1 * w1 * s1,
          -r0 * w2 * s2 * s1 + r0 * w1 * c2 * c1 + r1 * w1 * c1,
          r0 * w2 * c2};
}

inline PathPoint ring_point(double t, const HelixParams& p) {
  return {t, ring_position(t, p), ring_velocity(t, p)};
}

/// Distance of a point from the z axis.
inline double axial_distance(const Vec3& x) { return std::hypot(x[0], x[1]); }

/// Maximum r1/r0 accepted as a vortex ball.
inline constexpr double ball_ratio_limit = 1e-2;

/// v+ + v-, the velocities at t = 0 and at the return time pi/omega1.
/// For omega2 an odd multiple of omega1 this is (0, 2 r0 omega1, 0).
/// With omega1 = 0 there is no return time and the zero vector is returned.
inline Vec3 opposite_velocity_sum(const HelixParams& p) {
  if (p.r1() / p.r0() > ball_ratio_limit)
    throw InvalidParams("opposite_velocity_sum: r1/r0 > 1e-2 is not a ball");
  if (p.omega1() == 0.0) return {0.0, 0.0, 0.0};
  const Vec3 plus = ring_velocity(0.0, p);
  const Vec3 minus = ring_velocity(pi / p.omega1(), p);
  return plus + minus;
}

/// Continued-fraction closure period 2 pi q / omega1 when omega2/omega1 is
/// (to 1e-12) a reduced fraction p/q with q <= max_denominator.
inline std::optional<double> closure_period(const HelixParams& p,
                                            std::int64_t max_denominator = 1000) {
  if (p.omega1() == 0.0) return std::nullopt;
  const double ratio = p.omega2() / p.omega1();
  double x = std::abs(ratio);
  std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // convergents h/k
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h0 + h1, k2 = ai * k0 + k1;
    if (k2 > max_denominator) break;
    h1 = h0; h0 = h2; k1 = k0; k0 = k2;
    if (std::abs(static_cast<double>(h0) / static_cast<double>(k0) - std::abs(ratio)) <=
        1e-12 * std::max(1.0, std::abs(ratio)))
      return 2.0 * pi * static_cast<double>(k0) / std::abs(p.omega1());
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

struct PointCloud {
  std::size_t n_phi1 = 0;
  std::size_t n_phi2 = 0;
  std::size_t samples_per_ring = 0;
  // phase-major: index = (i1 * n_phi2 + i2) * samples_per_ring + k
  std::vector<double> phi1;
  std::vector<double> phi2;
  std::vector<PathPoint> points;
};

/// Rings over uniform, endpoint-exclusive phase grids phi1, phi2 in [0, 2 pi),
/// each sampled at samples_per_ring uniform times in [0, t_end).
inline PointCloud fill_ball(const HelixParams& p, std::size_t n_phi1,
                            std::size_t n_phi2, std::size_t samples_per_ring,
                            double t_end) {
  if (n_phi1 == 0 || n_phi2 == 0 || samples_per_ring == 0)
    throw InvalidParams("fill_ball: counts must be >= 1");
  PointCloud cloud;
  cloud.n_phi1 = n_phi1;
  cloud.n_phi2 = n_phi2;
  cloud.samples_per_ring = samples_per_ring;
  cloud.points.reserve(n_phi1 * n_phi2 * samples_per_ring);
  const double dt = t_end / static_cast<double>(samples_per_ring);
  for (std::size_t i1 = 0; i1 < n_phi1; ++i1) {
    const double ph1 = p.phi1() + 2.0 * pi * static_cast<double>(i1) / static_cast<double>(n_phi1);
    for (std::size_t i2 = 0; i2 < n_phi2; ++i2) {
      const double ph2 = p.phi2() + 2.0 * pi * static_cast<double>(i2) / static_cast<double>(n_phi2);
      const HelixParams ring = p.with_phases(ph1, ph2);
      for (std::size_t k = 0; k < samples_per_ring; ++k) {
        cloud.phi1.push_back(ring.phi1());
        cloud.phi2.push_back(ring.phi2());
        cloud.points.push_back(ring_point(dt * static_cast<double>(k), ring));
      }
    }
  }
  return cloud;
}

/// Same phase grid at one instant t.
inline PointCloud fill_ball_at(const HelixParams& p, std::size_t n_phi1,
                               std::size_t n_phi2, double t) {
  PointCloud cloud = fill_ball(p, n_phi1, n_phi2, 1, 0.0);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const HelixParams ring = p.with_phases(cloud.phi1[i], cloud.phi2[i]);
    cloud.points[i] = ring_point(t, ring);
  }
  return cloud;
}

/// Maximum |centered difference of ring_position - ring_velocity| over the
/// sample times for step h.
inline double velocity_fd_error(const HelixParams& p,
                                const std::vector<double>& times, double h) {
  double worst = 0.0;
  for (double t : times) {
    const Vec3 fd = (1.0 / (2.0 * h)) *
                    (ring_position(t + h, p) - ring_position(t - h, p));
    worst = std::max(worst, norm(fd - ring_velocity(t, p)));
  }
  return worst;
}

}  // namespace qvortex::geometry
