#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qvortex/vacuum_estimates.hpp"

using namespace qvortex;
using namespace qvortex::estimates;

namespace {
// Relative comparison.
void expect_rel(double got, double want, double rel) {
  EXPECT_NEAR(got / want, 1.0, rel) << "got " << got << ", want " << want;
}
}  // namespace

TEST(Estimates, NelsonDiffusion) {
  const PhysicalConstants c;
  expect_rel(nelson_diffusion(c.electron_mass), 5.78838180e-5, 1e-8);
  expect_rel(nelson_diffusion(c.proton_mass), 3.15245e-8, 1e-5);
  EXPECT_THROW(nelson_diffusion(0.0), InvalidParams);
}

TEST(Estimates, ZitterbewegungScales) {
  const PhysicalConstants c;
  const auto z = zitterbewegung_scales(c.electron_mass);
  expect_rel(z.frequency, 1.552688142e21, 1e-9);
  expect_rel(z.length, 1.930796e-13, 1e-6);
  expect_rel(z.length_hbar_over_m, 2.73056e-13, 1e-5);
  // lambda_C / sqrt(nu_bar/Omega) = 4 pi exactly.
  EXPECT_NEAR(z.compton_ratio, 4 * pi, 1e-12);
  EXPECT_NEAR(z.length_hbar_over_m / z.length, std::sqrt(2.0), 1e-14);
}

TEST(Estimates, ElectronCoreRadius) {
  const PhysicalConstants c;
  expect_rel(vortex::core_radius(0.0, electron_vortex(31.0, c)), 2.40999791500e-12, 1e-10);
}

TEST(Estimates, PairOrbit) {
  const auto o = pair_orbit_quantities();
  expect_rel(o.orbit_speed, 2187691.2623, 1e-10);
  EXPECT_DOUBLE_EQ(o.pair_energy_ev, 27.2);
  expect_rel(o.pair_mass, 2 * 9.1093837015e-31, 1e-15);
}

TEST(Estimates, VortexCountAndEnergy) {
  const auto disk = disk_defaults();
  EXPECT_DOUBLE_EQ(disk.disk_speed(), 13.2);
  const auto n = vortex_count(disk);
  expect_rel(n.n_max, 2.43056e18, 1e-5);
  expect_rel(n.n_mean_ratio, 5.97031e15, 1e-5);
  expect_rel(n.n_sqrt_ratio, 5.97035e15, 1e-5);
  EXPECT_NEAR(n.form_ratio, 1 + 13.2 / disk.orbit_speed, 1e-14);
  const double e = bundle_kinetic_energy(n.n_mean_ratio, pair_orbit_quantities().pair_mass,
                                         disk.orbit_speed);
  expect_rel(e, 0.026029, 1e-4);
}

TEST(Estimates, VortexCountRegime) {
  auto disk = disk_defaults();
  disk.angular_rate = 1e9;
  EXPECT_THROW(vortex_count(disk), RegimeError);
  disk.angular_rate = -1;
  EXPECT_THROW(vortex_count(disk), InvalidParams);
}

TEST(Dispersion, FreeLimitAndRotonShape) {
  const auto s = roton_defaults();
  EXPECT_DOUBLE_EQ(dispersion(0.0, s),
                   s.rotation_momentum * s.rotation_momentum * std::exp(-4.0) / (2 * s.pair_mass));
  // Far above p_R the form factor vanishes.
  const double p = 20 * s.rotation_momentum;
  EXPECT_NEAR(dispersion(p, s) / free_dispersion(p, s), 1.0, 1e-15);
  const auto ext = dispersion_extrema(s, 0.0, 4 * s.rotation_momentum);
  ASSERT_EQ(ext.size(), 2u);
  EXPECT_TRUE(ext[0].is_max);
  EXPECT_FALSE(ext[1].is_max);
  const double pr = s.rotation_momentum, sg = s.form_factor_sigma;
  EXPECT_GT(ext[0].p, pr);
  EXPECT_LT(ext[0].p, pr + sg);
  EXPECT_GT(ext[1].p, pr + sg);
  EXPECT_THROW(dispersion(-1.0, s), DomainError);
}

TEST(Dispersion, ExcessDecaysAboveRotonMinimum) {
  // eps / free - 1 = 2u + u^2 with u = p_R f / p, free of cancellation.
  const auto s = roton_defaults();
  auto excess = [&](double p) {
    const double u = s.rotation_momentum * form_factor(p, s) / p;
    return 2 * u + u * u;
  };
  const double start = s.rotation_momentum + 3 * s.form_factor_sigma;
  double prev = INFINITY;
  for (int i = 0; i <= 60; ++i) {
    const double p = start + 0.05 * i * s.form_factor_sigma;
    EXPECT_LT(excess(p), prev);
    EXPECT_NEAR(dispersion(p, s) / free_dispersion(p, s) - 1.0, excess(p), 1e-14);
    prev = excess(p);
  }
  EXPECT_NEAR(excess(s.rotation_momentum + 5 * s.form_factor_sigma), 2.1e-6, 0.05e-6);
  EXPECT_LT(excess(s.rotation_momentum + 6 * s.form_factor_sigma), 1e-6);
}

TEST(Dispersion, Validation) {
  auto s = roton_defaults();
  s.form_factor_sigma = 2 * s.rotation_momentum;
  EXPECT_THROW(s.validate(), InvalidParams);
}

TEST(Report, KeysUnitsAndOrder) {
  const PhysicalConstants c;
  const auto r = estimates_report(c, disk_defaults(c));
  ASSERT_GE(r.size(), 15u);
  EXPECT_EQ(r.front().name, "nelson_diffusion_electron");
  for (const auto& q : r) {
    EXPECT_FALSE(q.unit.empty()) << q.name;
    EXPECT_TRUE(std::isfinite(q.value)) << q.name;
  }
}

TEST(Constants, ParseOverridesAndErrors) {
  std::istringstream ok("# header\nhbar = 1.0  # source: test\n\nelectron_mass = 2.0\n");
  const auto c = parse_constants(ok, "mem");
  EXPECT_EQ(c.hbar, 1.0);
  EXPECT_EQ(c.electron_mass, 2.0);
  EXPECT_EQ(c.light_speed, PhysicalConstants{}.light_speed);

  std::istringstream bad_key("hbar = 1\nplanck = 2\n");
  try {
    parse_constants(bad_key, "f.txt");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("f.txt:2"), std::string::npos) << e.what();
  }
  std::istringstream bad_num("hbar = abc\n");
  EXPECT_THROW(parse_constants(bad_num, "g"), ConfigError);
}

TEST(Constants, ShippedFileMatchesBuiltins) {
  const auto c = load_constants(std::string(QVORTEX_SOURCE_DIR) + "/data/constants_codata2018.txt");
  const PhysicalConstants d;
  EXPECT_EQ(c.hbar, d.hbar);
  EXPECT_EQ(c.electron_mass, d.electron_mass);
  EXPECT_EQ(c.light_speed, d.light_speed);
  EXPECT_EQ(c.bohr_radius, d.bohr_radius);
  EXPECT_EQ(c.proton_mass, d.proton_mass);
}
