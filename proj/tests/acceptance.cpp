// Acceptance run: one PASS/FAIL line per criterion, measured values below it.
//   acceptance        run all criteria
//   acceptance 8      run criterion 8 only
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qvortex/checks.hpp"
#include "qvortex/cli.hpp"
#include "qvortex/io.hpp"
#include "qvortex/vacuum_estimates.hpp"
#include "qvortex/vortex_dynamics.hpp"
#include "qvortex/wave_interference.hpp"

using namespace qvortex;
using numerics::pi;

namespace {

using Clock = std::chrono::steady_clock;

struct Report {
  bool pass = true;
  std::vector<std::string> lines;

  void note(const std::string& s) { lines.push_back(s); }
  // Records a measured value against a bound; folds it into the verdict.
  void expect(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
};

std::string num(double v) { return io::format_double(v); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void within_rel(Report& r, const std::string& name, double got, double want, double rel) {
  const double dev = std::abs(got / want - 1.0);
  r.expect(dev <= rel, name + " = " + num(got) + " vs " + num(want) + " (rel dev " + num(dev) +
                           ", limit " + num(rel) + ")");
}

void add_check(Report& r, const checks::CheckResult& c) {
  std::string s = c.name;
  for (const auto& [k, v] : c.measured) s += " " + k + "=" + num(v);
  r.expect(c.passed, s + " [" + c.detail + "]");
}

// 1 ------------------------------------------------------------------------
Report a0_root() {
  Report r;
  const auto t0 = Clock::now();
  const double a0 = vortex::solve_a0();
  const double dt = seconds_since(t0);
  r.expect(std::abs(a0 - 1.2564312) <= 1e-7, "a0 = " + num(a0) + " vs 1.2564312 (abs dev " +
                                                  num(std::abs(a0 - 1.2564312)) + ")");
  r.expect(dt < 1e-3, "runtime " + num(dt) + " s < 0.001 s");
  return r;
}

// 2 ------------------------------------------------------------------------
Report electron_scales() {
  Report r;
  const PhysicalConstants c;
  const auto z = estimates::zitterbewegung_scales(c.electron_mass, c);
  within_rel(r, "nu_bar", estimates::nelson_diffusion(c.electron_mass, c), 5.79e-5, 0.005);
  within_rel(r, "Omega_zb", z.frequency, 1.6e21, 0.02);
  within_rel(r, "sqrt(nu/Omega)", z.length, 1.93e-13, 0.02);
  within_rel(r, "Compton ratio", z.compton_ratio, 12.0, 0.10);
  within_rel(r, "v_R", estimates::pair_orbit_quantities(c).orbit_speed, 2.192e6, 0.001);
  r.note("CODATA 2018 constants; 2 m_e c^2 / hbar and hbar / (a_B m_e) evaluated directly");
  return r;
}

// 3 ------------------------------------------------------------------------
Report vortex_bundle() {
  Report r;
  const PhysicalConstants c;
  const auto disk = estimates::disk_defaults(c);
  const auto n = estimates::vortex_count(disk);
  r.expect(n.n_max >= 1.5e18 && n.n_max <= 3e18, "N_max = " + num(n.n_max) + " in [1.5e18, 3e18]");
  within_rel(r, "V_D", disk.disk_speed(), 13.2, 0.001);
  within_rel(r, "N", n.n_mean_ratio, 6e15, 0.10);
  const double e = estimates::bundle_kinetic_energy(
      n.n_mean_ratio, estimates::pair_orbit_quantities(c).pair_mass, disk.orbit_speed);
  within_rel(r, "E [J]", e, 0.026, 0.10);
  r.note("sqrt(V_D / v_R) form gives N = " + num(n.n_sqrt_ratio) + " (ratio " +
         num(n.form_ratio) + ")");
  return r;
}

// 4 ------------------------------------------------------------------------
Report non_decay() {
  Report r;
  const auto t0 = Clock::now();
  const auto p = checks::figure_vortex();
  const double period = 2 * pi / p.omega;
  const int windows = 10, per = 2000;
  std::vector<double> osc_peak, lo_peak;
  for (int k = 0; k < windows; ++k) {
    double a = -INFINITY, b = -INFINITY;
    for (int j = 0; j < per; ++j) {
      const double t = period * (k + static_cast<double>(j) / per);
      a = std::max(a, vortex::vorticity_osc(0.0, t, p));
      const double tl = t + period / per;  // Lamb-Oseen needs t > 0
      b = std::max(b, vortex::lamb_oseen(0.0, tl, p.gamma, p.nu).vorticity);
    }
    osc_peak.push_back(a);
    lo_peak.push_back(b);
  }
  const auto [mn, mx] = std::minmax_element(osc_peak.begin(), osc_peak.end());
  r.expect(*mx - *mn < 1e-12, "oscillating-viscosity window peaks " + num(*mn) + " .. " +
                                  num(*mx) + ", spread " + num(*mx - *mn) + " < 1e-12");
  bool decreasing = true;
  for (int k = 1; k < windows; ++k) decreasing = decreasing && lo_peak[k] < lo_peak[k - 1];
  r.expect(decreasing, "Lamb-Oseen window peaks strictly decreasing: " + num(lo_peak.front()) +
                           " -> " + num(lo_peak.back()));
  const double dt = seconds_since(t0);
  r.expect(dt < 1.0, "runtime " + num(dt) + " s < 1 s");
  return r;
}

// 5 ------------------------------------------------------------------------
Report core_radius() {
  Report r;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_closed = 0.0, worst_extremum = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto p = checks::random_vortex(gen);
    const double t = 10 * u(gen);
    const double guess = vortex::core_radius_extremum(t, p);
    const double found = vortex::maximize_speed(
        [&](std::complex<double> x) { return vortex::velocity_osc(x, t, p); }, 0.0, 4 * guess);
    worst_closed = std::max(worst_closed, std::abs(vortex::core_radius(t, p) / found - 1));
    worst_extremum = std::max(worst_extremum, std::abs(guess / found - 1));
  }
  r.expect(worst_closed <= 1e-10, "published closed form vs numerical argmax, max rel dev " +
                                      num(worst_closed) + " (limit 1e-10)");
  r.note("measured argmax / closed form = " + num(1.0 / (1.0 - worst_closed)) +
         ", sqrt(pi) = " + num(std::sqrt(pi)));
  r.note("sqrt(a0 D) vs numerical argmax, max rel dev " + num(worst_extremum));
  const double dt = seconds_since(t0);
  r.expect(dt < 1.0, "runtime " + num(dt) + " s < 1 s");
  return r;
}

// 6 ------------------------------------------------------------------------
Report oracle_ratios() {
  Report r;
  add_check(r, checks::velocity_prefactor_ratio());
  add_check(r, checks::heat_residual_pi_viscosity());
  add_check(r, checks::heat_residual_plain_viscosity());
  return r;
}

// 7 ------------------------------------------------------------------------
Report geometry_identities() {
  Report r;
  add_check(r, checks::ring_velocity_derivative(1));
  add_check(r, checks::ball_velocities());
  return r;
}

// 8 ------------------------------------------------------------------------
Report interference() {
  Report r;
  const auto t0 = Clock::now();
  const auto g = wave::fullerene_grating();
  const double yt = wave::talbot_length(g);
  r.expect(std::abs(yt - 0.025) <= 1e-15, "Talbot length " + num(yt) + " m vs 0.025");

  const auto grid = wave::default_grid(g);
  const auto map = wave::density_map(grid, g);
  r.note("density map " + std::to_string(grid.nz) + "x" + std::to_string(grid.ny) +
         ", warnings: " + std::to_string(map.warnings.size()));

  // Norm per map row over a window that holds the spread beam.
  const double n0 = wave::row_norm(0.0, g, -g.half_aperture() - 8 * g.slit_width,
                                   g.half_aperture() + 8 * g.slit_width, 4001);
  double worst = 0.0;
  for (double y : map.field.y_axis) {
    const double half = g.half_aperture() + 8 * wave::beam_sigma(y, g);
    worst = std::max(worst, std::abs(wave::row_norm(y, g, -half, half, 4001) / n0 - 1));
  }
  r.expect(worst <= 0.005, "per-y norm, max rel change over " +
                               std::to_string(map.field.ny()) + " rows " + num(worst) +
                               " <= 0.005 (window N d/2 + 8 sigma(y))");
  const double fixed = 3 * g.n_slits * g.pitch;
  r.note("norm inside fixed |z| <= 3 N d at y = 2, 4, 6 y_T: " +
         num(wave::row_norm(2 * yt, g, -fixed, fixed, 4001) / n0) + ", " +
         num(wave::row_norm(4 * yt, g, -fixed, fixed, 4001) / n0) + ", " +
         num(wave::row_norm(6 * yt, g, -fixed, fixed, 4001) / n0));

  const double corr = wave::talbot_revival_correlation(g);
  r.expect(corr >= 0.9, "Talbot revival correlation " + num(corr) + " >= 0.9");

  std::vector<double> y = {0.0};
  y.insert(y.end(), map.field.y_axis.begin(), map.field.y_axis.end());
  const auto starts = wave::seed_positions(100, g);
  const auto bundle = wave::trajectory_bundle(starts, y, g);
  std::size_t complete = 0;
  for (const auto& tr : bundle) complete += tr.status == wave::TrajectoryStatus::complete;
  r.expect(complete == 100, std::to_string(complete) + "/100 trajectories reach y = 6 y_T");
  r.expect(wave::no_crossings(bundle), "no crossings among 100 trajectories at " +
                                           std::to_string(y.size()) + " y samples");
  const double dt = seconds_since(t0);
  r.expect(dt < 60.0, "runtime " + num(dt) + " s < 60 s");
  return r;
}

// 9 ------------------------------------------------------------------------
Report quantum_potential() {
  Report r;
  add_check(r, checks::quantum_potential_forms());
  add_check(r, checks::quantum_potential_gaussian());
  add_check(r, checks::osmotic_forms());
  return r;
}

// 10 -----------------------------------------------------------------------
Report dispersion() {
  Report r;
  const auto s = estimates::roton_defaults();
  const double pr = s.rotation_momentum, sg = s.form_factor_sigma;
  const double at = estimates::dispersion(pr, s), want = 2 * pr * pr / s.pair_mass;
  r.expect(at == want, "eps(p_R) = " + num(at) + " vs 2 p_R^2 / m_p = " + num(want));

  // Excess eps/free - 1 = 2u + u^2, u = p_R f / p.
  auto excess = [&](double p) {
    const double u = pr * estimates::form_factor(p, s) / p;
    return 2 * u + u * u;
  };
  bool decreasing = true;
  double prev = INFINITY;
  for (int i = 1; i <= 2000; ++i) {
    const double p = pr + 5 * sg + (10 * pr - pr - 5 * sg) * i / 2000.0;
    decreasing = decreasing && excess(p) < prev;
    prev = excess(p);
  }
  r.expect(decreasing, "eps/free - 1 strictly decreasing on (p_R + 5 sigma, 10 p_R]");
  const double tail = excess(4 * pr);
  r.expect(tail <= 1e-6, "eps/free - 1 at 4 p_R = " + num(tail) + " <= 1e-6");
  r.expect(excess(20 * pr) <= 1e-15, "eps/free - 1 at 20 p_R = " + num(excess(20 * pr)));
  double lo = pr + 5 * sg, hi = 4 * pr;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 1e-6 ? lo : hi) = mid;
  }
  r.note("eps/free - 1 at p_R + 5 sigma = " + num(excess(pr + 5 * sg)) +
         "; below 1e-6 from p_R + " + num((hi - pr) / sg) + " sigma on");
  const auto ext = estimates::dispersion_extrema(s, 0.0, 4 * pr);
  const bool hump = ext.size() == 2 && ext[0].is_max && !ext[1].is_max;
  r.expect(hump, "roton hump: " + std::to_string(ext.size()) + " extrema" +
                     (hump ? ", max at p/p_R = " + num(ext[0].p / pr) +
                                 ", min at p/p_R = " + num(ext[1].p / pr)
                           : std::string()));
  return r;
}

// 11 -----------------------------------------------------------------------
Report determinism() {
  Report r;
  const auto root = std::filesystem::temp_directory_path() / "qvortex_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::vector<std::vector<std::string>> runs = {
      {"vortex-profile", "--format", "csv,json,ppm", "--grid", "64x32"},
      {"vortex-general", "--noise-amplitude", "0.2", "--format", "csv,json,ppm", "--grid", "64x32"},
      {"ring", "--format", "csv,json"},
      {"ball", "--n-phi1", "4", "--n-phi2", "3", "--samples", "200", "--format", "csv,json"},
      {"interference", "--grid", "128x60", "--trajectories", "20", "--format", "csv,json,ppm"},
      {"dispersion", "--format", "csv,json"},
      {"estimates"},
      {"check"},
  };
  std::size_t compared = 0;
  for (const auto& base : runs) {
    std::vector<std::string> digests[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto args = base;
      const auto dir = root / (base[0] + "_" + std::to_string(rep));
      args.insert(args.end(), {"--seed", "12345", "--out", dir.string()});
      std::ostringstream sink;
      const int code = cli::run(args, sink, sink);
      if (code != 0) {
        r.expect(false, base[0] + " exited with " + std::to_string(code));
        continue;
      }
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files)
        digests[rep].push_back(f.filename().string() + ":" + io::sha256_hex(io::read_file(f)));
    }
    r.expect(!digests[0].empty() && digests[0] == digests[1],
             base[0] + ": " + std::to_string(digests[0].size()) + " files byte-identical");
    compared += digests[0].size();
  }
  r.note(std::to_string(compared) + " files compared (CSV, JSON, PPM, manifests)");
  std::filesystem::remove_all(root);
  return r;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Report()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "a0 root", a0_root},
      {2, "electron scales against printed values", electron_scales},
      {3, "vortex count and bundle energy", vortex_bundle},
      {4, "non-decay of the oscillating-viscosity vortex", non_decay},
      {5, "closed-form core radius against numerical maximisation", core_radius},
      {6, "oracle ratios", oracle_ratios},
      {7, "ring and ball velocity identities", geometry_identities},
      {8, "N-slit interference", interference},
      {9, "quantum potential and osmotic velocity", quantum_potential},
      {10, "roton dispersion", dispersion},
      {11, "determinism", determinism},
  };
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(all.size())) {
      std::cerr << "usage: acceptance [1-" << all.size() << "]\n";
      return 64;
    }
  }
  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Report rep;
    try {
      rep = c.run();
    } catch (const std::exception& e) {
      rep.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "[" << c.id << "] " << (rep.pass ? "PASS" : "FAIL") << "  " << c.title << "\n";
    for (const auto& l : rep.lines) std::cout << "      " << l << "\n";
    failed += !rep.pass;
  }
  return failed ? 1 : 0;
}
