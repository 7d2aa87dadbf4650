#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "qvortex/errors.hpp"

namespace qvortex::numerics {

inline constexpr double pi = std::numbers::pi;

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  std::size_t max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kronrod_w[7];
  double gauss = fc * gauss_w[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_x[j];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kronrod_w[j] * sum;
    if (j % 2 == 1) gauss += gauss_w[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |I|). Throws QuadratureError
/// when the interval budget is exhausted first.
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureOptions& opts = {}) {
  if (a == b) return {};
  if (!std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integrate: infinite limits are not supported");
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gauss_kronrod_15(f, a, b));
  double total = panels.top().value;
  double error = panels.top().error;
  std::size_t evaluations = 15;

  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (panels.size() >= opts.max_intervals)
      throw QuadratureError("integrate: no convergence on [" +
                            std::to_string(a) + ", " + std::to_string(b) +
                            "], error estimate " + std::to_string(error));
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  total = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  return {sign * total, error, evaluations};
}

struct RootResult {
  double root = 0.0;
  int iterations = 0;
};

/// Bisection on a sign-changing bracket, then Newton polish.
///
/// Newton steps are only accepted while they stay inside the final bracket,
/// so the result never leaves [lo, hi].
template <class F, class DF>
RootResult bisect_newton(F&& f, DF&& df, double lo, double hi,
                         double tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return {lo, 0};
  if (fhi == 0.0) return {hi, 0};
  if ((flo > 0) == (fhi > 0))
    throw RootFindError("bisect_newton: root not bracketed");

  int it = 0;
  // Coarse bisection to 1e-3 of the bracket, Newton takes it from there.
  const double coarse = 1e-3 * (hi - lo);
  while (hi - lo > coarse && it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    ++it;
  }
  double x = 0.5 * (lo + hi);
  for (; it < max_iter; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return {x, it};
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double d = df(x);
    double next = d != 0.0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tol * std::max(1.0, std::abs(x)) ||
        hi - lo <= tol * std::max(1.0, std::abs(x)))
      return {next, it + 1};
    x = next;
  }
  throw RootFindError("bisect_newton: iteration limit reached");
}

/// Plain bisection; used where no derivative is available.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-15,
              int max_iter = 400) {
  double flo = f(lo);
  if ((flo > 0) == (f(hi) > 0))
    throw RootFindError("bisect: root not bracketed");
  for (int i = 0; i < max_iter && hi - lo > tol * std::max(1.0, std::abs(lo));
       ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section search for the maximiser of a unimodal f on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol = 1e-10,
                          int max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && hi - lo > tol * std::max(1.0, std::abs(c));
       ++i) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

/// df/dx from a single complex evaluation: Im f(x + ih) / h.
///
/// Free of subtractive cancellation, so h can sit far below sqrt(eps).
template <class F>
double complex_step_derivative(F&& f, double x) {
  const double h = 1e-30 * std::max(1.0, std::abs(x));
  return std::imag(f(std::complex<double>(x, h))) / h;
}

/// 1 - exp(-x) without cancellation near x = 0.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

inline std::complex<double> one_minus_exp_neg(std::complex<double> x) {
  if (std::abs(x) < 1e-5) return x * (1.0 - x * (0.5 - x / 6.0));
  return 1.0 - std::exp(-x);
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

inline double pearson_correlation(std::span<const double> a,
                                  std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw InvalidParams("pearson_correlation: size mismatch");
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Observed convergence order from errors at step h and h/2.
inline double observed_order(double err_coarse, double err_fine) {
  return std::log2(std::abs(err_coarse) / std::abs(err_fine));
}

/// Second-order first derivative of uniformly sampled data; one-sided
/// three-point stencils at the ends.
inline std::vector<double> gradient(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw InvalidParams("gradient: need at least 3 samples");
  std::vector<double> g(n);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  g[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  g[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  return g;
}

/// Second-order second derivative; four-point one-sided stencils at the ends.
inline std::vector<double> second_derivative(std::span<const double> f,
                                             double h) {
  const std::size_t n = f.size();
  if (n < 4) throw InvalidParams("second_derivative: need at least 4 samples");
  std::vector<double> g(n);
  const double h2 = h * h;
  for (std::size_t i = 1; i + 1 < n; ++i)
    g[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / h2;
  g[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h2;
  g[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / h2;
  return g;
}

}  // namespace qvortex::numerics
