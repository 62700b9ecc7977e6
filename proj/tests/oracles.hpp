#pragma once

// Reference computations for the tests. None of them share code with the
// library: integrals use adaptive Simpson, special functions use their power
// series in long double, and W1 uses a fine midpoint CDF with a golden-section
// search over the shift.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson extrapolation. The interval is first cut
/// into `pieces` panels so narrow peaks are not missed.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-14,
                        int pieces = 64) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * w;
    const double hi = lo + w;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = w / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, 40);
  }
  return total;
}

/// I_nu(x) = sum_k (x/2)^{2k+nu} / (k! (k+nu)!), nu in {0, 1}.
inline double bessel_series(int nu, double x) {
  const long double h = 0.5L * x;
  long double term = nu == 0 ? 1.0L : h;
  long double sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= h * h / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (term < 1e-21L * sum) break;
  }
  return static_cast<double>(sum);
}

/// erfi(x) = (2/sqrt(pi)) sum_k x^{2k+1} / (k! (2k+1)).
inline double erfi_series(double x) {
  long double power = x;  // x^{2k+1} / k!
  long double sum = power;
  for (int k = 1; k < 4000; ++k) {
    power *= static_cast<long double>(x) * x / k;
    const long double term = power / (2 * k + 1);
    sum += term;
    if (std::abs(term) < 1e-21L * std::abs(sum)) break;
  }
  return static_cast<double>(2.0L / std::sqrt(static_cast<long double>(kPi)) * sum);
}

/// Wrapped normal density straight from the lattice sum, |k| <= 50.
inline double wn_density(double theta, double sigma2) {
  long double sum = 0.0L;
  for (int k = -50; k <= 50; ++k) {
    const long double d = theta + 2.0L * static_cast<long double>(kPi) * k;
    sum += std::exp(-d * d / (2.0L * sigma2));
  }
  return static_cast<double>(sum / std::sqrt(2.0L * static_cast<long double>(kPi) * sigma2));
}

/// tau^c(x) = (1/p(x)) int_x^pi sin(y) p(y) dy.
inline double circular_kernel(const std::function<double(double)>& density, double x) {
  if (x >= kPi) return 0.0;
  return integrate([&](double y) { return std::sin(y) * density(y); }, x, kPi) / density(x);
}

/// Circular W1 from midpoint CDFs on m cells, minimised over the shift by
/// golden-section search (the objective is convex in c).
inline double circular_w1(const std::function<double(double)>& p, const std::function<double(double)>& q,
                          int m = 200000) {
  const double h = 2.0 * kPi / m;
  std::vector<double> d(m);
  double fp = 0.0;
  double fq = 0.0;
  for (int j = 0; j < m; ++j) {
    const double x = -kPi + (j + 0.5) * h;
    fp += p(x) * h;
    fq += q(x) * h;
    d[j] = fp - fq;
  }
  auto cost = [&](double c) {
    double s = 0.0;
    for (double v : d) s += std::abs(v - c);
    return s * h;
  };
  double lo = -1.0;
  double hi = 1.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double ca = cost(a);
  double cb = cost(b);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (ca < cb) {
      hi = b;
      b = a;
      cb = ca;
      a = hi - g * (hi - lo);
      ca = cost(a);
    } else {
      lo = a;
      a = b;
      ca = cb;
      b = lo + g * (hi - lo);
      cb = cost(b);
    }
  }
  return cost(0.5 * (lo + hi));
}

}  // namespace oracle
