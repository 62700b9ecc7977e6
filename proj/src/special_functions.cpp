#include "circstein/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "circstein/errors.hpp"

namespace circstein {

namespace {

constexpr int kTermCap = 500;
constexpr double kSeriesCutover = 30.0;
constexpr double kBesselMax = 700.0;
constexpr double kErfiMax = 26.0;
constexpr double kErfiSeriesLimit = 3.0;

void check_bessel_argument(const char* name, double x) {
  if (!(x >= 0.0 && x <= kBesselMax)) {
    std::ostringstream msg;
    msg << name << ": argument must lie in [0, 700] (got " << x << ")";
    throw DomainError(msg.str());
  }
}

// sum_k (x/2)^{2k+nu} / (k! (k+nu)!), nu in {0, 1}.
SpecialFunctionResult bessel_series(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  SpecialFunctionResult r{term, 1, false};
  if (term == 0.0) {
    r.converged = true;
    return r;
  }
  for (int k = 1; k < kTermCap; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    r.value += term;
    r.terms_used = k + 1;
    if (term < 1e-17 * r.value) {
      r.converged = true;
      break;
    }
  }
  return r;
}

// e^{-x} I_nu(x) from the Hankel expansion; valid for large x only.
SpecialFunctionResult bessel_asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  SpecialFunctionResult r{0.0, 1, false};
  for (int k = 1; k < kTermCap; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;  // series turned divergent
    term = next;
    sum += term;
    r.terms_used = k + 1;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      r.converged = true;
      break;
    }
  }
  r.value = sum / std::sqrt(2.0 * std::numbers::pi * x);
  return r;
}

SpecialFunctionResult bessel_detail(int nu, double x) {
  if (x <= kSeriesCutover) return bessel_series(nu, x);
  SpecialFunctionResult r = bessel_asymptotic_scaled(nu, x);
  r.value *= std::exp(x);
  return r;
}

double bessel_scaled(int nu, const char* name, double x) {
  if (!(x >= 0.0) || std::isinf(x)) {
    std::ostringstream msg;
    msg << name << ": argument must be finite and >= 0 (got " << x << ")";
    throw DomainError(msg.str());
  }
  if (x <= kSeriesCutover) return std::exp(-x) * bessel_series(nu, x).value;
  return bessel_asymptotic_scaled(nu, x).value;
}

}  // namespace

SpecialFunctionResult bessel_i0_detail(double x) {
  check_bessel_argument("bessel_i0", x);
  return bessel_detail(0, x);
}

SpecialFunctionResult bessel_i1_detail(double x) {
  check_bessel_argument("bessel_i1", x);
  return bessel_detail(1, x);
}

double bessel_i0(double x) { return bessel_i0_detail(x).value; }
double bessel_i1(double x) { return bessel_i1_detail(x).value; }

double bessel_i0e(double x) { return bessel_scaled(0, "bessel_i0e", x); }
double bessel_i1e(double x) { return bessel_scaled(1, "bessel_i1e", x); }

double dawson(double x) {
  if (!std::isfinite(x)) throw DomainError("dawson: argument must be finite");
  // D(x) = lim_{h->0} pi^{-1/2} sum_{m odd} exp(-(x - m h)^2) / m. With h = 0.2
  // the discretisation error is below 1e-26; Gaussian tails beyond 9 are
  // negligible.
  constexpr double h = 0.2;
  const auto lo = static_cast<long>(std::floor((x - 9.0) / h));
  const auto hi = static_cast<long>(std::ceil((x + 9.0) / h));
  double sum = 0.0;
  for (long m = lo; m <= hi; ++m) {
    if (m % 2 == 0) continue;
    const double d = x - static_cast<double>(m) * h;
    sum += std::exp(-d * d) / static_cast<double>(m);
  }
  return sum / std::sqrt(std::numbers::pi);
}

SpecialFunctionResult erfi_detail(double x) {
  if (!(std::abs(x) <= kErfiMax)) {
    std::ostringstream msg;
    msg << "erfi: |x| must be <= 26 (got " << x << ")";
    throw DomainError(msg.str());
  }
  const double scale = 2.0 / std::sqrt(std::numbers::pi);
  if (std::abs(x) <= kErfiSeriesLimit) {
    // sum_k x^{2k+1} / (k! (2k+1)); t carries x^{2k+1}/k!.
    const double x2 = x * x;
    double t = x;
    SpecialFunctionResult r{x, 1, x == 0.0};
    for (int k = 1; k < kTermCap && !r.converged; ++k) {
      t *= x2 / k;
      const double term = t / (2.0 * k + 1.0);
      r.value += term;
      r.terms_used = k + 1;
      r.converged = std::abs(term) < 1e-17 * std::abs(r.value);
    }
    r.value *= scale;
    return r;
  }
  return {scale * std::exp(x * x) * dawson(x), 0, true};
}

double erfi(double x) { return erfi_detail(x).value; }

}  // namespace circstein
