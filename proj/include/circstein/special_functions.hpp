#pragma once

namespace circstein {

struct SpecialFunctionResult {
  double value = 0.0;
  int terms_used = 0;
  bool converged = false;
};

// Modified Bessel functions of the first kind, orders 0 and 1, for
// 0 <= x <= 700. Power series up to x = 30, Hankel asymptotic expansion above.
double bessel_i0(double x);
double bessel_i1(double x);
SpecialFunctionResult bessel_i0_detail(double x);
SpecialFunctionResult bessel_i1_detail(double x);

// Exponentially scaled variants e^{-x} I_n(x). No upper limit on x; densities
// of concentrated von Mises laws are normalised with these.
double bessel_i0e(double x);
double bessel_i1e(double x);

/// Imaginary error function erfi(x) = (2/sqrt(pi)) int_0^x e^{t^2} dt, for
/// |x| <= 26. Maclaurin series on |x| <= 3, Dawson's integral beyond.
double erfi(double x);
SpecialFunctionResult erfi_detail(double x);

/// Dawson's integral D(x) = e^{-x^2} int_0^x e^{t^2} dt (Rybicki's sampling
/// sum, any finite x).
double dawson(double x);

}  // namespace circstein
