#include <gtest/gtest.h>

#include <cmath>

#include "circstein/circle.hpp"
#include "circstein/errors.hpp"
#include "oracles.hpp"

using namespace circstein;

TEST(Wrap, FixedPoints) {
  EXPECT_EQ(wrap(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap(3.0 * kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap(kPi), kPi);
}

TEST(Wrap, LandsInHalfOpenInterval) {
  for (double x = -40.0; x <= 40.0; x += 0.37) {
    const double w = wrap(x);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(w - x, kTwoPi), 0.0, 1e-12);
  }
}

TEST(Wrap, RejectsNonFinite) {
  EXPECT_THROW(wrap(std::nan("")), DomainError);
  EXPECT_THROW(wrap(INFINITY), DomainError);
}

TEST(Angle, ArithmeticWraps) {
  const Angle a(3.0);
  const Angle b(1.0);
  EXPECT_NEAR((a + b).radians(), 4.0 - kTwoPi, 1e-15);
  EXPECT_NEAR((b - a).radians(), -2.0, 1e-15);
}

TEST(MuCoordinates, Examples) {
  EXPECT_EQ(to_mu_coordinates(Angle(1.2), Angle(1.2)).radians(), 0.0);
  EXPECT_EQ(to_mu_coordinates(Angle(kPi / 2), Angle(kPi / 2)).radians(), 0.0);
  EXPECT_NEAR(to_mu_coordinates(Angle(-3.0 * kPi / 4), Angle(kPi / 2)).radians(), 3.0 * kPi / 4, 1e-15);
}

TEST(QuadratureGrid, NodesEndAtPi) {
  const QuadratureGrid g(8);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g.node(7), kPi);
  EXPECT_NEAR(g.node(0), -kPi + kTwoPi / 8, 1e-15);
  EXPECT_THROW(QuadratureGrid(1), InvalidArgument);
}

TEST(PeriodicQuadrature, Examples) {
  const QuadratureGrid g;
  EXPECT_NEAR(periodic_quadrature([](double) { return 1.0 / kTwoPi; }, g), 1.0, 1e-14);
  for (std::size_t n : {2u, 3u, 17u, 4096u}) {
    EXPECT_NEAR(periodic_quadrature([](double x) { return std::sin(x); }, QuadratureGrid(n)), 0.0, 1e-14);
  }
  const double i0 = oracle::bessel_series(0, 1.0);
  const double norm =
      periodic_quadrature([&](double x) { return std::exp(std::cos(x)) / (kTwoPi * i0); }, g);
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(PeriodicQuadrature, ReportsOffendingNode) {
  const QuadratureGrid g(16);
  try {
    periodic_quadrature([](double x) { return x > 1.0 ? std::nan("") : 0.0; }, g);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(CumulativeIntegral, MatchesAdaptiveQuadrature) {
  const QuadratureGrid g(512);
  auto f = [](double x) { return std::exp(2.0 * std::cos(x)) * (1.0 + 0.3 * std::sin(3.0 * x)); };
  const CumulativeIntegral c(f, g);
  for (double x : {-3.0, -1.234, 0.0, 0.5, 2.9, kPi}) {
    EXPECT_NEAR(c.forward(x), oracle::integrate(f, -kPi, x), 1e-12) << x;
    EXPECT_NEAR(c.backward(x), oracle::integrate(f, x, kPi), 1e-12) << x;
  }
  EXPECT_NEAR(c.total(), oracle::integrate(f, -kPi, kPi), 1e-12);
}

TEST(CumulativeIntegral, AnchoredKeepsTailPrecision) {
  // A zero-total integrand whose values near +-pi are tiny.
  const QuadratureGrid g;
  auto f = [](double x) { return -std::sin(x) * std::exp(50.0 * (std::cos(x) - 1.0)); };
  const CumulativeIntegral c(f, g);
  const double x = 3.0;
  const double exact = -oracle::integrate(f, x, kPi, 1e-30);
  EXPECT_NEAR(c.anchored(x) / exact, 1.0, 1e-9);
  EXPECT_EQ(c.anchored(kPi), 0.0);
}
