#include <gtest/gtest.h>

#include <cmath>

#include "circstein/errors.hpp"
#include "circstein/special_functions.hpp"
#include "oracles.hpp"

using namespace circstein;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Bessel, SeriesExamples) {
  EXPECT_EQ(bessel_i0(0.0), 1.0);
  EXPECT_EQ(bessel_i1(0.0), 0.0);
  EXPECT_NEAR(bessel_i0(1.0), oracle::bessel_series(0, 1.0), 1e-12);
  EXPECT_NEAR(bessel_i0(1.0), 1.2660658777520084, 1e-12);
}

TEST(Bessel, DefiningIntegrals) {
  const double i0_5 = oracle::integrate([](double t) { return std::exp(5.0 * std::cos(t)); }, 0.0, oracle::kPi) /
                      oracle::kPi;
  EXPECT_NEAR(bessel_i0(5.0), i0_5, 1e-10);
  const double i1_1 =
      oracle::integrate([](double t) { return std::cos(t) * std::exp(std::cos(t)); }, -oracle::kPi, oracle::kPi) /
      (2.0 * oracle::kPi);
  EXPECT_NEAR(bessel_i1(1.0), i1_1, 1e-12);
}

TEST(Bessel, BothBranchesAgainstSeries) {
  for (double x : {0.5, 3.0, 12.0, 29.9, 30.1, 45.0, 80.0, 200.0, 700.0}) {
    EXPECT_LT(rel(bessel_i0(x), oracle::bessel_series(0, x)), 1e-13) << x;
    EXPECT_LT(rel(bessel_i1(x), oracle::bessel_series(1, x)), 1e-13) << x;
  }
}

TEST(Bessel, ScaledVariants) {
  // Reference values from arbitrary-precision evaluation.
  EXPECT_LT(rel(bessel_i0e(100.0), 0.039944379299096682648), 1e-14);
  EXPECT_LT(rel(bessel_i0e(700.0), 0.015081295651531357587), 1e-14);
  EXPECT_LT(rel(bessel_i0e(2234.0), 1.0 / std::sqrt(2.0 * oracle::kPi * 2234.0) * (1.0 + 1.0 / (8.0 * 2234.0))),
            1e-7);
  EXPECT_LT(rel(bessel_i1e(50.0), oracle::bessel_series(1, 50.0) * std::exp(-50.0)), 1e-13);
}

TEST(Bessel, Domain) {
  EXPECT_THROW(bessel_i0(-1.0), DomainError);
  EXPECT_THROW(bessel_i1(701.0), DomainError);
  EXPECT_THROW(bessel_i0(std::nan("")), DomainError);
}

TEST(Bessel, DetailReportsConvergence) {
  const auto d = bessel_i0_detail(2.0);
  EXPECT_TRUE(d.converged);
  EXPECT_GT(d.terms_used, 0);
  EXPECT_DOUBLE_EQ(d.value, bessel_i0(2.0));
}

TEST(Erfi, Examples) {
  EXPECT_EQ(erfi(0.0), 0.0);
  EXPECT_NEAR(erfi(1.0), 1.6504257587975428, 1e-12);
  for (double x : {0.3, 1.0, 2.0}) EXPECT_EQ(erfi(-x), -erfi(x));
}

TEST(Erfi, AgainstSeriesAcrossBranches) {
  for (double x : {0.1, 0.9, 2.5, 2.99, 3.01, 4.0, 6.0, 10.0}) {
    EXPECT_LT(rel(erfi(x), oracle::erfi_series(x)), 1e-13) << x;
  }
  EXPECT_LT(rel(erfi(26.0), 8.3146371647309876553e+291), 1e-13);
  EXPECT_THROW(erfi(26.5), DomainError);
}

TEST(Dawson, MatchesDefinition) {
  for (double x : {0.1, 1.0, 2.9, 5.0, 10.0}) {
    const double ref = std::sqrt(oracle::kPi) / 2.0 * std::exp(-x * x) * oracle::erfi_series(x);
    EXPECT_LT(rel(dawson(x), ref), 1e-13) << x;
  }
  EXPECT_LT(rel(dawson(26.0), 0.019245024851840634084), 1e-14);
}
