#include <gtest/gtest.h>

#include <cmath>

#include "circstein/errors.hpp"
#include "circstein/w1_oracle.hpp"
#include "oracles.hpp"

using namespace circstein;

namespace {

const QuadratureGrid& grid() {
  static const QuadratureGrid g;
  return g;
}

double w1(const DistributionSpec& p, const DistributionSpec& q) { return circular_w1(p, q, grid()).value; }

}  // namespace

TEST(CircularW1, IdenticalAndRotatedUniform) {
  for (const auto& d : {DistributionSpec::von_mises(Angle(1.0), 3.0), DistributionSpec::cardioid(Angle{}, 0.5)}) {
    EXPECT_NEAR(w1(d, d), 0.0, 1e-9);
  }
  for (double delta : {0.3, 1.7, kPi}) {
    EXPECT_NEAR(w1(DistributionSpec::uniform(), DistributionSpec::uniform(Angle(delta))), 0.0, 1e-9);
  }
}

TEST(CircularW1, AgreesWithIndependentOracle) {
  const std::pair<DistributionSpec, DistributionSpec> pairs[] = {
      {DistributionSpec::von_mises(Angle{}, 2.0), DistributionSpec::bingham(Angle{}, 1.0)},
      {DistributionSpec::wrapped_cauchy(Angle(2.0), 0.7), DistributionSpec::von_mises(Angle(-2.5), 4.0)},
      {DistributionSpec::uniform(), DistributionSpec::cardioid(Angle(1.0), 0.4)}};
  for (const auto& [p, q] : pairs) {
    const double ref = oracle::circular_w1([&](double t) { return p.density(t); }, [&](double t) { return q.density(t); });
    // The trapezoid error is O(h^2): about 2e-7 on the default grid.
    EXPECT_NEAR(w1(p, q), ref, 1e-6) << p.describe() << " / " << q.describe();
    EXPECT_NEAR(circular_w1(p, q, QuadratureGrid(32768)).value, ref, 1e-8) << p.describe() << " / " << q.describe();
  }
}

TEST(CircularW1, PointMassLimitIsArcLength) {
  // Two tight von Mises laws behave like point masses a geodesic distance apart.
  const double d = w1(DistributionSpec::von_mises(Angle(3.0), 2000.0), DistributionSpec::von_mises(Angle(-3.0), 2000.0));
  EXPECT_NEAR(d, kTwoPi - 6.0, 1e-6);
}

TEST(CircularW1, MedianShiftMatchesGridSearch) {
  const auto r = circular_w1(DistributionSpec::von_mises(Angle{}, 2.0), DistributionSpec::wrapped_normal(Angle(1.0), 0.5),
                             grid(), {.verify_shift = true});
  ASSERT_TRUE(r.grid_search_value.has_value());
  EXPECT_NEAR(r.value, *r.grid_search_value, 1e-6);
}

TEST(CircularW1, Properties) {
  const auto u = DistributionSpec::uniform();
  const auto vm = DistributionSpec::von_mises(Angle{}, 1.0);
  const auto wn = DistributionSpec::wrapped_normal(Angle{}, 1.0);
  EXPECT_NEAR(w1(vm, wn), w1(wn, vm), 1e-10);
  EXPECT_LE(w1(u, wn), w1(u, vm) + w1(vm, wn) + 1e-8);
  EXPECT_LE(w1(u, DistributionSpec::von_mises(Angle(kPi), 50.0)), kPi);
  double prev = -1.0;
  for (int i = 0; i < 10; ++i) {
    const double delta = kPi * i / 9.0;
    const double v = w1(DistributionSpec::von_mises(Angle{}, 2.0), DistributionSpec::von_mises(Angle(delta), 2.0));
    EXPECT_GE(v, prev - 1e-12) << delta;
    prev = v;
  }
}

TEST(CircularW1, GridRefinementStable) {
  const auto p = DistributionSpec::wrapped_cauchy(Angle{}, 1.0);
  const auto q = DistributionSpec::wrapped_normal(Angle{}, 1.0);
  EXPECT_NEAR(circular_w1(p, q, grid()).value, circular_w1(p, q, QuadratureGrid(8192)).value, 1e-6);
}

TEST(ShiftedL1, ExactAcrossSignChange) {
  // D linear from -1 to 1 over a single cell after the implicit D(-pi) = 0 node.
  const std::vector<double> d = {-1.0, 1.0, 0.0};
  EXPECT_NEAR(shifted_l1(d, 0.0, 1.0), 0.5 + 0.5 + 0.5, 1e-15);
}

TEST(EmpiricalCircularW1, SmallCases) {
  EXPECT_NEAR(empirical_circular_w1({0.0, 1.0}, {0.0, 1.0}), 0.0, 1e-15);
  // Rotating every point by 0.1 costs 0.1 per point.
  EXPECT_NEAR(empirical_circular_w1({-3.1, 0.0, 2.0}, {-3.0, 0.1, 2.1}), 0.1, 1e-12);
  // Wrap-around: the cheapest match crosses +-pi.
  EXPECT_NEAR(empirical_circular_w1({3.1}, {-3.1}), kTwoPi - 6.2, 1e-12);
  EXPECT_THROW(empirical_circular_w1({0.0}, {}), DomainError);
}

TEST(EmpiricalW1, SameLawIsSmall) {
  const auto d = DistributionSpec::von_mises(Angle{}, 2.0);
  const auto e = empirical_w1(d, d, 10000, 5, 10, grid());
  EXPECT_LT(e.estimate, 0.05);
  EXPECT_EQ(e.replicates.size(), 10u);
}

TEST(EmpiricalW1, AgreesWithOracleAcrossSeeds) {
  const auto p = DistributionSpec::von_mises(Angle{}, 5.0);
  const auto q = DistributionSpec::von_mises(Angle(0.4), 5.0);
  const double exact = w1(p, q);
  std::vector<EmpiricalW1> runs;
  for (std::uint64_t seed : {1u, 2u, 3u}) runs.push_back(empirical_w1(p, q, 10000, seed, 10, grid()));
  EXPECT_NEAR(runs[0].estimate, exact, 2.0 * runs[0].std_error);
  for (const auto& a : runs) {
    for (const auto& b : runs) {
      EXPECT_LE(std::abs(a.estimate - b.estimate), 3.0 * std::hypot(a.std_error, b.std_error));
    }
  }
  EXPECT_THROW(empirical_w1(p, q, 999, 1, 10, grid()), DomainError);
}

TEST(EmpiricalW1, Deterministic) {
  const auto p = DistributionSpec::wrapped_cauchy(Angle{}, 1.0);
  const auto q = DistributionSpec::uniform();
  const auto a = empirical_w1(p, q, 1000, 9, 3, grid());
  const auto b = empirical_w1(p, q, 1000, 9, 3, grid());
  EXPECT_EQ(a.replicates, b.replicates);
}
