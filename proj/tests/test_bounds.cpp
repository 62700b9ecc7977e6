#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "circstein/errors.hpp"
#include "circstein/special_functions.hpp"
#include "circstein/wasserstein_bounds.hpp"
#include "oracles.hpp"

using namespace circstein;

namespace {

const QuadratureGrid& grid() {
  static const QuadratureGrid g;
  return g;
}

void expect_sandwich(const DistributionSpec& x, const DistributionSpec& y) {
  const BoundReport r = sandwich_bounds(x, y, grid());
  ASSERT_TRUE(r.oracle_w1.has_value());
  EXPECT_LE(r.lower - 1e-6, *r.oracle_w1) << x.describe() << " / " << y.describe();
  EXPECT_LE(*r.oracle_w1, r.upper + 1e-6) << x.describe() << " / " << y.describe();
  EXPECT_NEAR(r.lower, r.lower_via_sin, 1e-8);
  EXPECT_NEAR(r.upper, r.upper_target_form, 1e-8);
  if (r.envelope) EXPECT_LE(r.upper, *r.envelope + 1e-6);
}

}  // namespace

TEST(DensityRatio, DerivativeMatchesFiniteDifference) {
  const auto x = DistributionSpec::von_mises(Angle{}, 2.0);
  const auto y = DistributionSpec::bingham(Angle{}, 1.0);
  const SteinContext ctx(x, Angle{}, grid());
  const DensityRatio r = density_ratio(ctx, y);
  auto pi0 = [&](double t) { return y.density(t) / x.density(t); };
  for (std::size_t j = 100; j < r.nodes.size(); j += 700) {
    const double t = r.nodes[j];
    EXPECT_NEAR(r.pi0[j], pi0(t), 1e-14);
    const double fd = (pi0(t + 1e-5) - pi0(t - 1e-5)) / 2e-5;
    EXPECT_NEAR(r.pi0_prime[j], fd, 1e-8);
  }
}

TEST(DensityRatio, RejectsVanishingDensity) {
  const SteinContext ctx(DistributionSpec::cardioid(Angle{}, 0.5), grid());
  EXPECT_THROW(density_ratio(ctx, DistributionSpec::uniform()), ContractError);
}

TEST(Sandwich, IdenticalLawsGiveZero) {
  const auto x = DistributionSpec::wrapped_normal(Angle(1.0), 0.8);
  const BoundReport r = sandwich_bounds(x, x, grid());
  EXPECT_NEAR(r.lower, 0.0, 1e-14);
  EXPECT_NEAR(r.upper, 0.0, 1e-14);
  EXPECT_NEAR(*r.oracle_w1, 0.0, 1e-9);
}

TEST(Sandwich, VonMisesBingham) {
  const auto x = DistributionSpec::von_mises(Angle{}, 2.0);
  const auto y = DistributionSpec::bingham(Angle{}, 1.0);
  const BoundReport r = sandwich_bounds(x, y, grid());
  ASSERT_TRUE(r.envelope.has_value());
  EXPECT_NEAR(*r.envelope, 4.0 * kPi, 1e-12);
  EXPECT_LE(r.upper, 4.0 * kPi);
  expect_sandwich(x, y);
}

TEST(Sandwich, ManyPairs) {
  expect_sandwich(DistributionSpec::von_mises(Angle{}, 2.0), DistributionSpec::wrapped_normal(Angle{}, 0.5));
  expect_sandwich(DistributionSpec::wrapped_cauchy(Angle{}, 1.0), DistributionSpec::wrapped_normal(Angle{}, 1.0));
  expect_sandwich(DistributionSpec::von_mises(Angle{}, 2.0), DistributionSpec::von_mises(Angle(0.3), 2.0));
  expect_sandwich(DistributionSpec::von_mises(Angle(2.0), 1.0), DistributionSpec::cardioid(Angle(2.5), 0.3));
  expect_sandwich(DistributionSpec::bingham(Angle{}, 1.5), DistributionSpec::uniform());
  expect_sandwich(DistributionSpec::wrapped_normal(Angle(-1.0), 0.3), DistributionSpec::wrapped_cauchy(Angle(-0.8), 0.4));
}

TEST(Sandwich, OracleAgreesWithIndependentW1) {
  const auto x = DistributionSpec::von_mises(Angle{}, 2.0);
  const auto y = DistributionSpec::wrapped_normal(Angle{}, 0.5);
  const BoundReport r = sandwich_bounds(x, y, grid());
  const double ref = oracle::circular_w1([&](double t) { return x.density(t); }, [&](double t) { return y.density(t); });
  EXPECT_NEAR(*r.oracle_w1, ref, 1e-7);
}

TEST(Sandwich, DegenerateBaseNeedsLocation) {
  const auto bare = DistributionSpec::from_json(R"({"family":"bingham","concentration":1})");
  EXPECT_THROW(sandwich_bounds(bare, DistributionSpec::von_mises(Angle{}, 1.0), grid()), ContractError);
  const auto placed = DistributionSpec::from_json(R"({"family":"bingham","location":0,"concentration":1})");
  EXPECT_NO_THROW(sandwich_bounds(placed, DistributionSpec::von_mises(Angle{}, 1.0), grid()));
}

TEST(Sandwich, ReportJson) {
  const BoundReport r = sandwich_bounds(DistributionSpec::von_mises(Angle{}, 2.0),
                                        DistributionSpec::wrapped_normal(Angle(0.1), 0.5), grid(),
                                        {.with_oracle = false});
  const std::string j = r.to_json();
  for (const char* key : {"\"lower\"", "\"upper\"", "\"oracle_w1\":null", "\"envelope\":null", "\"base\"",
                          "\"target\"", "\"grid_size\":4096", "\"tolerances\""}) {
    EXPECT_NE(j.find(key), std::string::npos) << key << " in " << j;
  }
}

TEST(LowerBoundViaSin, RotatedVonMises) {
  const auto x = DistributionSpec::von_mises(Angle{}, 2.0);
  EXPECT_NEAR(lower_bound_via_sin(x, x, grid()), 0.0, 1e-15);
  const auto y = DistributionSpec::von_mises(Angle(0.3), 2.0);
  EXPECT_NEAR(lower_bound_via_sin(x, y, grid()),
              std::sin(0.3) * oracle::bessel_series(1, 2.0) / oracle::bessel_series(0, 2.0), 1e-10);
}

TEST(Envelopes, Formulas) {
  EXPECT_NEAR(envelope_vm_bingham(2.0, 1.0), 4.0 * kPi, 1e-12);
  EXPECT_NEAR(envelope_vm_bingham(1.0, 1e-12), kTwoPi, 1e-9);
  EXPECT_NEAR(envelope_vm_wn(1.0, 1.0), 2.0 * kPi * kPi * kPi + 2.0 * kPi, 1e-12);
  EXPECT_THROW(envelope_vm_wn(0.0, 1.0), DomainError);
}

TEST(Envelopes, VonMisesWrappedNormalLimit) {
  // With sigma^2 = kappa the extra term is 2 pi^3 / kappa^3 and vanishes as kappa grows.
  for (double k : {10.0, 100.0, 1000.0}) {
    EXPECT_NEAR(envelope_vm_wn(k, k), kTwoPi + 2.0 * kPi * kPi * kPi / (k * k * k), 1e-12);
  }
  // With sigma^2 = 1/kappa the extra term is 2 pi^3 kappa and grows without bound.
  EXPECT_GT(envelope_vm_wn(1e6, 1e-6), 1e7);
}

TEST(Envelopes, WrappedNormalWrappedCauchyBranches) {
  const double gs = wn_wc_branch_point();
  EXPECT_NEAR(std::cosh(gs), (std::numbers::e + 1.0) / (std::numbers::e - 1.0), 1e-14);
  for (double s2 : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(envelope_wn_wc(s2, gs * (1 - 1e-14)), envelope_wn_wc(s2, gs * (1 + 1e-14)), 1e-10);
  }
  const double c = std::cosh(0.5);
  EXPECT_NEAR(envelope_wn_wc(1.0, 0.5),
              kTwoPi / std::numbers::e * (c + 1.0) * (1.0 / (c - 1.0) + kPi * kPi), 1e-10);
}

TEST(Envelopes, LargeParametersGiveSmallDistance) {
  const double env = envelope_wn_wc(25.0, 10.0);
  EXPECT_LT(env, 0.25);
  const auto wn = DistributionSpec::wrapped_normal(Angle{}, 25.0);
  const auto wc = DistributionSpec::wrapped_cauchy(Angle{}, 10.0);
  const BoundReport r = sandwich_bounds(wc, wn, grid());
  EXPECT_LT(*r.oracle_w1, 1e-4);
  EXPECT_LE(*r.oracle_w1, env);
}

TEST(Envelopes, CoshSeriesBound) {
  for (double s2 : {0.5, 1.0, 2.0}) {
    double direct = 0.0;
    for (int n = 1; n < 100000; ++n) direct += 1.0 / (std::cosh(s2 * (n - 0.5)) - 1.0);
    EXPECT_NEAR(wn_cosh_series(s2), direct, 1e-12 * direct);
    EXPECT_LE(wn_cosh_series(s2), wn_cosh_series_bound(s2));
  }
}

TEST(Bayes, SingleObservation) {
  const Angle data[] = {Angle(0.0)};
  const PosteriorSpec p = bayes_posteriors(data, 2.0, 1.5);
  EXPECT_EQ(p.C_bar, 1.0);
  EXPECT_EQ(p.S_bar, 0.0);
  EXPECT_EQ(p.psi.radians(), 0.0);
  EXPECT_EQ(p.R, 1.0);
  EXPECT_EQ(p.psi_star.radians(), 0.0);
  EXPECT_DOUBLE_EQ(p.R_star, 3.5);
  EXPECT_NEAR(bayes_envelope(data, 1.0, 1.0), kTwoPi, 1e-15);
  EXPECT_NEAR(bayes_envelope(data, 1.0, 1e-300), 0.0, 1e-290);
}

TEST(Bayes, AntipodalDataRejected) {
  const Angle data[] = {Angle(kPi / 2), Angle(-kPi / 2)};
  EXPECT_THROW(bayes_posteriors(data, 1.0, 1.0), ContractError);
  EXPECT_THROW(bayes_posteriors({}, 1.0, 1.0), ContractError);
}

TEST(Bayes, Invariants) {
  const auto data = sample(DistributionSpec::von_mises(Angle(2.8), 1.0), 57, 11, grid());
  const PosteriorSpec p = bayes_posteriors(data, 1.3, 4.0);
  const double n = static_cast<double>(p.n);
  EXPECT_NEAR(p.R * p.R, n * n * (p.C_bar * p.C_bar + p.S_bar * p.S_bar), 1e-12 * p.R * p.R);
  const double kr = p.kappa * p.R;
  EXPECT_NEAR(p.R_star * p.R_star,
              kr * kr + p.kappa_star * p.kappa_star + 2.0 * kr * p.kappa_star * std::cos(p.psi.radians()),
              1e-12 * p.R_star * p.R_star);
  // Quadrant-correct direction near the data location.
  EXPECT_NEAR(p.psi.radians(), std::atan2(p.S_bar, p.C_bar), 1e-15);
  EXPECT_LT(std::abs((p.psi - Angle(2.8)).radians()), 0.6);
}

TEST(Bayes, ResultantConvergesToBesselRatio) {
  const auto data = sample(DistributionSpec::von_mises(Angle(0.5), 2.0), 100, 7, grid());
  const PosteriorSpec p = bayes_posteriors(data, 2.0, 1.0);
  EXPECT_NEAR(p.R / 100.0, bessel_i1(2.0) / bessel_i0(2.0), 0.1);
}

TEST(Bayes, ExperimentUsesNestedData) {
  const std::size_t ns[] = {100, 400};
  const auto rows = bayes_experiment(DistributionSpec::von_mises(Angle(0.5), 2.0), ns, 2.0, 1.0, 7, grid());
  ASSERT_EQ(rows.size(), 2u);
  const auto data = sample(DistributionSpec::von_mises(Angle(0.5), 2.0), 400, 7, grid());
  const PosteriorSpec small = bayes_posteriors(std::span(data).first(100), 2.0, 1.0);
  EXPECT_EQ(rows[0].posterior.kappa_R, small.kappa_R);
  for (const auto& r : rows) EXPECT_LE(r.oracle_w1, r.envelope);
}
