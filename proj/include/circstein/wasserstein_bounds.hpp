#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circstein/circle.hpp"
#include "circstein/distribution.hpp"
#include "circstein/stein.hpp"

namespace circstein {

/// pi0 = p_target / p_base on the grid, both read in the base's mu-frame.
struct DensityRatio {
  std::vector<double> nodes;
  std::vector<double> pi0;
  std::vector<double> pi0_prime;
  /// score_target - score_base
  std::vector<double> log_pi0_prime;
};

/// Throws ContractError if either density vanishes at a grid node.
DensityRatio density_ratio(const SteinContext& base, const DistributionSpec& target);

struct BoundTolerances {
  /// Half-width of the band around +-pi where alpha is not evaluated.
  double band_halfwidth = 0.0;
  /// Agreement required between the two routes to each bound.
  double route_agreement = 1e-8;
  /// Slack allowed when comparing bounds with the W1 oracle or an envelope.
  double sandwich_slack = 1e-6;
};

/// Two-sided bound on d_W(target, base) with the kernel and alpha taken from
/// the base law X:
///
///   |E[tau^c(X) pi0'(X)]|  <=  d_W  <=  E[|alpha(X) pi0'(X) tau^c(X)|]
struct BoundReport {
  double lower = 0.0;
  /// |E_Y[sin]| in the base frame; equals `lower` by integration by parts.
  double lower_via_sin = 0.0;
  double upper = 0.0;
  /// E_Y[|alpha (log pi0)' tau^c|]; equals `upper` by change of measure.
  double upper_target_form = 0.0;
  std::optional<double> oracle_w1;
  std::optional<double> envelope;
  DistributionSpec base;
  DistributionSpec target;
  std::size_t grid_size = 0;
  Angle frame;
  BoundTolerances tolerances;

  std::string to_json() const;
};

struct BoundOptions {
  bool with_oracle = true;
  /// Attach the matching closed-form envelope when the pair has one.
  bool with_envelope = true;
};

/// Throws ContractError if the base has a degenerate mean angle and no
/// explicit location, or if either law is not of full support on the grid.
BoundReport sandwich_bounds(const DistributionSpec& base, const DistributionSpec& target,
                            const QuadratureGrid& grid, BoundOptions options = {});

/// |E_Y[sin(theta - mu_X)]|.
double lower_bound_via_sin(const DistributionSpec& base, const DistributionSpec& target,
                           const QuadratureGrid& grid);

// Closed-form envelopes.
double envelope_vm_bingham(double kappa, double zeta);
double envelope_vm_wn(double kappa, double sigma2);
double envelope_wn_wc(double sigma2, double gamma);
/// arccosh((e + 1) / (e - 1)), where envelope_wn_wc switches branch.
double wn_wc_branch_point();

/// sum_{n>=1} 1 / (cosh(sigma2 (n - 1/2)) - 1), summed directly.
double wn_cosh_series(double sigma2);
/// pi^2 / sigma^4, the closed-form majorant of wn_cosh_series.
double wn_cosh_series_bound(double sigma2);

/// Envelope for (base, target) when the pair matches one of the closed forms:
/// VM base with Bingham or wrapped-normal target, WC base with wrapped-normal
/// target, all at a common location.
std::optional<double> matching_envelope(const DistributionSpec& base, const DistributionSpec& target);

/// Posteriors of the von Mises mean under a uniform prior (model 1) and a
/// VM(0, kappa_star) prior (model 2), for data with known concentration kappa.
struct PosteriorSpec {
  Angle psi;
  double kappa_R = 0.0;
  Angle psi_star;
  double R_star = 0.0;
  double C_bar = 0.0;
  double S_bar = 0.0;
  double R = 0.0;
  std::size_t n = 0;
  double kappa = 0.0;
  double kappa_star = 0.0;

  DistributionSpec model1() const { return DistributionSpec::von_mises(psi, kappa_R); }
  DistributionSpec model2() const { return DistributionSpec::von_mises(psi_star, R_star); }
};

/// Throws ContractError for empty data, non-positive concentrations or data
/// whose resultant vanishes.
PosteriorSpec bayes_posteriors(std::span<const Angle> data, double kappa, double kappa_star);

/// 2 pi kappa_star / (kappa n sqrt(C_bar^2 + S_bar^2)).
double bayes_envelope(std::span<const Angle> data, double kappa, double kappa_star);
double bayes_envelope(const PosteriorSpec& posterior);

struct BayesRow {
  std::size_t n = 0;
  PosteriorSpec posterior;
  double envelope = 0.0;
  double oracle_w1 = 0.0;
};

/// For each n, draws n points from `data_law` (same seed, so smaller data sets
/// are prefixes of larger ones), forms both posteriors, and reports the
/// envelope and the W1 oracle between them.
std::vector<BayesRow> bayes_experiment(const DistributionSpec& data_law,
                                       std::span<const std::size_t> sizes, double kappa,
                                       double kappa_star, std::uint64_t seed,
                                       const QuadratureGrid& grid);

}  // namespace circstein
