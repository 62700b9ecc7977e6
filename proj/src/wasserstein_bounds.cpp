#include "circstein/wasserstein_bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "circstein/errors.hpp"
#include "circstein/w1_oracle.hpp"

namespace circstein {

namespace {

constexpr double kResultantFloor = 1e-12;
constexpr double kSameLocation = 1e-12;

bool same_location(const DistributionSpec& a, const DistributionSpec& b) {
  return std::abs(wrap(a.location().radians() - b.location().radians())) < kSameLocation;
}

Angle base_frame(const DistributionSpec& base, const QuadratureGrid& grid) {
  const MeanAngle mean = mean_angle(base, grid);
  if (mean.degenerate && !base.location_given()) {
    throw ContractError("sandwich_bounds: base law " + base.describe() +
                        " has no mean direction; give its location explicitly");
  }
  return mean.angle;
}

}  // namespace

DensityRatio density_ratio(const SteinContext& base, const DistributionSpec& target) {
  const FramedDistribution other(target, base.frame());
  const QuadratureGrid& grid = base.grid();
  DensityRatio out;
  out.nodes.assign(grid.nodes().begin(), grid.nodes().end());
  const std::size_t n = out.nodes.size();
  out.pi0.resize(n);
  out.pi0_prime.resize(n);
  out.log_pi0_prime.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = out.nodes[j];
    const double p1 = base.density(x);
    const double p2 = other.density(x);
    if (p1 == 0.0 || p2 == 0.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "density_ratio: " << (p1 == 0.0 ? "base" : "target")
          << " density vanishes at x = " << x << "; both laws need full support";
      throw ContractError(msg.str());
    }
    out.pi0[j] = p2 / p1;
    out.log_pi0_prime[j] = other.score(x) - base.score(x);
    out.pi0_prime[j] = out.pi0[j] * out.log_pi0_prime[j];
  }
  return out;
}

BoundReport sandwich_bounds(const DistributionSpec& base, const DistributionSpec& target,
                            const QuadratureGrid& grid, BoundOptions options) {
  const Angle frame = base_frame(base, grid);
  const SteinContext ctx(base, frame, grid);
  const FramedDistribution other(target, frame);
  const DensityRatio ratio = density_ratio(ctx, target);
  const std::vector<double> s = ctx.sine_table().anchored_at_nodes();
  const std::vector<double> m = ctx.moment_table().anchored_at_nodes();

  BoundReport r{.oracle_w1 = std::nullopt,
                .envelope = std::nullopt,
                .base = base,
                .target = target,
                .grid_size = grid.size(),
                .frame = frame,
                .tolerances = {}};
  r.tolerances.band_halfwidth = 0.5 * grid.spacing();

  const double h = grid.spacing();
  double lower = 0.0;
  double upper = 0.0;
  double upper_target = 0.0;
  for (std::size_t j = 0; j < ratio.nodes.size(); ++j) {
    const double x = ratio.nodes[j];
    const double p1 = ctx.density(x);
    const double tau = s[j] / p1;
    lower += tau * ratio.pi0_prime[j] * p1;
    if (std::abs(x) <= kPi - r.tolerances.band_halfwidth) {
      const double a = m[j] / s[j];
      upper += std::abs(a * ratio.pi0_prime[j] * tau) * p1;
      upper_target += std::abs(a * ratio.log_pi0_prime[j] * tau) * other.density(x);
    } else {
      // alpha tau^c p1 = m, which is finite and vanishes at +-pi.
      upper += std::abs(m[j] * ratio.pi0_prime[j]);
      upper_target += std::abs(m[j] * ratio.log_pi0_prime[j]) * ratio.pi0[j];
    }
  }
  r.lower = std::abs(lower * h);
  r.upper = upper * h;
  r.upper_target_form = upper_target * h;
  r.lower_via_sin = lower_bound_via_sin(base, target, grid);

  if (options.with_oracle) r.oracle_w1 = circular_w1(base, target, grid).value;
  if (options.with_envelope) r.envelope = matching_envelope(base, target);
  return r;
}

double lower_bound_via_sin(const DistributionSpec& base, const DistributionSpec& target,
                           const QuadratureGrid& grid) {
  const FramedDistribution other(target, base_frame(base, grid));
  return std::abs(periodic_quadrature([&](double x) { return std::sin(x) * other.density(x); }, grid));
}

std::string BoundReport::to_json() const {
  auto optional = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::ordered_json j;
  j["base"] = nlohmann::ordered_json::parse(base.to_json());
  j["target"] = nlohmann::ordered_json::parse(target.to_json());
  j["frame"] = frame.radians();
  j["grid_size"] = grid_size;
  j["lower"] = lower;
  j["lower_via_sin"] = lower_via_sin;
  j["oracle_w1"] = optional(oracle_w1);
  j["upper"] = upper;
  j["upper_target_form"] = upper_target_form;
  j["envelope"] = optional(envelope);
  j["tolerances"] = {{"band_halfwidth", tolerances.band_halfwidth},
                     {"route_agreement", tolerances.route_agreement},
                     {"sandwich_slack", tolerances.sandwich_slack}};
  return j.dump();
}

double envelope_vm_bingham(double kappa, double zeta) {
  if (!(kappa > 0.0) || !(zeta > 0.0)) {
    throw DomainError("envelope_vm_bingham: need kappa > 0 and zeta > 0");
  }
  return 4.0 * kPi * zeta / kappa + kTwoPi;
}

double envelope_vm_wn(double kappa, double sigma2) {
  if (!(kappa > 0.0) || !(sigma2 > 0.0)) {
    throw DomainError("envelope_vm_wn: need kappa > 0 and sigma2 > 0");
  }
  return 2.0 * kPi * kPi * kPi / (kappa * sigma2 * sigma2) + kTwoPi;
}

double wn_wc_branch_point() {
  constexpr double e = std::numbers::e;
  return std::acosh((e + 1.0) / (e - 1.0));
}

double envelope_wn_wc(double sigma2, double gamma) {
  if (!(sigma2 > 0.0) || !(gamma > 0.0)) {
    throw DomainError("envelope_wn_wc: need sigma2 > 0 and gamma > 0");
  }
  const double c = std::cosh(gamma);
  const double tail = 1.0 / (c - 1.0) + wn_cosh_series_bound(sigma2);
  if (gamma <= wn_wc_branch_point()) {
    return kTwoPi / std::numbers::e * (c + 1.0) * tail;
  }
  return kTwoPi * (c - 1.0) * std::abs(std::log((c - 1.0) / (c + 1.0))) * tail;
}

double wn_cosh_series(double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("wn_cosh_series: need sigma2 > 0");
  double sum = 0.0;
  for (int n = 1; n < 100'000'000; ++n) {
    const double sh = std::sinh(0.5 * sigma2 * (n - 0.5));
    const double term = 1.0 / (2.0 * sh * sh);
    sum += term;
    if (term < 1e-17 * sum) return sum;
  }
  throw NumericError("wn_cosh_series: no convergence");
}

double wn_cosh_series_bound(double sigma2) { return kPi * kPi / (sigma2 * sigma2); }

std::optional<double> matching_envelope(const DistributionSpec& base, const DistributionSpec& target) {
  if (!same_location(base, target)) return std::nullopt;
  const double a = base.concentration();
  const double b = target.concentration();
  if (base.family() == Family::VonMises && target.family() == Family::Bingham) {
    return envelope_vm_bingham(a, b);
  }
  if (base.family() == Family::VonMises && target.family() == Family::WrappedNormal) {
    return envelope_vm_wn(a, b);
  }
  if (base.family() == Family::WrappedCauchy && target.family() == Family::WrappedNormal) {
    return envelope_wn_wc(b, a);
  }
  return std::nullopt;
}

PosteriorSpec bayes_posteriors(std::span<const Angle> data, double kappa, double kappa_star) {
  if (data.empty()) throw ContractError("bayes_posteriors: no data");
  if (!(kappa > 0.0) || !(kappa_star > 0.0)) {
    throw ContractError("bayes_posteriors: kappa and kappa_star must be > 0");
  }
  PosteriorSpec p;
  p.n = data.size();
  p.kappa = kappa;
  p.kappa_star = kappa_star;
  double c = 0.0;
  double s = 0.0;
  for (Angle a : data) {
    c += std::cos(a.radians());
    s += std::sin(a.radians());
  }
  const double n = static_cast<double>(p.n);
  p.C_bar = c / n;
  p.S_bar = s / n;
  const double rho = std::hypot(p.C_bar, p.S_bar);
  if (!(rho >= kResultantFloor)) {
    throw ContractError("bayes_posteriors: data resultant length below 1e-12, mean direction undefined");
  }
  p.R = n * rho;
  p.psi = Angle(std::atan2(p.S_bar, p.C_bar));
  p.kappa_R = kappa * p.R;
  const double x = p.kappa_R * std::cos(p.psi.radians()) + kappa_star;
  const double y = p.kappa_R * std::sin(p.psi.radians());
  p.R_star = std::hypot(x, y);
  if (!(p.R_star > 0.0)) {
    throw ContractError("bayes_posteriors: prior cancels the data, model 2 posterior is uniform");
  }
  p.psi_star = Angle(std::atan2(y, x));
  return p;
}

double bayes_envelope(const PosteriorSpec& posterior) {
  return kTwoPi * posterior.kappa_star / (posterior.kappa * posterior.R);
}

double bayes_envelope(std::span<const Angle> data, double kappa, double kappa_star) {
  return bayes_envelope(bayes_posteriors(data, kappa, kappa_star));
}

std::vector<BayesRow> bayes_experiment(const DistributionSpec& data_law,
                                       std::span<const std::size_t> sizes, double kappa,
                                       double kappa_star, std::uint64_t seed,
                                       const QuadratureGrid& grid) {
  std::size_t largest = 0;
  for (std::size_t n : sizes) largest = std::max(largest, n);
  const std::vector<Angle> data = sample(data_law, largest, seed, grid);
  std::vector<BayesRow> rows;
  rows.reserve(sizes.size());
  for (std::size_t n : sizes) {
    BayesRow row;
    row.n = n;
    row.posterior = bayes_posteriors(std::span(data).first(n), kappa, kappa_star);
    row.envelope = bayes_envelope(row.posterior);
    row.oracle_w1 = circular_w1(row.posterior.model1(), row.posterior.model2(), grid).value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace circstein
