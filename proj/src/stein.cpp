#include "circstein/stein.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "circstein/errors.hpp"
#include "circstein/special_functions.hpp"

namespace circstein {

namespace {

constexpr double kCentringTolerance = 1e-8;
constexpr double kKernelGuard = 1e-12;

}  // namespace

SteinContext::SteinContext(const DistributionSpec& dist, const QuadratureGrid& grid)
    : SteinContext(dist, mean_angle(dist, grid).angle, grid) {}

SteinContext::SteinContext(const DistributionSpec& dist, Angle frame, const QuadratureGrid& grid)
    : law_(dist, frame), grid_(grid), nu_(circstein::euclidean_mean(law_, grid_)) {
  moment_ = std::make_shared<const CumulativeIntegral>(
      [law = law_, nu = nu_](double y) { return (nu - y) * law.density(y); }, grid_);
  sine_ = std::make_shared<const CumulativeIntegral>(
      [law = law_](double y) { return -std::sin(y) * law.density(y); }, grid_);
}

double SteinContext::expectation(const RealFunction& g) const {
  return periodic_quadrature([&](double x) { return g(x) * law_.density(x); }, grid_);
}

double stein_operator(const FramedDistribution& law, const DiffFunction& f, double x) {
  if (law.density(x) == 0.0) return f.value(x);
  return f.derivative(x) + law.score(x) * f.value(x);
}

InverseOperator::InverseOperator(const SteinContext& ctx, RealFunction h, std::optional<double> anchor)
    : law_(ctx.law()), h_(std::move(h)) {
  integral_ = std::make_shared<const CumulativeIntegral>(
      [law = law_, h = h_](double y) { return h(y) * law.density(y); }, ctx.grid());
  const double mean = integral_->total();
  if (!(std::abs(mean) < kCentringTolerance)) {
    std::ostringstream msg;
    msg << "inverse_operator: h must be centred under P, |E[h]| = " << std::abs(mean)
        << " >= 1e-8";
    throw ContractError(msg.str());
  }
  anchor_ = anchor.value_or(h_(-kPi));
  p_minus_pi_ = law_.density(-kPi);
}

double InverseOperator::operator()(double x) const {
  const double p = law_.density(x);
  if (p == 0.0) return h_(x);
  return (integral_->anchored(x) + anchor_ * p_minus_pi_) / p;
}

double inverse_operator(const SteinContext& ctx, const RealFunction& h, double x) {
  return InverseOperator(ctx, h)(x);
}

double classical_kernel(const SteinContext& ctx, double x) {
  const double nu = ctx.euclidean_mean();
  const double p = ctx.density(x);
  if (p == 0.0) return nu - x;
  return (ctx.moment_table().forward(x) + (nu + kPi) * ctx.density(-kPi)) / p;
}

double classical_kernel_backward(const SteinContext& ctx, double x) {
  const double nu = ctx.euclidean_mean();
  const double p = ctx.density(x);
  if (p == 0.0) return nu - x;
  return (-ctx.moment_table().backward(x) + (nu + kPi) * ctx.density(kPi)) / p;
}

double circular_kernel_numeric(const SteinContext& ctx, double x) {
  const double p = ctx.density(x);
  if (p == 0.0) return -std::sin(x);
  return ctx.sine_integral(x) / p;
}

bool has_closed_circular_kernel(Family family) {
  return family == Family::Uniform || family == Family::VonMises || family == Family::Bingham ||
         family == Family::WrappedCauchy;
}

double circular_kernel_closed(Family family, double concentration, double x) {
  switch (family) {
    case Family::Uniform:
      return 1.0 + std::cos(x);
    case Family::VonMises: {
      const double c = std::cos(0.5 * x);
      return -std::expm1(-2.0 * concentration * c * c) / concentration;
    }
    case Family::Bingham: {
      const double root = std::sqrt(concentration);
      const double c = std::cos(x);
      return 0.5 * std::sqrt(std::numbers::pi) * std::exp(-concentration * c * c) / root *
             (erfi(root * c) + erfi(root));
    }
    case Family::WrappedCauchy: {
      // (cosh g - cos x) log((cosh g + 1) / (cosh g - cos x)) with
      // cosh g - cos x = 2 (sinh^2(g/2) + sin^2(x/2)), cosh g + 1 = 2 cosh^2(g/2).
      const double sh = std::sinh(0.5 * concentration);
      const double ch = std::cosh(0.5 * concentration);
      const double sx = std::sin(0.5 * x);
      const double t = sh * sh + sx * sx;
      return 2.0 * t * std::log(ch * ch / t);
    }
    default:
      break;
  }
  throw DomainError("circular_kernel_closed: no closed form for " + std::string(family_name(family)) +
                    "; use circular_kernel_numeric");
}

KernelEvaluation evaluate_kernels(const SteinContext& ctx, double x) {
  KernelEvaluation out;
  out.theta = x;
  out.tau_classical = classical_kernel(ctx, x);
  const DistributionSpec& spec = ctx.law().spec();
  const bool centred = std::abs(wrap(ctx.frame().radians() - spec.location().radians())) < 1e-12;
  if (centred && has_closed_circular_kernel(spec.family())) {
    out.tau_circular = circular_kernel_closed(spec.family(), spec.concentration(), x);
    out.method = KernelMethod::ClosedForm;
  } else {
    out.tau_circular = circular_kernel_numeric(ctx, x);
    out.method = KernelMethod::Quadrature;
  }
  return out;
}

SteinSolution stein_solution(const SteinContext& ctx, const RealFunction& h) {
  const FramedDistribution law = ctx.law();
  const QuadratureGrid& grid = ctx.grid();
  const double mean_h =
      CumulativeIntegral([&](double y) { return h(y) * law.density(y); }, grid).total();
  auto table = std::make_shared<const CumulativeIntegral>(
      [law, h, mean_h](double y) { return (h(y) - mean_h) * law.density(y); }, grid);

  SteinSolution sol;
  sol.mean_h = mean_h;
  sol.f = [law, h, mean_h, table](double x) {
    const double p = law.density(x);
    if (p == 0.0) return h(x) - mean_h;
    return table->anchored(x) / p;
  };

  const std::size_t n = grid.size();
  sol.nodes.assign(grid.nodes().begin(), grid.nodes().end());
  sol.f_h.resize(n);
  sol.g_h.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = sol.nodes[j];
    sol.f_h[j] = sol.f(x);
    if (j + 1 == n) {
      sol.g_h[j] = n >= 2 ? sol.g_h[j - 1] : 0.0;
      continue;
    }
    const double tau = circular_kernel_numeric(ctx, x);
    if (!(tau >= kKernelGuard)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "stein_solution: circular kernel " << tau << " below 1e-12 at interior node " << x;
      throw NumericError(msg.str());
    }
    sol.g_h[j] = sol.f_h[j] / tau;
  }
  return sol;
}

AlphaEvaluation alpha(const SteinContext& ctx, double x) {
  const double band = 0.5 * ctx.grid().spacing();
  if (std::abs(x) > kPi - band) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpha: x = " << x << " lies within " << band
        << " of +-pi where alpha is singular; bound |alpha sin| by 2 pi instead";
    throw DomainError(msg.str());
  }
  if (!(std::abs(ctx.euclidean_mean()) < kCentringTolerance)) {
    std::ostringstream msg;
    msg << "alpha: requires E[X] = 0 in mu-coordinates (got " << ctx.euclidean_mean() << ")";
    throw ContractError(msg.str());
  }
  AlphaEvaluation out;
  out.theta = x;
  out.alpha = ctx.moment_integral(x) / ctx.sine_integral(x);
  out.alpha_sin = out.alpha * std::sin(x);
  return out;
}

}  // namespace circstein
