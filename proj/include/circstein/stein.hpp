#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "circstein/circle.hpp"
#include "circstein/distribution.hpp"

namespace circstein {

/// A function together with its derivative, as the Stein operator needs both.
struct DiffFunction {
  RealFunction value;
  RealFunction derivative;
};

/// A law in its mu-coordinate system plus the cumulative tables every Stein
/// quantity shares:
///   moment table  m(x) = int_{-pi}^x (nu - y) p(y) dy
///   sine table    s(x) = int_{-pi}^x -sin(y) p(y) dy
/// Both integrands have total zero, so both are read through
/// CumulativeIntegral::anchored(). Immutable after construction.
class SteinContext {
 public:
  /// Frames the law at its mean angle (location parameter if degenerate).
  SteinContext(const DistributionSpec& dist, const QuadratureGrid& grid);
  /// Frames the law at an explicit angle.
  SteinContext(const DistributionSpec& dist, Angle frame, const QuadratureGrid& grid);

  const FramedDistribution& law() const { return law_; }
  const QuadratureGrid& grid() const { return grid_; }
  Angle frame() const { return law_.frame(); }
  /// Euclidean mean nu of the framed law.
  double euclidean_mean() const { return nu_; }

  double density(double x) const { return law_.density(x); }
  double score(double x) const { return law_.score(x); }

  double moment_integral(double x) const { return moment_->anchored(x); }
  double sine_integral(double x) const { return sine_->anchored(x); }
  const CumulativeIntegral& moment_table() const { return *moment_; }
  const CumulativeIntegral& sine_table() const { return *sine_; }

  /// E_P[g] by periodic trapezoid (g should be smooth and periodic).
  double expectation(const RealFunction& g) const;

 private:
  FramedDistribution law_;
  QuadratureGrid grid_;
  double nu_;
  std::shared_ptr<const CumulativeIntegral> moment_;
  std::shared_ptr<const CumulativeIntegral> sine_;
};

/// T_p f(x) = f'(x) + (log p)'(x) f(x); f(x) where the density vanishes.
double stein_operator(const FramedDistribution& law, const DiffFunction& f, double x);

/// T_p^{-1} h for a P-centred h, tabulated once.
///
///   T_p^{-1} h(x) = (1/p(x)) [ int_{-pi}^x h p dy + anchor p(-pi) ]
///
/// The anchor defaults to h(-pi). Adding C/p(x) to the result (any C) leaves
/// T_p of it unchanged, so a different anchor picks another preimage; passing
/// f(-pi) recovers f from T_p f.
class InverseOperator {
 public:
  /// Throws ContractError if |E_P[h]| >= 1e-8.
  InverseOperator(const SteinContext& ctx, RealFunction h, std::optional<double> anchor = std::nullopt);

  double operator()(double x) const;
  double anchor() const { return anchor_; }

 private:
  FramedDistribution law_;
  RealFunction h_;
  std::shared_ptr<const CumulativeIntegral> integral_;
  double anchor_;
  double p_minus_pi_;
};

double inverse_operator(const SteinContext& ctx, const RealFunction& h, double x);

/// Classical kernel tau = T_p^{-1}(nu - Id); forward form (from -pi).
double classical_kernel(const SteinContext& ctx, double x);
/// The same kernel written with the integral from x to pi.
double classical_kernel_backward(const SteinContext& ctx, double x);

/// tau^c(x) = (1/p(x)) int_x^pi sin(y) p(y) dy, by quadrature.
double circular_kernel_numeric(const SteinContext& ctx, double x);

/// Closed-form circular kernel in mu-coordinates for the von Mises, uniform,
/// Bingham and wrapped Cauchy families. Throws DomainError for the others.
double circular_kernel_closed(Family family, double concentration, double x);
bool has_closed_circular_kernel(Family family);

enum class KernelMethod { ClosedForm, Quadrature };

struct KernelEvaluation {
  double theta = 0.0;
  double tau_classical = 0.0;
  double tau_circular = 0.0;
  KernelMethod method = KernelMethod::Quadrature;
};

/// Both kernels at x; the circular one in closed form when available.
KernelEvaluation evaluate_kernels(const SteinContext& ctx, double x);

/// Solution of T_p f = h - E[h] with the constant chosen so that f(-pi) = 0,
/// tabulated on the context grid.
struct SteinSolution {
  std::vector<double> nodes;
  std::vector<double> f_h;
  /// f_h / tau^c; the value at pi continues the adjacent node.
  std::vector<double> g_h;
  double mean_h = 0.0;
  /// f_h at an arbitrary point.
  std::function<double(double)> f;
};

/// Throws NumericError if tau^c < 1e-12 at an interior node.
SteinSolution stein_solution(const SteinContext& ctx, const RealFunction& h);

struct AlphaEvaluation {
  double theta = 0.0;
  double alpha = 0.0;
  double alpha_sin = 0.0;
};

/// alpha(x) = m(x) / s(x), the ratio of the classical and circular kernel
/// numerators. Singular at +-pi: throws DomainError when |x| > pi - h/2.
/// Throws ContractError if the framed law has |nu| >= 1e-8.
AlphaEvaluation alpha(const SteinContext& ctx, double x);

/// sup |alpha(x) sin(x)| over the circle.
inline constexpr double kAlphaSinEnvelope = kTwoPi;

}  // namespace circstein
