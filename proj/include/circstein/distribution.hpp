#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circstein/circle.hpp"

namespace circstein {

enum class Family { Uniform, VonMises, Bingham, Cardioid, WrappedNormal, WrappedCauchy };

/// Canonical lower-case name ("von_mises", "wrapped_normal", ...).
std::string_view family_name(Family family);
/// Accepts canonical names and the short aliases vm, bing, wn, wc.
/// Throws InvalidArgument for anything else.
Family parse_family(std::string_view name);

/// A circular law from one of the six supported families.
///
/// `concentration` is family specific: kappa for von Mises, zeta for Bingham
/// (density proportional to exp(zeta cos^2(x - mu))), rho for the cardioid
/// (|rho| <= 1/2), the variance sigma^2 for the wrapped normal and gamma for
/// the wrapped Cauchy. It is ignored for the uniform law.
class DistributionSpec {
 public:
  /// Validates parameters; throws InvalidArgument naming the violated bound.
  DistributionSpec(Family family, Angle location, double concentration,
                   bool location_given = true);

  static DistributionSpec uniform(Angle location = Angle{});
  static DistributionSpec von_mises(Angle location, double kappa);
  static DistributionSpec bingham(Angle location, double zeta);
  static DistributionSpec cardioid(Angle location, double rho);
  static DistributionSpec wrapped_normal(Angle location, double sigma2);
  static DistributionSpec wrapped_cauchy(Angle location, double gamma);

  Family family() const { return family_; }
  Angle location() const { return location_; }
  double concentration() const { return concentration_; }
  /// False only when built from JSON without a "location" key.
  bool location_given() const { return location_given_; }

  /// Lebesgue density at theta (standard coordinates).
  double density(double theta) const;
  /// (log p)'(theta) in standard coordinates.
  double score(double theta) const;

  /// Density and score of the law re-centred at its location parameter,
  /// i.e. p(x; 0). Both are even/odd in x respectively.
  double centered_density(double x) const;
  double centered_score(double x) const;

  /// Same law, different location.
  DistributionSpec rotated_to(Angle location) const;

  /// "von_mises(location=0, concentration=2)"
  std::string describe() const;

  /// {"family": ..., "location": ..., "concentration": ...}
  std::string to_json() const;
  static DistributionSpec from_json(std::string_view text);

  friend bool operator==(const DistributionSpec& a, const DistributionSpec& b) {
    return a.family_ == b.family_ && a.location_ == b.location_ &&
           a.concentration_ == b.concentration_;
  }

 private:
  Family family_;
  Angle location_;
  double concentration_;
  bool location_given_;
  double log_normalizer_ = 0.0;  // family specific cached constant
};

// Wrapped normal density, two independent routes. Both take theta relative to
// the mean and the variance sigma2 > 0; both throw NumericError if their
// truncation does not converge within the term cap.
double wn_density_series(double theta, double sigma2);
double wn_density_triple_product(double theta, double sigma2);
/// -sin(theta) sum_{n>=1} 1 / (cosh(sigma2 (n - 1/2)) + cos(theta)).
/// Requires sigma2 >= 0.01.
double wn_score_series(double theta, double sigma2);

/// A law viewed in the chart centred at `frame`: density(x) is the density of
/// the original law at the standard angle x + frame.
class FramedDistribution {
 public:
  FramedDistribution(DistributionSpec dist, Angle frame);

  const DistributionSpec& spec() const { return dist_; }
  Angle frame() const { return frame_; }

  double density(double x) const;
  double score(double x) const;

 private:
  DistributionSpec dist_;
  Angle frame_;
  double offset_;  // frame - location, wrapped
};

/// (integral of cos(k x) p, integral of sin(k x) p) in standard coordinates.
std::complex<double> trig_moment(const DistributionSpec& dist, int k, const QuadratureGrid& grid);

struct MeanAngle {
  Angle angle;
  double resultant_length = 0.0;
  /// True when the resultant length is below 1e-8; angle is then the
  /// location parameter.
  bool degenerate = false;
};

MeanAngle mean_angle(const DistributionSpec& dist, const QuadratureGrid& grid);

/// The law in its own mu-coordinate system (frame = mean angle).
FramedDistribution mu_frame(const DistributionSpec& dist, const QuadratureGrid& grid);

/// nu = integral over (-pi, pi] of x p(x) dx for a framed law.
double euclidean_mean(const FramedDistribution& law, const QuadratureGrid& grid);

/// Tabulated CDF in standard coordinates, F(theta) = integral from -pi.
class CdfTable {
 public:
  CdfTable(const DistributionSpec& dist, const QuadratureGrid& grid);

  double operator()(double theta) const;
  /// F at every grid node.
  const std::vector<double>& at_nodes() const { return at_nodes_; }
  /// Smallest theta in (-pi, pi] with F(theta) = u, u in [0, 1].
  double inverse(double u) const;

 private:
  DistributionSpec dist_;
  CumulativeIntegral integral_;
  std::vector<double> at_nodes_;
};

double cdf(const DistributionSpec& dist, double theta, const QuadratureGrid& grid);

/// Inverse-CDF sampling on a tabulated CDF. Deterministic for a given seed.
std::vector<Angle> sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed,
                          const QuadratureGrid& grid = QuadratureGrid{});

}  // namespace circstein
