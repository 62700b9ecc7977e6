#include "circstein/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "circstein/errors.hpp"
#include "circstein/special_functions.hpp"

namespace circstein {

namespace {

constexpr long kWnTermCap = 1'000'000;
constexpr double kWnScoreMinVariance = 0.01;

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

[[noreturn]] void reject(Family family, const std::string& rule, double got) {
  std::ostringstream msg;
  msg << family_name(family) << ": " << rule << " (got " << format_number(got) << ")";
  throw InvalidArgument(msg.str());
}

// 1 + e^{-2g} - 2 e^{-g} cos x, written to stay accurate for small g and x.
double wc_denominator(double gamma, double x) {
  const double e = std::exp(-gamma);
  const double s = std::sin(0.5 * x);
  const double one_minus_e = -std::expm1(-gamma);
  return one_minus_e * one_minus_e + 4.0 * e * s * s;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Uniform: return "uniform";
    case Family::VonMises: return "von_mises";
    case Family::Bingham: return "bingham";
    case Family::Cardioid: return "cardioid";
    case Family::WrappedNormal: return "wrapped_normal";
    case Family::WrappedCauchy: return "wrapped_cauchy";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "uniform") return Family::Uniform;
  if (name == "von_mises" || name == "vm") return Family::VonMises;
  if (name == "bingham" || name == "bing") return Family::Bingham;
  if (name == "cardioid") return Family::Cardioid;
  if (name == "wrapped_normal" || name == "wn") return Family::WrappedNormal;
  if (name == "wrapped_cauchy" || name == "wc") return Family::WrappedCauchy;
  throw InvalidArgument("unknown family '" + std::string(name) +
                        "' (expected uniform, von_mises, bingham, cardioid, "
                        "wrapped_normal or wrapped_cauchy)");
}

DistributionSpec::DistributionSpec(Family family, Angle location, double concentration,
                                   bool location_given)
    : family_(family),
      location_(location),
      concentration_(concentration),
      location_given_(location_given) {
  if (!std::isfinite(concentration)) reject(family, "concentration must be finite", concentration);
  switch (family) {
    case Family::Uniform:
      concentration_ = 0.0;
      log_normalizer_ = std::log(kTwoPi);
      break;
    case Family::VonMises:
      if (!(concentration > 0.0)) reject(family, "concentration kappa must be > 0", concentration);
      log_normalizer_ = std::log(kTwoPi * bessel_i0e(concentration));
      break;
    case Family::Bingham:
      if (!(concentration > 0.0)) reject(family, "concentration zeta must be > 0", concentration);
      log_normalizer_ = std::log(kTwoPi * bessel_i0e(0.5 * concentration));
      break;
    case Family::Cardioid:
      if (!(std::abs(concentration) <= 0.5)) reject(family, "concentration rho must satisfy |rho| <= 1/2", concentration);
      break;
    case Family::WrappedNormal:
      if (!(concentration > 0.0)) reject(family, "variance sigma^2 must be > 0", concentration);
      break;
    case Family::WrappedCauchy:
      if (!(concentration > 0.0)) reject(family, "concentration gamma must be > 0", concentration);
      break;
  }
}

DistributionSpec DistributionSpec::uniform(Angle location) {
  return {Family::Uniform, location, 0.0};
}
DistributionSpec DistributionSpec::von_mises(Angle location, double kappa) {
  return {Family::VonMises, location, kappa};
}
DistributionSpec DistributionSpec::bingham(Angle location, double zeta) {
  return {Family::Bingham, location, zeta};
}
DistributionSpec DistributionSpec::cardioid(Angle location, double rho) {
  return {Family::Cardioid, location, rho};
}
DistributionSpec DistributionSpec::wrapped_normal(Angle location, double sigma2) {
  return {Family::WrappedNormal, location, sigma2};
}
DistributionSpec DistributionSpec::wrapped_cauchy(Angle location, double gamma) {
  return {Family::WrappedCauchy, location, gamma};
}

DistributionSpec DistributionSpec::rotated_to(Angle location) const {
  DistributionSpec out = *this;
  out.location_ = location;
  out.location_given_ = true;
  return out;
}

double DistributionSpec::centered_density(double x) const {
  const double c = concentration_;
  switch (family_) {
    case Family::Uniform:
      return 1.0 / kTwoPi;
    case Family::VonMises:
      return std::exp(c * (std::cos(x) - 1.0) - log_normalizer_);
    case Family::Bingham: {
      const double s = std::sin(x);
      return std::exp(-c * s * s - log_normalizer_);
    }
    case Family::Cardioid:
      return std::max(0.0, (1.0 + 2.0 * c * std::cos(x)) / kTwoPi);
    case Family::WrappedNormal:
      return wn_density_triple_product(x, c);
    case Family::WrappedCauchy:
      return -std::expm1(-2.0 * c) / (kTwoPi * wc_denominator(c, x));
  }
  return 0.0;
}

double DistributionSpec::centered_score(double x) const {
  const double c = concentration_;
  switch (family_) {
    case Family::Uniform:
      return 0.0;
    case Family::VonMises:
      return -c * std::sin(x);
    case Family::Bingham:
      return -c * std::sin(2.0 * x);
    case Family::Cardioid: {
      // Undefined at a density zero (|rho| = 1/2); the Stein operator takes
      // its off-support branch there, so 0 is returned.
      const double denom = 1.0 + 2.0 * c * std::cos(x);
      if (denom <= 0.0) return 0.0;
      return -2.0 * c * std::sin(x) / denom;
    }
    case Family::WrappedNormal:
      return wn_score_series(x, c);
    case Family::WrappedCauchy:
      return -2.0 * std::exp(-c) * std::sin(x) / wc_denominator(c, x);
  }
  return 0.0;
}

double DistributionSpec::density(double theta) const {
  return centered_density(wrap(theta - location_.radians()));
}

double DistributionSpec::score(double theta) const {
  return centered_score(wrap(theta - location_.radians()));
}

std::string DistributionSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << family_name(family_) << "(location=" << location_.radians()
      << ", concentration=" << concentration_ << ")";
  return out.str();
}

std::string DistributionSpec::to_json() const {
  nlohmann::json j;
  j["family"] = std::string(family_name(family_));
  j["location"] = location_.radians();
  j["concentration"] = concentration_;
  return j.dump();
}

DistributionSpec DistributionSpec::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("distribution JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("distribution JSON: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "location" && key != "concentration") {
      throw InvalidArgument("distribution JSON: unknown key '" + key + "'");
    }
  }
  if (!j.contains("family") || !j["family"].is_string()) {
    throw InvalidArgument("distribution JSON: 'family' must be a string");
  }
  const Family family = parse_family(j["family"].get<std::string>());

  auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number()) {
      throw InvalidArgument(std::string("distribution JSON: '") + key + "' must be a number");
    }
    return j[key].get<double>();
  };
  const auto location = number("location");
  auto concentration = number("concentration");
  if (!concentration) {
    if (family != Family::Uniform) {
      throw InvalidArgument(std::string("distribution JSON: '") + std::string(family_name(family)) +
                            "' requires 'concentration'");
    }
    concentration = 0.0;
  }
  if (location && !std::isfinite(*location)) {
    throw InvalidArgument("distribution JSON: 'location' must be finite");
  }
  return {family, Angle(location.value_or(0.0)), *concentration, location.has_value()};
}

double wn_density_series(double theta, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("wn_density_series: sigma^2 must be > 0");
  const double sigma = std::sqrt(sigma2);
  const double k_max = std::ceil((6.0 * sigma + kPi) / kTwoPi);
  if (k_max > static_cast<double>(kWnTermCap)) {
    std::ostringstream msg;
    msg << "wn_density_series: truncation needs " << k_max << " shifts, cap is " << kWnTermCap;
    throw NumericError(msg.str());
  }
  const long K = static_cast<long>(k_max);
  double sum = 0.0;
  for (long k = -K; k <= K; ++k) {
    const double d = theta + kTwoPi * static_cast<double>(k);
    sum += std::exp(-d * d / (2.0 * sigma2));
  }
  return sum / (sigma * std::sqrt(kTwoPi));
}

double wn_density_triple_product(double theta, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("wn_density_triple_product: sigma^2 must be > 0");
  // Each factor (1 - q^n) |1 + a e^{i theta}|^2 with q = e^{-sigma2},
  // a = q^{n - 1/2}. Summed in log form; 1 + a cos(theta) is rewritten as
  // (1 - a) + 2 a cos^2(theta / 2) to keep precision when a -> 1.
  const double c_half = std::cos(0.5 * theta);
  const double s = std::sin(theta);
  double log_sum = 0.0;
  long n = 1;
  for (; n <= kWnTermCap; ++n) {
    const double e_half = sigma2 * (static_cast<double>(n) - 0.5);
    const double a = std::exp(-e_half);
    if (a < 1e-18) break;
    const double re = -std::expm1(-e_half) + 2.0 * a * c_half * c_half;
    const double im = a * s;
    log_sum += std::log(-std::expm1(-sigma2 * static_cast<double>(n))) + std::log(re * re + im * im);
  }
  if (n > kWnTermCap) {
    std::ostringstream msg;
    msg << "wn_density_triple_product: no convergence after " << kWnTermCap << " factors";
    throw NumericError(msg.str());
  }
  return std::exp(log_sum) / kTwoPi;
}

double wn_score_series(double theta, double sigma2) {
  if (!(sigma2 >= kWnScoreMinVariance)) {
    std::ostringstream msg;
    msg << "wn_score_series: sigma^2 must be >= 0.01 (got " << sigma2 << ")";
    throw DomainError(msg.str());
  }
  const double s = std::sin(theta);
  if (s == 0.0) return 0.0;
  // cosh(u) + cos(theta) = 2 sinh^2(u / 2) + 2 cos^2(theta / 2)
  const double c_half = std::cos(0.5 * theta);
  const double c2 = 2.0 * c_half * c_half;
  double sum = 0.0;
  long n = 1;
  for (; n <= kWnTermCap; ++n) {
    const double sh = std::sinh(0.5 * sigma2 * (static_cast<double>(n) - 0.5));
    const double term = 1.0 / (2.0 * sh * sh + c2);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  if (n > kWnTermCap) {
    std::ostringstream msg;
    msg << "wn_score_series: no convergence after " << kWnTermCap << " terms";
    throw NumericError(msg.str());
  }
  return -s * sum;
}

FramedDistribution::FramedDistribution(DistributionSpec dist, Angle frame)
    : dist_(std::move(dist)), frame_(frame), offset_(wrap(frame.radians() - dist_.location().radians())) {}

double FramedDistribution::density(double x) const {
  return dist_.centered_density(offset_ == 0.0 ? x : wrap(x + offset_));
}

double FramedDistribution::score(double x) const {
  return dist_.centered_score(offset_ == 0.0 ? x : wrap(x + offset_));
}

std::complex<double> trig_moment(const DistributionSpec& dist, int k, const QuadratureGrid& grid) {
  if (k < 1) throw DomainError("trig_moment: k must be >= 1");
  const double kk = static_cast<double>(k);
  const double re = periodic_quadrature([&](double t) { return std::cos(kk * t) * dist.density(t); }, grid);
  const double im = periodic_quadrature([&](double t) { return std::sin(kk * t) * dist.density(t); }, grid);
  return {re, im};
}

MeanAngle mean_angle(const DistributionSpec& dist, const QuadratureGrid& grid) {
  const std::complex<double> m = trig_moment(dist, 1, grid);
  const double r = std::abs(m);
  if (r < 1e-8) return {dist.location(), r, true};
  return {Angle(std::atan2(m.imag(), m.real())), r, false};
}

FramedDistribution mu_frame(const DistributionSpec& dist, const QuadratureGrid& grid) {
  return {dist, mean_angle(dist, grid).angle};
}

double euclidean_mean(const FramedDistribution& law, const QuadratureGrid& grid) {
  return CumulativeIntegral([&law](double x) { return x * law.density(x); }, grid).total();
}

CdfTable::CdfTable(const DistributionSpec& dist, const QuadratureGrid& grid)
    : dist_(dist),
      integral_([d = dist](double t) { return d.density(t); }, grid),
      at_nodes_(integral_.forward_at_nodes()) {}

double CdfTable::operator()(double theta) const { return integral_.forward(theta); }

double CdfTable::inverse(double u) const {
  const QuadratureGrid& grid = integral_.grid();
  const auto it = std::lower_bound(at_nodes_.begin(), at_nodes_.end(), u);
  if (it == at_nodes_.end()) return kPi;
  const std::size_t j = static_cast<std::size_t>(it - at_nodes_.begin());
  double lo = -kPi + static_cast<double>(j) * grid.spacing();
  double hi = grid.node(j);
  const double f_lo = j == 0 ? 0.0 : at_nodes_[j - 1];
  const double f_hi = at_nodes_[j];
  if (u <= f_lo) return wrap(lo);
  // Newton from the linear interpolant, safeguarded by bisection.
  double t = f_hi > f_lo ? lo + (hi - lo) * (u - f_lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
  for (int iter = 0; iter < 60; ++iter) {
    const double g = integral_.forward(t) - u;
    if (std::abs(g) < 1e-15) break;
    if (g > 0.0) hi = t; else lo = t;
    const double p = dist_.density(t);
    double next = p > 0.0 ? t - g / p : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15) break;
    t = next;
  }
  return wrap(t);
}

double cdf(const DistributionSpec& dist, double theta, const QuadratureGrid& grid) {
  return CdfTable(dist, grid)(wrap(theta));
}

std::vector<Angle> sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed,
                          const QuadratureGrid& grid) {
  if (n == 0) throw DomainError("sample: n must be >= 1");
  const CdfTable table(dist, grid);
  std::mt19937_64 rng(seed);
  std::vector<Angle> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // 53 random bits mapped onto the open interval (0, 1).
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    out.emplace_back(table.inverse(u));
  }
  return out;
}

}  // namespace circstein
