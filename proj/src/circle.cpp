#include "circstein/circle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "circstein/errors.hpp"

namespace circstein {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1] (symmetric pairs).
constexpr std::array<double, 4> kGaussNodes = {
    0.183434642495649804939476142360184, 0.525532409916328985817739049189246,
    0.796666477413626739591553936475830, 0.960289856497536231683560868569473};
constexpr std::array<double, 4> kGaussWeights = {
    0.362683783378361982965150449277196, 0.313706645877887287337962201986601,
    0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

// Neumaier compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double wrap(double radians) {
  if (!std::isfinite(radians)) {
    std::ostringstream msg;
    msg << "wrap: angle must be finite (got " << radians << ")";
    throw DomainError(msg.str());
  }
  double r = std::remainder(radians, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

Angle to_mu_coordinates(Angle theta, Angle mu) { return theta - mu; }

QuadratureGrid::QuadratureGrid(std::size_t n_nodes) {
  if (n_nodes < 2) {
    throw InvalidArgument("QuadratureGrid: need at least 2 nodes");
  }
  const double h = kTwoPi / static_cast<double>(n_nodes);
  std::vector<double> nodes(n_nodes);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    nodes[j] = -kPi + static_cast<double>(j + 1) * h;
  }
  nodes.back() = kPi;
  nodes_ = std::make_shared<const std::vector<double>>(std::move(nodes));
}

double periodic_quadrature(const RealFunction& f, const QuadratureGrid& grid) {
  CompensatedSum sum;
  for (double x : grid.nodes()) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "periodic_quadrature: integrand is " << v << " at node " << x;
      throw NumericError(msg.str());
    }
    sum.add(v);
  }
  return sum.value() * grid.weight();
}

CumulativeIntegral::CumulativeIntegral(RealFunction f, const QuadratureGrid& grid)
    : f_(std::move(f)), grid_(grid) {
  const std::size_t n = grid_.size();
  const double h = grid_.spacing();
  cells_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = -kPi + static_cast<double>(k) * h;
    const double hi = (k + 1 == n) ? kPi : -kPi + static_cast<double>(k + 1) * h;
    cells_[k] = partial_cell(k, lo, hi);
  }
  prefix_.assign(n + 1, 0.0);
  CompensatedSum forward;
  for (std::size_t k = 0; k < n; ++k) {
    forward.add(cells_[k]);
    prefix_[k + 1] = forward.value();
  }
  suffix_.assign(n + 1, 0.0);
  CompensatedSum backward;
  for (std::size_t k = n; k-- > 0;) {
    backward.add(cells_[k]);
    suffix_[k] = backward.value();
  }
}

double CumulativeIntegral::partial_cell(std::size_t cell, double lo, double hi) const {
  if (hi <= lo) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    const double a = f_(mid - half * kGaussNodes[i]);
    const double b = f_(mid + half * kGaussNodes[i]);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "CumulativeIntegral: integrand not finite in cell " << cell << " ["
          << lo << ", " << hi << "]";
      throw NumericError(msg.str());
    }
    sum += kGaussWeights[i] * (a + b);
  }
  return sum * half;
}

std::size_t CumulativeIntegral::cell_of(double x) const {
  const double t = std::floor((x + kPi) / grid_.spacing());
  if (t <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(t), grid_.size() - 1);
}

double CumulativeIntegral::forward(double x) const {
  x = std::clamp(x, -kPi, kPi);
  const std::size_t k = cell_of(x);
  const double lo = -kPi + static_cast<double>(k) * grid_.spacing();
  return prefix_[k] + partial_cell(k, lo, x);
}

double CumulativeIntegral::backward(double x) const {
  x = std::clamp(x, -kPi, kPi);
  const std::size_t k = cell_of(x);
  const double hi = (k + 1 == grid_.size()) ? kPi : -kPi + static_cast<double>(k + 1) * grid_.spacing();
  return suffix_[k + 1] + partial_cell(k, x, hi);
}

double CumulativeIntegral::anchored(double x) const {
  return x <= 0.0 ? forward(x) : -backward(x);
}

std::vector<double> CumulativeIntegral::forward_at_nodes() const {
  return {prefix_.begin() + 1, prefix_.end()};
}

std::vector<double> CumulativeIntegral::anchored_at_nodes() const {
  const std::size_t n = grid_.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = grid_.node(j) <= 0.0 ? prefix_[j + 1] : -suffix_[j + 1];
  }
  return out;
}

}  // namespace circstein
