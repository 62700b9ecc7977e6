#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace circstein {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps a finite real onto its representative in (-pi, pi].
/// Throws DomainError for NaN or infinity.
double wrap(double radians);

/// A point of S^1 in standard coordinates, always stored in (-pi, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(wrap(radians)) {}

  double radians() const { return value_; }

  friend Angle operator+(Angle a, Angle b) { return Angle(a.value_ + b.value_); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.value_ - b.value_); }
  friend bool operator==(Angle a, Angle b) = default;

 private:
  double value_ = 0.0;
};

/// Coordinates of theta in the chart centred at mu: mu maps to 0 and the
/// antipode mu + pi maps to pi.
Angle to_mu_coordinates(Angle theta, Angle mu);

inline constexpr std::size_t kDefaultGridSize = 4096;

/// Equispaced periodic grid on (-pi, pi]. Node j sits at -pi + (j + 1) h with
/// h = 2 pi / n, so the last node is pi and -pi is not repeated.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(std::size_t n_nodes = kDefaultGridSize);

  std::size_t size() const { return nodes_->size(); }
  double spacing() const { return kTwoPi / static_cast<double>(size()); }
  double weight() const { return spacing(); }
  double node(std::size_t j) const { return (*nodes_)[j]; }
  std::span<const double> nodes() const { return *nodes_; }

 private:
  std::shared_ptr<const std::vector<double>> nodes_;
};

using RealFunction = std::function<double(double)>;

/// Periodic trapezoidal rule: sum of f(node) * 2pi/n. Spectrally accurate for
/// smooth 2pi-periodic integrands. Throws NumericError naming the node when f
/// is not finite there.
double periodic_quadrature(const RealFunction& f, const QuadratureGrid& grid);

/// Running integrals of f over the cells of a grid.
///
/// Every cell [-pi + j h, -pi + (j + 1) h] is integrated with 8-point
/// Gauss-Legendre, so the integrand need not be periodic (y p(y) jumps across
/// the seam) and partial cells can be evaluated at arbitrary points. Prefix and
/// suffix sums are kept separately: forward(x) is accumulated from -pi and
/// backward(x) from pi, so small tails near either end keep their relative
/// accuracy.
class CumulativeIntegral {
 public:
  CumulativeIntegral(RealFunction f, const QuadratureGrid& grid);

  /// Integral over (-pi, pi].
  double total() const { return prefix_.back(); }
  /// Integral from -pi to x, x in [-pi, pi].
  double forward(double x) const;
  /// Integral from x to pi.
  double backward(double x) const;
  /// For an integrand whose total is zero: forward(x) when x <= 0 and
  /// -backward(x) otherwise. Both agree analytically; this picks the one summed
  /// over the shorter range.
  double anchored(double x) const;

  /// forward() at every grid node.
  std::vector<double> forward_at_nodes() const;
  /// anchored() at every grid node.
  std::vector<double> anchored_at_nodes() const;

  const QuadratureGrid& grid() const { return grid_; }

 private:
  double partial_cell(std::size_t cell, double lo, double hi) const;
  std::size_t cell_of(double x) const;

  RealFunction f_;
  QuadratureGrid grid_;
  std::vector<double> cells_;
  std::vector<double> prefix_;  // prefix_[k] = integral over the first k cells
  std::vector<double> suffix_;  // suffix_[k] = integral over cells k .. n-1
};

}  // namespace circstein
