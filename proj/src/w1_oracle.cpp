#include "circstein/w1_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "circstein/errors.hpp"

namespace circstein {

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr std::size_t kShiftCandidates = 100'000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_monotone(const std::vector<double>& F, const char* which) {
  double prev = 0.0;
  for (std::size_t j = 0; j < F.size(); ++j) {
    if (F[j] < prev - kMonotoneSlack) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "circular_w1: CDF of " << which << " decreases at node " << j << " (" << prev
          << " -> " << F[j] << ")";
      throw NumericError(msg.str());
    }
    prev = F[j];
  }
}

// Sum of geodesic distances between a[i] and b[i + offset] for i in [0, len).
double geodesic_run(const double* a, const double* b, std::size_t len) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double d = std::abs(a[i + k] - b[i + k]);
      acc[k] += std::min(d, kTwoPi - d);
    }
  }
  for (; i < len; ++i) {
    const double d = std::abs(a[i] - b[i]);
    acc[0] += std::min(d, kTwoPi - d);
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

double shifted_l1(const std::vector<double>& d, double c, double spacing) {
  double sum = 0.0;
  double u = -c;  // D(-pi) = 0
  for (double dj : d) {
    const double v = dj - c;
    const double au = std::abs(u);
    const double av = std::abs(v);
    if ((u < 0.0 && v > 0.0) || (u > 0.0 && v < 0.0)) {
      sum += (u * u + v * v) / (2.0 * (au + av));
    } else {
      sum += 0.5 * (au + av);
    }
    u = v;
  }
  return sum * spacing;
}

W1Computation circular_w1(const DistributionSpec& p, const DistributionSpec& q,
                          const QuadratureGrid& grid, W1Options options) {
  W1Computation out;
  out.grid_size = grid.size();
  out.F_p = CdfTable(p, grid).at_nodes();
  out.F_q = CdfTable(q, grid).at_nodes();
  check_monotone(out.F_p, "P");
  check_monotone(out.F_q, "Q");

  std::vector<double> d(grid.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = out.F_p[j] - out.F_q[j];

  std::vector<double> sorted = d;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  out.c_star = *mid;
  out.value = shifted_l1(d, out.c_star, grid.spacing());

  if (options.verify_shift) {
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kShiftCandidates; ++i) {
      const double c = *lo + (*hi - *lo) * static_cast<double>(i) / (kShiftCandidates - 1);
      best = std::min(best, shifted_l1(d, c, grid.spacing()));
    }
    out.grid_search_value = best;
  }
  return out;
}

double empirical_circular_w1(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw DomainError("empirical_circular_w1: samples must be non-empty and of equal size");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = a.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    // a[i] is matched with b[(i + s) mod n].
    const double cost = geodesic_run(a.data(), b.data() + s, n - s) +
                        geodesic_run(a.data() + (n - s), b.data(), s);
    best = std::min(best, cost);
  }
  return best / static_cast<double>(n);
}

EmpiricalW1 empirical_w1(const DistributionSpec& p, const DistributionSpec& q, std::size_t n,
                         std::uint64_t seed, std::size_t replicates, const QuadratureGrid& grid) {
  if (n < 1000) throw DomainError("empirical_w1: n must be >= 1000");
  if (replicates < 2) throw DomainError("empirical_w1: need at least 2 replicates");
  EmpiricalW1 out;
  out.replicates.reserve(replicates);
  auto to_radians = [](const std::vector<Angle>& xs) {
    std::vector<double> r(xs.size());
    std::transform(xs.begin(), xs.end(), r.begin(), [](Angle a) { return a.radians(); });
    return r;
  };
  for (std::size_t r = 0; r < replicates; ++r) {
    const std::uint64_t base = splitmix64(seed ^ splitmix64(r));
    const auto xs = to_radians(sample(p, n, splitmix64(base + 1), grid));
    const auto ys = to_radians(sample(q, n, splitmix64(base + 2), grid));
    out.replicates.push_back(empirical_circular_w1(xs, ys));
  }
  const double k = static_cast<double>(replicates);
  out.estimate = std::accumulate(out.replicates.begin(), out.replicates.end(), 0.0) / k;
  double ss = 0.0;
  for (double v : out.replicates) ss += (v - out.estimate) * (v - out.estimate);
  out.std_error = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
  return out;
}

}  // namespace circstein
