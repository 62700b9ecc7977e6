#include "circstein/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "circstein/distribution.hpp"
#include "circstein/errors.hpp"
#include "circstein/stein.hpp"
#include "circstein/w1_oracle.hpp"
#include "circstein/wasserstein_bounds.hpp"

namespace circstein {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 721 equispaced evaluation points including both ends.
std::vector<double> evaluation_points() {
  std::vector<double> xs(721);
  for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = -kPi + kTwoPi * static_cast<double>(j) / 720.0;
  return xs;
}

std::vector<double> interior_points() {
  auto xs = evaluation_points();
  return {xs.begin() + 1, xs.end() - 1};
}

std::vector<DistributionSpec> six_families() {
  const Angle zero{};
  return {DistributionSpec::uniform(zero),         DistributionSpec::von_mises(zero, 1.0),
          DistributionSpec::bingham(zero, 1.0),    DistributionSpec::cardioid(zero, 0.25),
          DistributionSpec::wrapped_normal(zero, 1.0), DistributionSpec::wrapped_cauchy(zero, 1.0)};
}

// Collects sub-checks; the criterion passes iff all of them do.
class Report {
 public:
  Report() { out_.precision(17); }

  void check(bool ok, const std::string& label, double measured, double limit) {
    passed_ = passed_ && ok;
    out_ << (first_ ? "" : "; ") << label << ' ' << measured << (ok ? " <= " : " > ") << limit;
    first_ = false;
  }
  void note(const std::string& text) {
    out_ << (first_ ? "" : "; ") << text;
    first_ = false;
  }
  void fail(const std::string& text) {
    passed_ = false;
    note(text);
  }

  bool passed() const { return passed_; }
  std::string detail() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool passed_ = true;
  bool first_ = true;
};

// Five-point stencil, O(step^4).
double central_difference(const RealFunction& f, double x, double step) {
  return (8.0 * (f(x + step) - f(x - step)) - (f(x + 2.0 * step) - f(x - 2.0 * step))) / (12.0 * step);
}

void kernel_closed_forms(Report& r) {
  const auto start = Clock::now();
  const QuadratureGrid grid;
  const auto xs = evaluation_points();
  const Angle zero{};
  std::vector<DistributionSpec> laws;
  for (double k : {0.5, 1.0, 2.0, 5.0}) laws.push_back(DistributionSpec::von_mises(zero, k));
  laws.push_back(DistributionSpec::uniform(zero));
  for (double z : {0.5, 2.0}) laws.push_back(DistributionSpec::bingham(zero, z));
  for (double g : {0.5, 1.0, 2.0}) laws.push_back(DistributionSpec::wrapped_cauchy(zero, g));
  double worst = 0.0;
  for (const auto& law : laws) {
    const SteinContext ctx(law, law.location(), grid);
    for (double x : xs) {
      const double closed = circular_kernel_closed(law.family(), law.concentration(), x);
      worst = std::max(worst, std::abs(closed - circular_kernel_numeric(ctx, x)));
    }
  }
  r.check(worst < 1e-8, "max|closed-numeric|", worst, 1e-8);
  const double t = seconds_since(start);
  if (!(t < 10.0)) r.fail("runtime limit of 10 s exceeded");
}

void operator_mean_zero(Report& r) {
  const QuadratureGrid grid;
  const std::vector<std::pair<std::string, DiffFunction>> fs = {
      {"1", {[](double) { return 1.0; }, [](double) { return 0.0; }}},
      {"cos", {[](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }}},
      {"sin", {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }}},
      {"cos2x", {[](double x) { return std::cos(2.0 * x); }, [](double x) { return -2.0 * std::sin(2.0 * x); }}},
  };
  double worst = 0.0;
  for (const auto& law : six_families()) {
    const FramedDistribution framed(law, law.location());
    for (const auto& [name, f] : fs) {
      const double e = periodic_quadrature(
          [&](double x) { return stein_operator(framed, f, x) * framed.density(x); }, grid);
      worst = std::max(worst, std::abs(e));
    }
  }
  r.check(worst < 1e-10, "max|E[T f]|", worst, 1e-10);
}

void inverse_property(Report& r) {
  const QuadratureGrid grid;
  const auto xs = evaluation_points();
  const auto inner = interior_points();
  constexpr double kStep = 1e-3;
  constexpr double kShift = 0.7;
  double forward = 0.0;   // T(T^{-1} h) - h
  double backward = 0.0;  // T^{-1}(T f) - f
  double shift = 0.0;     // T(f + C/p) - T f
  for (const auto& law : {DistributionSpec::von_mises(Angle{}, 1.0), DistributionSpec::uniform()}) {
    const SteinContext ctx(law, law.location(), grid);
    const FramedDistribution& p = ctx.law();
    const double mean_cos = ctx.expectation([](double x) { return std::cos(x); });
    const std::vector<RealFunction> hs = {[](double x) { return std::sin(x); },
                                          [mean_cos](double x) { return std::cos(x) - mean_cos; }};
    for (const auto& h : hs) {
      const InverseOperator inv(ctx, h);
      const RealFunction f = [&inv](double x) { return inv(x); };
      const RealFunction g = [&](double x) { return inv(x) + kShift / p.density(x); };
      for (double x : inner) {
        const double tf = central_difference(f, x, kStep) + p.score(x) * f(x);
        const double tg = central_difference(g, x, kStep) + p.score(x) * g(x);
        forward = std::max(forward, std::abs(tf - h(x)));
        shift = std::max(shift, std::abs(tg - tf));
      }
    }
    const std::vector<DiffFunction> fs = {
        {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }},
        {[](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }}};
    for (const auto& f : fs) {
      const RealFunction tf = [&p, &f](double x) { return stein_operator(p, f, x); };
      const InverseOperator inv(ctx, tf, f.value(-kPi));
      for (double x : xs) backward = std::max(backward, std::abs(inv(x) - f.value(x)));
    }
  }
  r.check(forward < 1e-8, "max|T T^-1 h - h|", forward, 1e-8);
  r.check(backward < 1e-8, "max|T^-1 T f - f|", backward, 1e-8);
  r.check(shift < 1e-8, "max|T(f+C/p) - T f|", shift, 1e-8);
}

void integration_by_parts(Report& r) {
  const QuadratureGrid grid;
  const std::vector<DiffFunction> phis = {
      {[](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }},
      {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }},
      {[](double x) { return std::exp(std::cos(x)); },
       [](double x) { return -std::sin(x) * std::exp(std::cos(x)); }}};
  double worst = 0.0;
  for (const auto& law : six_families()) {
    const SteinContext ctx(law, grid);
    const auto s = ctx.sine_table().anchored_at_nodes();
    for (const auto& phi : phis) {
      const double lhs = ctx.expectation([&](double x) { return std::sin(x) * phi.value(x); });
      double rhs = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j) rhs += s[j] * phi.derivative(grid.node(j));
      rhs *= grid.spacing();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  r.check(worst < 1e-8, "max|E[sin phi] - E[tau^c phi']|", worst, 1e-8);
}

void von_mises_kernel_bounds(Report& r) {
  const QuadratureGrid grid;
  constexpr double kSign = 1e-12;  // quadrature noise allowed below zero
  for (double kappa : {0.5, 1.0, 2.0, 5.0}) {
    const auto law = DistributionSpec::von_mises(Angle{}, kappa);
    const SteinContext ctx(law, law.location(), grid);
    const double cap = -std::expm1(-2.0 * kappa) / kappa;
    double lowest = 0.0;
    double over = -1.0;
    for (double x : grid.nodes()) {
      const double t = circular_kernel_numeric(ctx, x);
      lowest = std::min(lowest, t);
      over = std::max(over, t - cap);
    }
    const std::string k = "kappa=" + std::to_string(kappa).substr(0, 3);
    r.check(lowest >= -kSign, k + " -min tau^c", -lowest, kSign);
    r.check(over <= 1e-10, k + " max(tau^c - cap)", over, 1e-10);
    r.check(cap <= 1.0 / kappa, k + " cap - 1/kappa", cap - 1.0 / kappa, 0.0);
    const double ends = std::max(std::abs(circular_kernel_numeric(ctx, kPi)),
                                 std::abs(circular_kernel_numeric(ctx, -kPi)));
    r.check(ends <= 1e-10, k + " |tau^c(+-pi)|", ends, 1e-10);
    const double centre = std::abs(circular_kernel_numeric(ctx, 0.0) - cap);
    r.check(centre <= 1e-10, k + " |tau^c(0) - cap|", centre, 1e-10);
  }
}

void small_kappa_limit(Report& r) {
  const QuadratureGrid grid;
  const auto law = DistributionSpec::von_mises(Angle{}, 1e-6);
  const SteinContext ctx(law, law.location(), grid);
  double closed = 0.0;
  double numeric = 0.0;
  for (double x : evaluation_points()) {
    const double target = 1.0 + std::cos(x);
    closed = std::max(closed, std::abs(circular_kernel_closed(Family::VonMises, 1e-6, x) - target));
    numeric = std::max(numeric, std::abs(circular_kernel_numeric(ctx, x) - target));
  }
  r.check(closed < 1e-5, "closed max|tau^c - (1+cos)|", closed, 1e-5);
  r.check(numeric < 1e-5, "numeric max|tau^c - (1+cos)|", numeric, 1e-5);
}

void alpha_envelope(Report& r) {
  const QuadratureGrid grid;
  const Angle zero{};
  const std::vector<DistributionSpec> laws = {
      DistributionSpec::uniform(zero), DistributionSpec::von_mises(zero, 2.0),
      DistributionSpec::wrapped_normal(zero, 1.0), DistributionSpec::wrapped_cauchy(zero, 1.0)};
  const double band = 0.5 * grid.spacing();
  for (const auto& law : laws) {
    const SteinContext ctx(law, grid);
    double worst = 0.0;
    for (double x : grid.nodes()) {
      if (std::abs(x) > kPi - band) continue;
      worst = std::max(worst, std::abs(alpha(ctx, x).alpha_sin));
    }
    r.check(worst <= kAlphaSinEnvelope + 1e-6, law.describe() + " max|alpha sin|", worst,
            kAlphaSinEnvelope + 1e-6);
    if (law.family() == Family::Uniform) {
      const double edge = std::abs(alpha(ctx, kPi - grid.spacing()).alpha_sin);
      r.check(std::abs(edge - kTwoPi) <= 1e-2, "uniform |alpha sin(pi-h)| - 2pi", std::abs(edge - kTwoPi),
              1e-2);
    }
  }
}

void sandwich_pair(Report& r, const DistributionSpec& x, const DistributionSpec& y,
                   const QuadratureGrid& grid) {
  const auto start = Clock::now();
  const BoundReport b = sandwich_bounds(x, y, grid);
  const double t = seconds_since(start);
  const double w = *b.oracle_w1;
  std::ostringstream line;
  line.precision(17);
  line << x.describe() << " vs " << y.describe() << ": lower " << b.lower << " w1 " << w << " upper "
       << b.upper;
  const bool ok = b.lower - 1e-6 <= w && w <= b.upper + 1e-6;
  if (ok) {
    r.note(line.str());
  } else {
    r.fail(line.str() + " violates the sandwich");
  }
  if (!(t < 5.0)) r.fail(x.describe() + " vs " + y.describe() + " exceeded 5 s");
}

PosteriorSpec bayes_posterior_at(std::size_t n) {
  const QuadratureGrid grid;
  const auto data = sample(DistributionSpec::von_mises(Angle(0.5), 2.0), n, 7, grid);
  return bayes_posteriors(data, 2.0, 1.0);
}

void sandwich_validation(Report& r) {
  const QuadratureGrid grid;
  const Angle zero{};
  sandwich_pair(r, DistributionSpec::von_mises(zero, 2.0), DistributionSpec::bingham(zero, 1.0), grid);
  sandwich_pair(r, DistributionSpec::von_mises(zero, 2.0), DistributionSpec::wrapped_normal(zero, 0.5), grid);
  sandwich_pair(r, DistributionSpec::wrapped_cauchy(zero, 1.0), DistributionSpec::wrapped_normal(zero, 1.0), grid);
  const PosteriorSpec post = bayes_posterior_at(100);
  sandwich_pair(r, post.model1(), post.model2(), grid);
  sandwich_pair(r, post.model2(), post.model1(), grid);
}

void envelope_case(Report& r, const std::string& label, const DistributionSpec& x,
                   const DistributionSpec& y, double envelope, const QuadratureGrid& grid) {
  try {
    const BoundReport b = sandwich_bounds(x, y, grid, {.with_oracle = false, .with_envelope = false});
    r.check(b.upper <= envelope + 1e-6, label + " upper - envelope", b.upper - envelope, 1e-6);
  } catch (const Error& e) {
    r.fail(label + " sandwich not computable: " + e.what());
  }
}

void envelope_reproduction(Report& r) {
  const QuadratureGrid grid;
  const Angle zero{};
  const double pi = kPi;
  const double vb = envelope_vm_bingham(2.0, 1.0);
  r.check(std::abs(vb - 4.0 * pi) <= 1e-12, "|env_vm_bing(2,1) - 4pi|", std::abs(vb - 4.0 * pi), 1e-12);
  const double vw = envelope_vm_wn(1.0, 1.0);
  const double vw_ref = 2.0 * pi * pi * pi + 2.0 * pi;
  r.check(std::abs(vw - vw_ref) <= 1e-12, "|env_vm_wn(1,1) - (2pi^3+2pi)|", std::abs(vw - vw_ref), 1e-12);
  const double kappa = 1e6;
  const double limit = envelope_vm_wn(kappa, 1.0 / kappa);
  r.check(std::abs(limit - kTwoPi) <= 1e-3, "|env_vm_wn(1e6, 1e-6) - 2pi|", std::abs(limit - kTwoPi), 1e-3);
  const double gs = wn_wc_branch_point();
  const double below = envelope_wn_wc(1.0, gs * (1.0 - 1e-14));
  const double above = envelope_wn_wc(1.0, gs * (1.0 + 1e-14));
  r.check(std::abs(below - above) <= 1e-10, "wn_wc branch jump at gamma*", std::abs(below - above), 1e-10);

  envelope_case(r, "vm(2)-bing(1)", DistributionSpec::von_mises(zero, 2.0),
                DistributionSpec::bingham(zero, 1.0), vb, grid);
  envelope_case(r, "vm(1)-wn(1)", DistributionSpec::von_mises(zero, 1.0),
                DistributionSpec::wrapped_normal(zero, 1.0), vw, grid);
  envelope_case(r, "vm(1e6)-wn(1e-6)", DistributionSpec::von_mises(zero, kappa),
                DistributionSpec::wrapped_normal(zero, 1.0 / kappa), limit, grid);
  envelope_case(r, "wc(gamma*)-wn(1)", DistributionSpec::wrapped_cauchy(zero, gs),
                DistributionSpec::wrapped_normal(zero, 1.0), envelope_wn_wc(1.0, gs), grid);
}

void series_bound(Report& r) {
  for (double s2 : {0.5, 1.0, 2.0}) {
    const double sum = wn_cosh_series(s2);
    const double bound = wn_cosh_series_bound(s2);
    r.check(sum <= bound, "sigma2=" + std::to_string(s2).substr(0, 3) + " series - bound", sum - bound, 0.0);
  }
}

void wrapped_normal_duality(Report& r) {
  const auto xs = evaluation_points();
  double density = 0.0;
  double score = 0.0;
  for (double s2 : {0.25, 1.0, 4.0}) {
    const RealFunction log_p = [s2](double x) { return std::log(wn_density_triple_product(x, s2)); };
    for (double x : xs) {
      density = std::max(density, std::abs(wn_density_series(x, s2) - wn_density_triple_product(x, s2)));
      score = std::max(score, std::abs(wn_score_series(x, s2) - central_difference(log_p, x, 1e-4)));
    }
  }
  r.check(density <= 1e-12, "max|series - triple product|", density, 1e-12);
  r.check(score <= 1e-8, "max|score - FD log density|", score, 1e-8);
}

void bayes_rate(Report& r) {
  const QuadratureGrid grid;
  const std::vector<std::size_t> ns = {100, 400, 1600};
  const auto rows = bayes_experiment(DistributionSpec::von_mises(Angle(0.5), 2.0), ns, 2.0, 1.0, 7, grid);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& row : rows) {
    const double scaled = row.envelope * static_cast<double>(row.n);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    r.check(row.oracle_w1 <= row.envelope, "n=" + std::to_string(row.n) + " w1 - envelope",
            row.oracle_w1 - row.envelope, 0.0);
  }
  r.check(hi / lo - 1.0 < 0.2, "spread of n*envelope", hi / lo - 1.0, 0.2);
}

void oracle_consistency(Report& r) {
  const QuadratureGrid grid;
  const QuadratureGrid fine(2 * grid.size());
  const Angle zero{};
  const auto vm2 = DistributionSpec::von_mises(zero, 2.0);
  const auto bing = DistributionSpec::bingham(zero, 1.0);

  const double pq = circular_w1(vm2, bing, grid).value;
  const double qp = circular_w1(bing, vm2, grid).value;
  r.check(std::abs(pq - qp) <= 1e-10, "asymmetry", std::abs(pq - qp), 1e-10);

  const auto u = DistributionSpec::uniform(zero);
  const auto vm1 = DistributionSpec::von_mises(zero, 1.0);
  const auto wn1 = DistributionSpec::wrapped_normal(zero, 1.0);
  const double excess = circular_w1(u, wn1, grid).value -
                        (circular_w1(u, vm1, grid).value + circular_w1(vm1, wn1, grid).value);
  r.check(excess <= 1e-8, "triangle excess", excess, 1e-8);

  const double self = circular_w1(vm2, vm2, grid).value;
  r.check(self <= 1e-9, "W1(P,P)", self, 1e-9);

  const std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs = {
      {vm2, bing},
      {vm2, DistributionSpec::wrapped_normal(zero, 0.5)},
      {DistributionSpec::wrapped_cauchy(zero, 1.0), wn1}};
  double drift = 0.0;
  for (const auto& [p, q] : pairs) {
    drift = std::max(drift, std::abs(circular_w1(p, q, grid).value - circular_w1(p, q, fine).value));
  }
  r.check(drift < 1e-6, "grid refinement drift", drift, 1e-6);

  const std::vector<std::pair<DistributionSpec, DistributionSpec>> mc = {
      {DistributionSpec::von_mises(zero, 5.0), DistributionSpec::von_mises(Angle(0.4), 5.0)}, {vm2, bing}};
  for (const auto& [p, q] : mc) {
    const double exact = circular_w1(p, q, grid).value;
    const EmpiricalW1 e = empirical_w1(p, q, 10'000, 1, 10, grid);
    r.check(std::abs(e.estimate - exact) <= 2.0 * e.std_error,
            p.describe() + " vs " + q.describe() + " |mc - w1|", std::abs(e.estimate - exact),
            2.0 * e.std_error);
  }
}

using Body = void (*)(Report&);

struct Criterion {
  const char* name;
  Body body;
};

const Criterion kCriteria[] = {
    {"circular kernel closed forms match quadrature", kernel_closed_forms},
    {"Stein operator has mean zero", operator_mean_zero},
    {"inverse operator round trips and constant shift", inverse_property},
    {"integration by parts with the circular kernel", integration_by_parts},
    {"von Mises circular kernel bounds", von_mises_kernel_bounds},
    {"small-kappa von Mises kernel tends to 1 + cos", small_kappa_limit},
    {"alpha times sine stays below 2 pi", alpha_envelope},
    {"lower <= W1 <= upper on test pairs", sandwich_validation},
    {"closed-form envelopes", envelope_reproduction},
    {"wrapped normal cosh series bound", series_bound},
    {"wrapped normal density and score routes agree", wrapped_normal_duality},
    {"Bayesian posterior distance decays like 1/n", bayes_rate},
    {"W1 oracle self-consistency", oracle_consistency},
};

CriterionResult run_body(int id) {
  const Criterion& c = kCriteria[id - 1];
  CriterionResult out;
  out.id = id;
  out.name = c.name;
  Report r;
  const auto start = Clock::now();
  try {
    c.body(r);
  } catch (const std::exception& e) {
    r.fail(std::string("exception: ") + e.what());
  }
  out.seconds = seconds_since(start);
  out.passed = r.passed();
  out.detail = r.detail();
  return out;
}

constexpr double kSuiteBudget = 300.0;

// Reruns checks 1..13 and compares with `first` byte for byte.
CriterionResult full_suite(std::vector<CriterionResult> first) {
  CriterionResult out;
  out.id = kCriterionCount;
  out.name = "full suite is fast and deterministic";
  const auto start = Clock::now();
  if (first.empty()) {
    for (int id = 1; id < kCriterionCount; ++id) first.push_back(run_body(id));
  }
  double elapsed = 0.0;
  for (const auto& c : first) elapsed += c.seconds;
  Report r;
  r.check(elapsed < kSuiteBudget, "suite seconds", elapsed, kSuiteBudget);
  int mismatches = 0;
  for (int id = 1; id < kCriterionCount; ++id) {
    const CriterionResult again = run_body(id);
    const CriterionResult& before = first[static_cast<std::size_t>(id - 1)];
    if (again.passed != before.passed || again.detail != before.detail) {
      ++mismatches;
      r.fail("check " + std::to_string(id) + " differs between runs");
    }
  }
  if (mismatches == 0) r.note("rerun identical");
  out.passed = r.passed();
  out.detail = r.detail();
  out.seconds = seconds_since(start);
  return out;
}

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kCriterionCount) {
    throw InvalidArgument("run_criterion: id must be in 1.." + std::to_string(kCriterionCount));
  }
  if (id == kCriterionCount) return full_suite({});
  return run_body(id);
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id < kCriterionCount; ++id) out.push_back(run_body(id));
  out.push_back(full_suite(out));
  return out;
}

}  // namespace circstein
