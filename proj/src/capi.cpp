#include "circstein/circstein.h"

#include <cstring>
#include <limits>
#include <string>

#include "circstein/acceptance.hpp"
#include "circstein/distribution.hpp"
#include "circstein/errors.hpp"
#include "circstein/stein.hpp"
#include "circstein/w1_oracle.hpp"
#include "circstein/wasserstein_bounds.hpp"

struct cs_distribution {
  circstein::DistributionSpec spec;
};

struct cs_bound_report {
  circstein::BoundReport report;
};

namespace {

using namespace circstein;

thread_local std::string g_last_error;

QuadratureGrid grid_of(size_t n) { return QuadratureGrid(n == 0 ? kDefaultGridSize : n); }

// Runs body, translating exceptions into status codes.
template <class Body>
cs_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return CS_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what();
    return CS_ERR_INVALID_ARGUMENT;
  } catch (const DomainError& e) {
    g_last_error = e.what();
    return CS_ERR_DOMAIN;
  } catch (const NumericError& e) {
    g_last_error = e.what();
    return CS_ERR_NUMERIC;
  } catch (const ContractError& e) {
    g_last_error = e.what();
    return CS_ERR_CONTRACT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " must not be NULL");
}

void copy_out(const std::string& s, char* buf, size_t capacity, size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf != nullptr && capacity >= s.size() + 1) std::memcpy(buf, s.c_str(), s.size() + 1);
  else if (buf != nullptr && capacity > 0) throw InvalidArgument("buffer too small");
}

}  // namespace

extern "C" {

const char* cs_version(void) { return CIRCSTEIN_VERSION; }

const char* cs_last_error(void) { return g_last_error.c_str(); }

const char* cs_status_name(cs_status status) {
  switch (status) {
    case CS_OK: return "ok";
    case CS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CS_ERR_DOMAIN: return "domain error";
    case CS_ERR_NUMERIC: return "numeric error";
    case CS_ERR_CONTRACT: return "contract violation";
    case CS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

cs_status cs_distribution_create(const char* family, double location, double concentration,
                                 cs_distribution** out) {
  return guarded([&] {
    require(family, "family");
    require(out, "out");
    *out = new cs_distribution{DistributionSpec(parse_family(family), Angle(location), concentration)};
  });
}

cs_status cs_distribution_from_json(const char* json, cs_distribution** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new cs_distribution{DistributionSpec::from_json(json)};
  });
}

void cs_distribution_destroy(cs_distribution* dist) { delete dist; }

cs_status cs_distribution_to_json(const cs_distribution* dist, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(dist, "dist");
    copy_out(dist->spec.to_json(), buf, capacity, needed);
  });
}

cs_status cs_distribution_describe(const cs_distribution* dist, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(dist, "dist");
    copy_out(dist->spec.describe(), buf, capacity, needed);
  });
}

cs_status cs_density(const cs_distribution* dist, double theta, double* out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    *out = dist->spec.density(theta);
  });
}

cs_status cs_score(const cs_distribution* dist, double theta, double* out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    *out = dist->spec.score(theta);
  });
}

cs_status cs_cdf(const cs_distribution* dist, double theta, size_t grid_size, double* out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    *out = cdf(dist->spec, theta, grid_of(grid_size));
  });
}

cs_status cs_mean_angle(const cs_distribution* dist, size_t grid_size, double* angle,
                        double* resultant_length, int* degenerate) {
  return guarded([&] {
    require(dist, "dist");
    const MeanAngle m = mean_angle(dist->spec, grid_of(grid_size));
    if (angle != nullptr) *angle = m.angle.radians();
    if (resultant_length != nullptr) *resultant_length = m.resultant_length;
    if (degenerate != nullptr) *degenerate = m.degenerate ? 1 : 0;
  });
}

cs_status cs_sample(const cs_distribution* dist, size_t n, uint64_t seed, size_t grid_size, double* out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    const auto xs = sample(dist->spec, n, seed, grid_of(grid_size));
    for (size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].radians();
  });
}

cs_status cs_kernel_table(const cs_distribution* dist, size_t grid_size, const double* thetas, size_t count,
                          cs_kernel_row* rows) {
  return guarded([&] {
    require(dist, "dist");
    if (count > 0) {
      require(thetas, "thetas");
      require(rows, "rows");
    }
    const SteinContext ctx(dist->spec, grid_of(grid_size));
    for (size_t i = 0; i < count; ++i) {
      const KernelEvaluation k = evaluate_kernels(ctx, thetas[i]);
      rows[i].theta = thetas[i];
      rows[i].tau_classical = k.tau_classical;
      rows[i].tau_circular_closed = k.method == KernelMethod::ClosedForm
                                        ? k.tau_circular
                                        : std::numeric_limits<double>::quiet_NaN();
      rows[i].tau_circular_numeric = circular_kernel_numeric(ctx, thetas[i]);
    }
  });
}

cs_status cs_alpha(const cs_distribution* dist, size_t grid_size, double x, double* alpha_out,
                   double* alpha_sin) {
  return guarded([&] {
    require(dist, "dist");
    const SteinContext ctx(dist->spec, grid_of(grid_size));
    const AlphaEvaluation a = alpha(ctx, x);
    if (alpha_out != nullptr) *alpha_out = a.alpha;
    if (alpha_sin != nullptr) *alpha_sin = a.alpha_sin;
  });
}

cs_status cs_sandwich_bounds(const cs_distribution* base, const cs_distribution* target, size_t grid_size,
                             int with_oracle, cs_bound_report** out) {
  return guarded([&] {
    require(base, "base");
    require(target, "target");
    require(out, "out");
    BoundOptions options;
    options.with_oracle = with_oracle != 0;
    *out = new cs_bound_report{sandwich_bounds(base->spec, target->spec, grid_of(grid_size), options)};
  });
}

cs_status cs_bound_report_values(const cs_bound_report* report, cs_bound_values* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const BoundReport& r = report->report;
    out->lower = r.lower;
    out->lower_via_sin = r.lower_via_sin;
    out->upper = r.upper;
    out->upper_target_form = r.upper_target_form;
    out->has_oracle = r.oracle_w1.has_value() ? 1 : 0;
    out->oracle_w1 = r.oracle_w1.value_or(0.0);
    out->has_envelope = r.envelope.has_value() ? 1 : 0;
    out->envelope = r.envelope.value_or(0.0);
    out->grid_size = r.grid_size;
    out->frame = r.frame.radians();
  });
}

cs_status cs_bound_report_json(const cs_bound_report* report, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(report, "report");
    copy_out(report->report.to_json(), buf, capacity, needed);
  });
}

void cs_bound_report_destroy(cs_bound_report* report) { delete report; }

cs_status cs_envelope_vm_bingham(double kappa, double zeta, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = envelope_vm_bingham(kappa, zeta);
  });
}

cs_status cs_envelope_vm_wn(double kappa, double sigma2, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = envelope_vm_wn(kappa, sigma2);
  });
}

cs_status cs_envelope_wn_wc(double sigma2, double gamma, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = envelope_wn_wc(sigma2, gamma);
  });
}

cs_status cs_circular_w1(const cs_distribution* p, const cs_distribution* q, size_t grid_size, int verify_shift,
                         cs_w1_result* out) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    require(out, "out");
    const W1Computation w = circular_w1(p->spec, q->spec, grid_of(grid_size), {verify_shift != 0});
    out->value = w.value;
    out->c_star = w.c_star;
    out->grid_size = w.grid_size;
    out->has_grid_search = w.grid_search_value.has_value() ? 1 : 0;
    out->grid_search_value = w.grid_search_value.value_or(0.0);
  });
}

cs_status cs_empirical_w1(const cs_distribution* p, const cs_distribution* q, size_t n, uint64_t seed,
                          size_t replicates, size_t grid_size, double* estimate, double* std_error) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    const EmpiricalW1 e = empirical_w1(p->spec, q->spec, n, seed, replicates, grid_of(grid_size));
    if (estimate != nullptr) *estimate = e.estimate;
    if (std_error != nullptr) *std_error = e.std_error;
  });
}

cs_status cs_bayes_experiment(const cs_distribution* data_law, const size_t* sizes, size_t count, double kappa,
                              double kappa_star, uint64_t seed, size_t grid_size, cs_bayes_row* rows) {
  return guarded([&] {
    require(data_law, "data_law");
    if (count == 0) return;
    require(sizes, "sizes");
    require(rows, "rows");
    const auto out = bayes_experiment(data_law->spec, std::span(sizes, count), kappa, kappa_star, seed,
                                      grid_of(grid_size));
    for (size_t i = 0; i < count; ++i) {
      rows[i].n = out[i].n;
      rows[i].psi = out[i].posterior.psi.radians();
      rows[i].kappa_R = out[i].posterior.kappa_R;
      rows[i].psi_star = out[i].posterior.psi_star.radians();
      rows[i].R_star = out[i].posterior.R_star;
      rows[i].envelope = out[i].envelope;
      rows[i].oracle_w1 = out[i].oracle_w1;
    }
  });
}

cs_status cs_selftest(cs_criterion_callback callback, void* user, int* failures) {
  return guarded([&] {
    int failed = 0;
    for (const CriterionResult& c : run_all()) {
      if (!c.passed) ++failed;
      if (callback != nullptr) callback(c.id, c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), c.seconds, user);
    }
    if (failures != nullptr) *failures = failed;
  });
}

}  // extern "C"
