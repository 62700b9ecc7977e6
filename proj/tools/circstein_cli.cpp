// circstein command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "circstein/circstein.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitSelftest = 4;

struct Failure {
  int code;
  std::string message;
};

struct ConfigError : Failure {
  explicit ConfigError(std::string m) : Failure{kExitConfig, std::move(m)} {}
};

// Turns a failing C call into an exception carrying the exit code.
void check(cs_status status, const std::string& operation) {
  if (status == CS_OK) return;
  const int code = (status == CS_ERR_INVALID_ARGUMENT || status == CS_ERR_CONTRACT) ? kExitConfig : kExitNumeric;
  throw Failure{code, operation + " failed (" + cs_status_name(status) + "): " + cs_last_error()};
}

struct DistDeleter {
  void operator()(cs_distribution* d) const { cs_distribution_destroy(d); }
};
using Dist = std::unique_ptr<cs_distribution, DistDeleter>;

struct ReportDeleter {
  void operator()(cs_bound_report* r) const { cs_bound_report_destroy(r); }
};

std::string fetch_string(const std::function<cs_status(char*, size_t, size_t*)>& call, const std::string& op) {
  size_t needed = 0;
  check(call(nullptr, 0, &needed), op);
  std::string buf(needed, '\0');
  check(call(buf.data(), buf.size(), &needed), op);
  buf.resize(needed - 1);
  return buf;
}

json dist_json(const cs_distribution* d) {
  return json::parse(fetch_string(
      [d](char* b, size_t c, size_t* n) { return cs_distribution_to_json(d, b, c, n); }, "distribution"));
}

std::string describe(const cs_distribution* d) {
  return fetch_string([d](char* b, size_t c, size_t* n) { return cs_distribution_describe(d, b, c, n); },
                      "distribution");
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Options {
  std::string config_path;
  std::vector<std::string> families;
  std::vector<double> locations;
  std::vector<double> concentrations;
  std::optional<std::size_t> grid;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  // subcommand specific
  std::size_t points = 721;
  bool no_oracle = false;
  bool append = false;
  bool both = false;
  bool verify_shift = false;
  std::size_t mc_samples = 0;
  std::size_t replicates = 10;
  std::vector<std::size_t> sizes;
  std::optional<double> kappa;
  std::optional<double> kappa_star;
};

// Effective configuration after merging defaults, environment, file and flags.
struct RunConfig {
  std::string command;
  std::vector<json> distributions;
  std::size_t grid_size = 4096;
  std::uint64_t seed = 0;
  std::string output_path;
  std::string format = "csv";
  json extra = json::object();
};

template <class T>
T config_value(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: field '") + key + "' has the wrong type: " + e.what());
  }
}

RunConfig resolve(const std::string& command, const Options& o) {
  RunConfig cfg;
  cfg.command = command;
  if (const char* env = std::getenv("CIRCSTEIN_GRID"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(env, &used);
      if (used != std::string(env).size() || v < 2) throw std::invalid_argument(env);
      cfg.grid_size = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("CIRCSTEIN_GRID must be an integer >= 2 (got '") + env + "')");
    }
  }

  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("config: cannot open " + o.config_path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config: " + o.config_path + " is not valid JSON: " + e.what());
    }
    if (!file.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value.get<std::string>() != command) {
          throw ConfigError("config: file is for command '" + value.get<std::string>() + "', not '" + command + "'");
        }
      } else if (key == "distributions") {
        if (!value.is_array()) throw ConfigError("config: 'distributions' must be an array");
        for (const auto& d : value) cfg.distributions.push_back(d);
      } else if (key == "grid_size") {
        const auto g = config_value<long long>(file, "grid_size");
        if (g < 2) throw ConfigError("config: grid_size must be >= 2");
        cfg.grid_size = static_cast<std::size_t>(g);
      } else if (key == "seed") {
        cfg.seed = config_value<std::uint64_t>(file, "seed");
      } else if (key == "output_path") {
        cfg.output_path = config_value<std::string>(file, "output_path");
      } else if (key == "format") {
        cfg.format = config_value<std::string>(file, "format");
      } else if (key == "points" || key == "sizes" || key == "kappa" || key == "kappa_star" ||
                 key == "mc_samples" || key == "replicates") {
        cfg.extra[key] = value;
      } else {
        throw ConfigError("config: unknown field '" + key + "'");
      }
    }
  }

  if (!o.families.empty()) {
    if (o.locations.size() > o.families.size() || o.concentrations.size() > o.families.size()) {
      throw ConfigError("more --location/--concentration values than --family values");
    }
    cfg.distributions.clear();
    for (std::size_t i = 0; i < o.families.size(); ++i) {
      json d;
      d["family"] = o.families[i];
      if (i < o.locations.size()) d["location"] = o.locations[i];
      if (i < o.concentrations.size()) d["concentration"] = o.concentrations[i];
      cfg.distributions.push_back(d);
    }
  } else if (!o.locations.empty() || !o.concentrations.empty()) {
    throw ConfigError("--location/--concentration need a matching --family");
  }
  if (o.grid) {
    if (*o.grid < 2) throw ConfigError("--grid must be >= 2");
    cfg.grid_size = *o.grid;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.output_path = o.out;
  if (!o.format.empty()) cfg.format = o.format;
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("format must be csv or json (got '" + cfg.format + "')");
  }
  return cfg;
}

std::vector<Dist> build_distributions(const RunConfig& cfg, std::size_t expected) {
  if (cfg.distributions.size() != expected) {
    throw ConfigError(cfg.command + " needs " + std::to_string(expected) + " distribution(s), got " +
                      std::to_string(cfg.distributions.size()));
  }
  std::vector<Dist> out;
  for (const auto& d : cfg.distributions) {
    cs_distribution* raw = nullptr;
    const cs_status s = cs_distribution_from_json(d.dump().c_str(), &raw);
    if (s != CS_OK) throw ConfigError(std::string("invalid distribution ") + d.dump() + ": " + cs_last_error());
    out.emplace_back(raw);
  }
  return out;
}

std::string csv_banner(const RunConfig& cfg) {
  return std::string("# circstein ") + cs_version() + " command=" + cfg.command +
         " grid_size=" + std::to_string(cfg.grid_size) + " seed=" + std::to_string(cfg.seed) + "\n";
}

json json_header(const RunConfig& cfg) {
  json j;
  j["tool"] = "circstein";
  j["version"] = cs_version();
  j["command"] = cfg.command;
  j["grid_size"] = cfg.grid_size;
  j["seed"] = cfg.seed;
  return j;
}

void emit(const RunConfig& cfg, const std::string& text, bool append = false) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + cfg.output_path);
  out << text;
}

template <class T>
T extra_or(const RunConfig& cfg, const char* key, T fallback) {
  return cfg.extra.contains(key) ? config_value<T>(cfg.extra, key) : fallback;
}

int run_kernel(const RunConfig& cfg, const Options& o) {
  const auto dists = build_distributions(cfg, 1);
  const std::size_t points = o.points != 721 ? o.points : extra_or<std::size_t>(cfg, "points", 721);
  if (points < 2) throw ConfigError("--points must be >= 2");
  std::vector<double> thetas(points);
  for (std::size_t j = 0; j < points; ++j) {
    thetas[j] = -M_PI + 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(points - 1);
  }
  std::vector<cs_kernel_row> rows(points);
  check(cs_kernel_table(dists[0].get(), cfg.grid_size, thetas.data(), points, rows.data()), "kernel table");

  std::ostringstream s;
  if (cfg.format == "csv") {
    s << csv_banner(cfg) << "# distribution " << describe(dists[0].get()) << "\n";
    s << "theta,tau_classical,tau_circular_closed,tau_circular_numeric\n";
    for (const auto& r : rows) {
      s << num(r.theta) << ',' << num(r.tau_classical) << ',' << num(r.tau_circular_closed) << ','
        << num(r.tau_circular_numeric) << '\n';
    }
  } else {
    json j = json_header(cfg);
    j["distribution"] = dist_json(dists[0].get());
    json arr = json::array();
    for (const auto& r : rows) {
      json row;
      row["theta"] = r.theta;
      row["tau_classical"] = r.tau_classical;
      row["tau_circular_closed"] = std::isnan(r.tau_circular_closed) ? json(nullptr) : json(r.tau_circular_closed);
      row["tau_circular_numeric"] = r.tau_circular_numeric;
      arr.push_back(row);
    }
    j["rows"] = arr;
    s << j.dump(2) << '\n';
  }
  emit(cfg, s.str());
  return kExitOk;
}

std::string params_of(const json& d) {
  std::ostringstream s;
  s << "location=" << num(d.value("location", 0.0)) << ";concentration=" << num(d.value("concentration", 0.0));
  return s.str();
}

struct BoundRow {
  json base;
  json target;
  cs_bound_values values{};
  json report;
};

BoundRow compute_bound(const cs_distribution* base, const cs_distribution* target, const RunConfig& cfg,
                       const Options& o) {
  cs_bound_report* raw = nullptr;
  check(cs_sandwich_bounds(base, target, cfg.grid_size, o.no_oracle ? 0 : 1, &raw), "sandwich bounds");
  std::unique_ptr<cs_bound_report, ReportDeleter> report(raw);
  BoundRow row;
  check(cs_bound_report_values(report.get(), &row.values), "bound report");
  row.report = json::parse(fetch_string(
      [&](char* b, size_t c, size_t* n) { return cs_bound_report_json(report.get(), b, c, n); }, "bound report"));
  row.base = dist_json(base);
  row.target = dist_json(target);
  return row;
}

int run_bound(const RunConfig& cfg, const Options& o) {
  const auto dists = build_distributions(cfg, 2);
  std::vector<BoundRow> rows = {compute_bound(dists[0].get(), dists[1].get(), cfg, o)};
  if (o.both) rows.push_back(compute_bound(dists[1].get(), dists[0].get(), cfg, o));

  if (cfg.format == "json") {
    json j = json_header(cfg);
    if (o.both) {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(r.report);
      j["reports"] = arr;
    } else {
      j["report"] = rows.front().report;
    }
    emit(cfg, j.dump(2) + "\n");
    return kExitOk;
  }
  std::ostringstream s;
  const bool continuing = o.append && !cfg.output_path.empty() && std::filesystem::exists(cfg.output_path) &&
                          std::filesystem::file_size(cfg.output_path) > 0;
  if (!continuing) {
    s << csv_banner(cfg)
      << "base_family,base_params,target_family,target_params,lower,oracle_w1,upper,envelope,grid_size\n";
  }
  for (const auto& r : rows) {
    const cs_bound_values& v = r.values;
    s << r.base["family"].get<std::string>() << ',' << params_of(r.base) << ','
      << r.target["family"].get<std::string>() << ',' << params_of(r.target) << ',' << num(v.lower) << ','
      << (v.has_oracle ? num(v.oracle_w1) : "") << ',' << num(v.upper) << ','
      << (v.has_envelope ? num(v.envelope) : "") << ',' << v.grid_size << '\n';
  }
  emit(cfg, s.str(), continuing);
  return kExitOk;
}

int run_w1(const RunConfig& cfg, const Options& o) {
  const auto dists = build_distributions(cfg, 2);
  cs_w1_result w{};
  check(cs_circular_w1(dists[0].get(), dists[1].get(), cfg.grid_size, o.verify_shift ? 1 : 0, &w), "circular W1");
  const std::size_t mc = o.mc_samples != 0 ? o.mc_samples : extra_or<std::size_t>(cfg, "mc_samples", 0);
  const std::size_t reps = o.replicates != 10 ? o.replicates : extra_or<std::size_t>(cfg, "replicates", 10);
  double est = 0.0;
  double se = 0.0;
  if (mc > 0) {
    check(cs_empirical_w1(dists[0].get(), dists[1].get(), mc, cfg.seed, reps, cfg.grid_size, &est, &se),
          "empirical W1");
  }
  std::ostringstream s;
  if (cfg.format == "csv") {
    s << csv_banner(cfg) << "p,q,value,c_star,grid_search_value,empirical_estimate,empirical_std_error,grid_size\n";
    s << describe(dists[0].get()) << ',' << describe(dists[1].get()) << ',' << num(w.value) << ','
      << num(w.c_star) << ',' << (w.has_grid_search ? num(w.grid_search_value) : "") << ','
      << (mc > 0 ? num(est) : "") << ',' << (mc > 0 ? num(se) : "") << ',' << w.grid_size << '\n';
  } else {
    json j = json_header(cfg);
    j["p"] = dist_json(dists[0].get());
    j["q"] = dist_json(dists[1].get());
    j["value"] = w.value;
    j["c_star"] = w.c_star;
    j["grid_search_value"] = w.has_grid_search ? json(w.grid_search_value) : json(nullptr);
    if (mc > 0) j["empirical"] = {{"n", mc}, {"replicates", reps}, {"estimate", est}, {"std_error", se}};
    s << j.dump(2) << '\n';
  }
  emit(cfg, s.str());
  return kExitOk;
}

int run_bayes(const RunConfig& cfg, const Options& o) {
  // Data law defaults to VM(0.5, 2).
  RunConfig local = cfg;
  if (local.distributions.empty()) {
    local.distributions.push_back(json{{"family", "von_mises"}, {"location", 0.5}, {"concentration", 2.0}});
  }
  const auto dists = build_distributions(local, 1);
  std::vector<std::size_t> sizes = o.sizes;
  if (sizes.empty()) sizes = extra_or<std::vector<std::size_t>>(cfg, "sizes", {100, 400, 1600});
  const double kappa = o.kappa.value_or(extra_or<double>(cfg, "kappa", 2.0));
  const double kappa_star = o.kappa_star.value_or(extra_or<double>(cfg, "kappa_star", 1.0));
  std::vector<cs_bayes_row> rows(sizes.size());
  check(cs_bayes_experiment(dists[0].get(), sizes.data(), sizes.size(), kappa, kappa_star, cfg.seed, cfg.grid_size,
                            rows.data()),
        "bayes experiment");
  std::ostringstream s;
  if (cfg.format == "csv") {
    s << csv_banner(cfg) << "# data " << describe(dists[0].get()) << " kappa=" << num(kappa)
      << " kappa_star=" << num(kappa_star) << "\n";
    s << "n,psi,kappa_R,psi_star,R_star,envelope,oracle_w1\n";
    for (const auto& r : rows) {
      s << r.n << ',' << num(r.psi) << ',' << num(r.kappa_R) << ',' << num(r.psi_star) << ',' << num(r.R_star)
        << ',' << num(r.envelope) << ',' << num(r.oracle_w1) << '\n';
    }
  } else {
    json j = json_header(cfg);
    j["data_law"] = dist_json(dists[0].get());
    j["kappa"] = kappa;
    j["kappa_star"] = kappa_star;
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.n},
                     {"psi", r.psi},
                     {"kappa_R", r.kappa_R},
                     {"psi_star", r.psi_star},
                     {"R_star", r.R_star},
                     {"envelope", r.envelope},
                     {"oracle_w1", r.oracle_w1}});
    }
    j["rows"] = arr;
    s << j.dump(2) << '\n';
  }
  emit(cfg, s.str());
  return kExitOk;
}

int run_selftest(const RunConfig& cfg) {
  struct State {
    std::ostringstream text;
    json rows = json::array();
  } state;
  int failures = 0;
  check(cs_selftest(
            [](int id, const char* name, int passed, const char* detail, double seconds, void* user) {
              auto* st = static_cast<State*>(user);
              char line[64];
              std::snprintf(line, sizeof line, "%s [%2d] ", passed ? "PASS" : "FAIL", id);
              st->text << line << name << " (" << seconds << " s): " << detail << '\n';
              st->rows.push_back({{"id", id}, {"name", name}, {"passed", passed != 0}, {"detail", detail}});
            },
            &state, &failures),
        "selftest");
  if (cfg.format == "json" && !cfg.output_path.empty()) {
    json j = json_header(cfg);
    j["criteria"] = state.rows;
    j["failures"] = failures;
    emit(cfg, j.dump(2) + "\n");
    std::cout << state.text.str();
  } else {
    emit(cfg, state.text.str());
  }
  std::cerr << failures << " check(s) failed\n";
  return failures == 0 ? kExitOk : kExitSelftest;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON config file; flags override its fields");
  sub->add_option("--family", o.families, "distribution family (repeat for a second distribution)");
  sub->add_option("--location", o.locations, "location in radians (repeatable)");
  sub->add_option("--concentration", o.concentrations, "concentration parameter (repeatable)");
  sub->add_option("--grid", o.grid, "quadrature nodes (default 4096 or $CIRCSTEIN_GRID)");
  sub->add_option("--seed", o.seed, "random seed (default 0)");
  sub->add_option("--out", o.out, "output file (default stdout)");
  sub->add_option("--format", o.format, "csv or json (default csv)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein kernels and Wasserstein bounds for circular distributions"};
  app.set_version_flag("--version", std::string("circstein ") + cs_version());
  app.require_subcommand(1);
  Options o;

  auto* kernel = app.add_subcommand("kernel", "tabulate classical and circular Stein kernels");
  add_common(kernel, o);
  kernel->add_option("--points", o.points, "evaluation points including both ends (default 721)");

  auto* bound = app.add_subcommand("bound", "sandwich bounds on W1(target, base); first distribution is the base");
  add_common(bound, o);
  bound->add_flag("--no-oracle", o.no_oracle, "skip the W1 oracle");
  bound->add_flag("--both", o.both, "also report the reverse orientation (target as base)");
  bound->add_flag("--append", o.append, "append a CSV row to --out without repeating the header");

  auto* w1 = app.add_subcommand("w1", "circular Wasserstein-1 distance between two distributions");
  add_common(w1, o);
  w1->add_flag("--verify-shift", o.verify_shift, "also minimise over 10^5 candidate shifts");
  w1->add_option("--mc-samples", o.mc_samples, "add a Monte Carlo estimate with this many samples (>= 1000)");
  w1->add_option("--replicates", o.replicates, "Monte Carlo replicates (default 10)");

  auto* bayes = app.add_subcommand("bayes", "compare the two von Mises posteriors for simulated data");
  add_common(bayes, o);
  bayes->add_option("--n", o.sizes, "sample sizes (default 100 400 1600)");
  bayes->add_option("--kappa", o.kappa, "known data concentration (default 2)");
  bayes->add_option("--kappa-star", o.kappa_star, "prior concentration of model 2 (default 1)");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");
  add_common(selftest, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const RunConfig cfg = resolve(chosen->get_name(), o);
    if (chosen == kernel) return run_kernel(cfg, o);
    if (chosen == bound) return run_bound(cfg, o);
    if (chosen == w1) return run_w1(cfg, o);
    if (chosen == bayes) return run_bayes(cfg, o);
    return run_selftest(cfg);
  } catch (const Failure& f) {
    std::cerr << "circstein: " << f.message << '\n';
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "circstein: config: " << e.what() << '\n';
    return kExitConfig;
  }
}
