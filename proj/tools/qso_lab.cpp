#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qso/classical.hpp"
#include "qso/convolution.hpp"
#include "qso/dynamics.hpp"
#include "qso/errors.hpp"
#include "qso/group.hpp"
#include "qso/qso_operator.hpp"
#include "qso/reporting.hpp"
#include "qso/simplex.hpp"
#include "qso/transform.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string group;
  std::vector<std::vector<int>> subgroup_generators;
  json mu = "uniform";
  json x0;  // optional: array or {"dirichlet_seed": k}
  std::string mode = "trajectory";
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;  // sweep; falls back to {seed}
  int steps = qso::kDefaultMaxSteps;
  double tol = qso::kDefaultConvergenceTol;
  std::string out = ".";
  int trials = 10;
  int window = 100'000;
  long long horizon = 1'000'000;
  int samples = 100;
  std::string classic_map = "zakharevitch";
  qso::VolterraParams volterra{1.0, 1.0, 1.0};
  bool force_dense = false;
  int max_order = qso::kDefaultEnumerationBound;
};

json load_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("bad JSON in " + path.string() + ": " + e.what());
  }
}

RunConfig load_config(const fs::path& path) {
  const json j = load_json_file(path);
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  RunConfig cfg;
  try {
    if (j.contains("group")) cfg.group = j.at("group").get<std::string>();
    if (j.contains("subgroup_generators"))
      cfg.subgroup_generators = j.at("subgroup_generators").get<std::vector<std::vector<int>>>();
    if (j.contains("mu")) cfg.mu = j.at("mu");
    if (j.contains("x0")) cfg.x0 = j.at("x0");
    if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("steps")) cfg.steps = j.at("steps").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("window")) cfg.window = j.at("window").get<int>();
    if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<long long>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    if (j.contains("classic_map")) cfg.classic_map = j.at("classic_map").get<std::string>();
    if (j.contains("volterra")) {
      const json& v = j.at("volterra");
      cfg.volterra = {v.at("a").get<double>(), v.at("b").get<double>(), v.at("c").get<double>()};
    }
    if (j.contains("force_dense")) cfg.force_dense = j.at("force_dense").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
  return cfg;
}

qso::Group make_group(const RunConfig& cfg) {
  if (cfg.group.empty()) throw ConfigError("no group descriptor given (config \"group\" or --group)");
  try {
    return qso::Group::parse(cfg.group);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

qso::Subgroup make_subgroup(const qso::Group& g, const RunConfig& cfg) {
  std::vector<int> gens;
  for (const auto& residues : cfg.subgroup_generators) {
    try {
      gens.push_back(g.index(residues));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad subgroup generator: ") + e.what());
    }
  }
  return qso::subgroup_closure(g, gens);
}

std::pair<qso::SimplexPoint, std::string> make_measure(const qso::Group& g, const json& mu) {
  try {
    if (mu.is_string()) {
      const auto s = mu.get<std::string>();
      if (s == "uniform") return {qso::SimplexPoint::uniform(g.order()), "uniform"};
      // anything else names a measure file: a JSON array in flat-index order
      const json arr = load_json_file(s);
      if (!arr.is_array()) throw ConfigError("measure file must hold a JSON array");
      return {qso::SimplexPoint::validated(arr.get<std::vector<double>>()), "file:" + s};
    }
    if (mu.is_array())
      return {qso::SimplexPoint::validated(mu.get<std::vector<double>>()), "inline"};
    if (mu.is_object() && mu.contains("dirichlet_seed")) {
      const auto k = mu.at("dirichlet_seed").get<std::uint64_t>();
      return {qso::SimplexPoint::dirichlet(g.order(), k), "dirichlet:" + std::to_string(k)};
    }
  } catch (const IoError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad measure: ") + e.what());
  }
  throw ConfigError("measure must be \"uniform\", an array, a file path, or {\"dirichlet_seed\": k}");
}

qso::SimplexPoint make_initial_point(int n, const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.x0.is_null()) return qso::SimplexPoint::dirichlet(n, seed);
  try {
    if (cfg.x0.is_array())
      return qso::SimplexPoint::validated(cfg.x0.get<std::vector<double>>());
    if (cfg.x0.is_object() && cfg.x0.contains("dirichlet_seed"))
      return qso::SimplexPoint::dirichlet(n, cfg.x0.at("dirichlet_seed").get<std::uint64_t>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad x0: ") + e.what());
  }
  throw ConfigError("x0 must be an array or {\"dirichlet_seed\": k}");
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string());
  os << content;
  if (!os) throw IoError("write failed: " + path.string());
}

void write_report(const fs::path& dir, ordered_json report) {
  report["generated_at"] = qso::iso8601_timestamp();
  write_text_file(dir / "report.json", report.dump(2) + "\n");
}

qso::QsoOperator build_from_config(const qso::Group& g, const RunConfig& cfg,
                                   std::string* mu_desc = nullptr) {
  auto h = make_subgroup(g, cfg);
  auto [mu, desc] = make_measure(g, cfg.mu);
  if (mu_desc) *mu_desc = desc;
  try {
    return qso::build_operator(g, h, std::move(mu));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ordered_json subgroup_json(const qso::Group& g, const qso::Subgroup& h) {
  ordered_json members = ordered_json::array();
  for (int m : h.members) members.push_back(g.element(m));
  return members;
}

// ---------------------------------------------------------------- trajectory

int run_trajectory(const RunConfig& cfg) {
  const auto g = make_group(cfg);
  std::string mu_desc;
  const auto op = build_from_config(g, cfg, &mu_desc);
  if (cfg.steps < 1) throw ConfigError("steps must be at least 1");
  if (!(cfg.tol > 0)) throw ConfigError("tol must be positive");
  const auto dir = prepare_out_dir(cfg);

  std::vector<std::uint64_t> seeds =
      cfg.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : cfg.seeds;
  const bool sweep = seeds.size() > 1;
  std::vector<qso::TrajectoryReport> reports(seeds.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    try {
      const auto x0 = make_initial_point(g.order(), cfg, seeds[i]);
      reports[i] = qso::iterate(op, x0, cfg.steps, cfg.tol);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ordered_json runs = ordered_json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string csv_name =
        sweep ? "series_seed" + std::to_string(seeds[i]) + ".csv" : "series.csv";
    std::ostringstream csv;
    qso::write_norm_series_csv(csv, reports[i]);
    write_text_file(dir / csv_name, csv.str());
    ordered_json run = qso::trajectory_summary(reports[i]);
    run["seed"] = seeds[i];
    run["series_csv"] = csv_name;
    runs.push_back(std::move(run));
  }

  ordered_json report;
  report["schema"] = "qso-lab/trajectory/1";
  report["group"] = g.label();
  report["subgroup"] = subgroup_json(g, op.subgroup());
  report["mu"] = mu_desc;
  report["max_steps"] = cfg.steps;
  report["tolerance"] = cfg.tol;
  report["runs"] = std::move(runs);
  write_report(dir, std::move(report));
  return 0;
}

// -------------------------------------------------------------------- cesaro

int run_cesaro(const RunConfig& cfg) {
  const auto g = make_group(cfg);
  std::string mu_desc;
  const auto op = build_from_config(g, cfg, &mu_desc);
  if (cfg.steps < 1) throw ConfigError("steps must be at least 1");
  const auto dir = prepare_out_dir(cfg);

  const auto x0 = make_initial_point(g.order(), cfg, cfg.seed);
  const int n = g.order();
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  qso::TrajectoryReport series;  // norms of the running average
  qso::SimplexPoint x = x0;
  for (int t = 0; t < cfg.steps; ++t) {
    for (int i = 0; i < n; ++i) acc[static_cast<std::size_t>(i)] += x[i];
    std::vector<double> avg = acc;
    for (double& v : avg) v /= (t + 1);
    const auto running = qso::SimplexPoint::validated(std::move(avg));
    series.sup_norm_series.push_back(qso::sup_norm(running));
    series.center_distance_series.push_back(qso::sup_distance_to_center(running));
    if (t + 1 < cfg.steps) x = op.apply(x);
  }
  series.steps = cfg.steps - 1;

  std::vector<double> avg = acc;
  for (double& v : avg) v /= cfg.steps;
  const auto average = qso::SimplexPoint::validated(std::move(avg));

  std::ostringstream csv;
  qso::write_norm_series_csv(csv, series);
  write_text_file(dir / "series.csv", csv.str());

  ordered_json report;
  report["schema"] = "qso-lab/cesaro/1";
  report["group"] = g.label();
  report["subgroup"] = subgroup_json(g, op.subgroup());
  report["mu"] = mu_desc;
  report["seed"] = cfg.seed;
  report["terms"] = cfg.steps;
  report["average"] = average.data();
  report["average_center_distance"] = qso::sup_distance_to_center(average);
  write_report(dir, std::move(report));
  return 0;
}

// --------------------------------------------------------------- exceptional

int run_exceptional(const RunConfig& cfg) {
  const auto g = make_group(cfg);
  const auto dir = prepare_out_dir(cfg);
  std::vector<qso::ExceptionalState> states;
  try {
    states = qso::enumerate_exceptional_states(g, cfg.max_order);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  ordered_json list = ordered_json::array();
  for (const auto& ex : states) {
    ordered_json entry;
    entry["shift"] = g.element(ex.shift);
    entry["subgroup_order"] = ex.subgroup.order();
    entry["subgroup"] = subgroup_json(g, ex.subgroup);
    entry["preperiod"] = ex.doubling_preperiod;
    entry["period"] = ex.doubling_period;
    if (ex.doubling_preperiod == 0 && ex.subgroup.order() < g.order()) {
      const auto inst = qso::instability_report(g, ex);
      entry["growth_factor"] = inst.growth_factor;
      entry["finite_difference_error"] = inst.finite_difference_error;
    }
    list.push_back(std::move(entry));
  }

  ordered_json report;
  report["schema"] = "qso-lab/exceptional/1";
  report["group"] = g.label();
  report["state_count"] = states.size();
  report["center_tangent_growth"] = qso::max_center_tangent_growth(g);
  report["states"] = std::move(list);
  write_report(dir, std::move(report));
  return 0;
}

// --------------------------------------------------------------- lemma-suite

int run_lemma_suite(const RunConfig& cfg) {
  const auto g = make_group(cfg);
  std::string mu_desc;
  const auto op = build_from_config(g, cfg, &mu_desc);
  const auto conv_op =
      qso::build_operator(g, qso::trivial_subgroup(g), qso::SimplexPoint::uniform(g.order()));
  const auto dir = prepare_out_dir(cfg);
  const int samples = std::max(cfg.samples, 1);
  constexpr double kTol = 1e-12;

  const auto stoch = op.check_stochasticity();

  double worst_monotonicity = 0.0;  // sup(Vx) - sup(x), trivial-subgroup operator
  double worst_chain = 0.0;         // along sup(Vx) <= sum x^2 <= f(sup x) <= sup x
  double worst_contraction = 0.0;   // sup(Vx) - f(sup x)
  for (int s = 0; s < samples; ++s) {
    const auto x =
        qso::SimplexPoint::dirichlet(g.order(), cfg.seed + static_cast<std::uint64_t>(s));
    const auto vx = conv_op.apply(x);
    const double p = qso::sup_norm(x);
    double sumsq = 0.0;
    for (double v : x.weights()) sumsq += v * v;
    const double fp = qso::envelope(p);
    worst_monotonicity = std::max(worst_monotonicity, qso::sup_norm(vx) - p);
    worst_chain = std::max({worst_chain, qso::sup_norm(vx) - sumsq, sumsq - fp, fp - p});
    worst_contraction = std::max(worst_contraction, qso::sup_norm(vx) - fp);
  }

  double envelope_branch_dev = 0.0, envelope_fixed_dev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double p = 1.0 / (k + 1);
    const double lo = k * p * p + (1.0 - k * p) * (1.0 - k * p);
    const double hi = (k + 1) * p * p;
    envelope_branch_dev = std::max(envelope_branch_dev, std::abs(lo - hi));
    envelope_fixed_dev =
        std::max(envelope_fixed_dev, std::abs(qso::envelope(1.0 / k) - 1.0 / k));
  }

  const auto q = qso::quotient(g, op.subgroup());
  const auto qop = qso::quotient_operator(op, op.subgroup());
  double worst_intertwining = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = qso::SimplexPoint::dirichlet(
        g.order(), cfg.seed + 1000 + static_cast<std::uint64_t>(s));
    const auto lhs = qso::factor_measure(op.apply(x), q);
    const auto rhs = qop.apply(qso::factor_measure(x, q));
    for (int i = 0; i < lhs.size(); ++i)
      worst_intertwining = std::max(worst_intertwining, std::abs(lhs[i] - rhs[i]));
  }

  const bool pass = stoch.within(kTol) && worst_monotonicity <= kTol && worst_chain <= kTol &&
                    worst_contraction <= kTol && envelope_branch_dev <= 1e-14 &&
                    envelope_fixed_dev <= 1e-14 && worst_intertwining <= kTol;

  ordered_json report;
  report["schema"] = "qso-lab/lemma-suite/1";
  report["group"] = g.label();
  report["subgroup"] = subgroup_json(g, op.subgroup());
  report["mu"] = mu_desc;
  report["samples"] = samples;
  report["stochasticity"] = {{"max_row_sum_deviation", stoch.max_row_sum_deviation},
                             {"max_symmetry_deviation", stoch.max_symmetry_deviation},
                             {"min_coefficient", stoch.min_coefficient}};
  report["sup_norm_monotonicity_violation"] = worst_monotonicity;
  report["norm_chain_violation"] = worst_chain;
  report["set_contraction_violation"] = worst_contraction;
  report["envelope_branch_deviation"] = envelope_branch_dev;
  report["envelope_fixed_point_deviation"] = envelope_fixed_dev;
  report["intertwining_deviation"] = worst_intertwining;
  report["pass"] = pass;
  write_report(dir, std::move(report));
  if (!pass) {
    std::cerr
        << "{\"error\":{\"code\":3,\"message\":\"lemma suite found a numeric invariant violation\"}}\n";
    return 3;
  }
  return 0;
}

// ------------------------------------------------------------------- classic

int run_classic(const RunConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  if (cfg.window < 1 || cfg.horizon < 2LL * cfg.window)
    throw ConfigError("need horizon >= 2*window");

  std::function<qso::SimplexPoint(const qso::SimplexPoint&)> step;
  ordered_json report;
  report["schema"] = "qso-lab/classic/1";
  report["map"] = cfg.classic_map;
  qso::SimplexPoint x0 = qso::SimplexPoint::validated({0.5, 0.3, 0.2});

  std::optional<qso::QsoOperator> op;
  bool log_orbit = false;
  if (cfg.classic_map == "zakharevitch") {
    log_orbit = true;  // plain doubles underflow onto a vertex and flatline
    report["nonergodic_predicate"] = qso::nonergodic_predicate({1.0, 1.0, 1.0});
    report["orbit"] = "log-coordinates";
  } else if (cfg.classic_map == "volterra") {
    const auto params = cfg.volterra;
    if (std::abs(params.a) > 1 || std::abs(params.b) > 1 || std::abs(params.c) > 1)
      throw ConfigError("Volterra parameters must lie in [-1, 1]");
    step = [params](const qso::SimplexPoint& x) { return qso::volterra_apply(params, x); };
    report["params"] = {{"a", params.a}, {"b", params.b}, {"c", params.c}};
    report["nonergodic_predicate"] = qso::nonergodic_predicate(params);
  } else if (cfg.classic_map == "group") {
    const auto g = make_group(cfg);
    std::string mu_desc;
    op.emplace(build_from_config(g, cfg, &mu_desc));
    report["group"] = g.label();
    report["mu"] = mu_desc;
    step = [&op](const qso::SimplexPoint& x) { return op->apply(x); };
    x0 = qso::SimplexPoint::dirichlet(g.order(), cfg.seed);
  } else {
    throw ConfigError("classic_map must be \"zakharevitch\", \"volterra\", or \"group\"");
  }
  if (cfg.x0.is_array()) x0 = make_initial_point(x0.size(), cfg, cfg.seed);

  std::vector<std::vector<double>> means;
  const double diagnostic =
      log_orbit
          ? qso::zakharevitch_log_diagnostic(x0, cfg.window, cfg.horizon, &means)
          : qso::ergodicity_diagnostic(step, x0, cfg.window, cfg.horizon, &means);

  std::ostringstream csv;
  csv << "window_end";
  for (int i = 0; i < x0.size(); ++i) csv << ",mean_" << i;
  for (int i = 0; i < x0.size(); ++i) csv << ",running_mean_" << i;
  csv << '\n';
  std::vector<double> running(static_cast<std::size_t>(x0.size()), 0.0);
  for (std::size_t w = 0; w < means.size(); ++w) {
    csv << (static_cast<long long>(w + 1) * cfg.window);
    for (double v : means[w]) csv << ',' << qso::format_double(v);
    for (std::size_t i = 0; i < running.size(); ++i) {
      running[i] += means[w][i];  // windows have equal length
      csv << ',' << qso::format_double(running[i] / static_cast<double>(w + 1));
    }
    csv << '\n';
  }
  write_text_file(dir / "window_means.csv", csv.str());

  report["x0"] = x0.data();
  report["window"] = cfg.window;
  report["horizon"] = cfg.horizon;
  report["diagnostic"] = diagnostic;
  report["note"] =
      "evidence-grade diagnostic: oscillation of windowed time averages, not a proof of (non-)ergodicity";
  write_report(dir, std::move(report));
  return 0;
}

// --------------------------------------------------------------------- bench

int run_bench(const RunConfig& cfg) {
  const auto g = make_group(cfg);
  if (!cfg.subgroup_generators.empty())
    throw ConfigError("bench mode needs the trivial subgroup");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.force_dense && g.order() > qso::kDefaultDenseBound)
    throw ConfigError("dense mode refused: group order " + std::to_string(g.order()) +
                      " exceeds the dense storage bound " +
                      std::to_string(qso::kDefaultDenseBound));
  const auto dir = prepare_out_dir(cfg);
  const int n = g.order();

  const qso::CharacterTransform plan(g);
  std::vector<std::string> path_names{"direct-serial", "direct-parallel", "transform"};
  std::optional<qso::QsoOperator> dense_op;
  if (cfg.force_dense) {
    dense_op.emplace(
        qso::build_operator(g, qso::trivial_subgroup(g), qso::SimplexPoint::uniform(n)));
    path_names.push_back("dense");
  }

  std::vector<std::vector<double>> micros(path_names.size());
  double max_deviation = 0.0;
  std::vector<double> ref(static_cast<std::size_t>(n)), par(static_cast<std::size_t>(n)),
      tra(static_cast<std::size_t>(n));
  for (int t = 0; t < cfg.trials; ++t) {
    const auto x = qso::SimplexPoint::dirichlet(n, cfg.seed + static_cast<std::uint64_t>(t));
    const auto time_us = [](auto&& fn) {
      const auto t0 = std::chrono::steady_clock::now();
      fn();
      const auto t1 = std::chrono::steady_clock::now();
      return std::chrono::duration<double, std::micro>(t1 - t0).count();
    };
    micros[0].push_back(time_us([&] { qso::self_convolve_reference(g, x.weights(), ref); }));
    micros[1].push_back(time_us([&] { qso::self_convolve_direct(g, x.weights(), par); }));
    micros[2].push_back(time_us([&] { plan.self_convolve(x.weights(), tra); }));
    if (dense_op) {
      std::optional<qso::SimplexPoint> dense_result;
      micros[3].push_back(time_us([&] { dense_result.emplace(dense_op->apply_dense(x)); }));
      for (int i = 0; i < n; ++i)
        max_deviation = std::max(max_deviation, std::abs((*dense_result)[i] - ref[i]));
    }
    for (int i = 0; i < n; ++i) {
      max_deviation = std::max(max_deviation, std::abs(ref[i] - par[i]));
      max_deviation = std::max(max_deviation, std::abs(ref[i] - tra[i]));
    }
  }

  const auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
    return v[idx];
  };

  std::ostringstream table, csv;
  table << "path            median_us    p95_us\n";
  csv << "path,median_us,p95_us\n";
  ordered_json paths = ordered_json::array();
  for (std::size_t p = 0; p < path_names.size(); ++p) {
    const double med = quantile(micros[p], 0.5);
    const double p95 = quantile(micros[p], 0.95);
    char line[160];
    std::snprintf(line, sizeof line, "%-15s %10.2f %10.2f\n", path_names[p].c_str(), med, p95);
    table << line;
    csv << path_names[p] << ',' << qso::format_double(med) << ',' << qso::format_double(p95)
        << '\n';
    paths.push_back(path_names[p]);
  }
  table << "max deviation between paths: " << qso::format_double(max_deviation) << "\n";
  std::cout << "bench " << g.label() << " (" << cfg.trials << " trials)\n" << table.str();
  write_text_file(dir / "timings.csv", csv.str());

  // timings vary run to run, so they live in timings.csv; report.json keeps
  // only the reproducible fields
  ordered_json report;
  report["schema"] = "qso-lab/bench/1";
  report["group"] = g.label();
  report["trials"] = cfg.trials;
  report["paths"] = std::move(paths);
  report["max_deviation"] = max_deviation;
  report["timings_csv"] = "timings.csv";
  write_report(dir, std::move(report));
  if (max_deviation > 1e-10) {
    std::cerr
        << "{\"error\":{\"code\":3,\"message\":\"convolution paths disagree beyond 1e-10\"}}\n";
    return 3;
  }
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.mode == "trajectory") return run_trajectory(cfg);
  if (cfg.mode == "cesaro") return run_cesaro(cfg);
  if (cfg.mode == "exceptional") return run_exceptional(cfg);
  if (cfg.mode == "lemma-suite") return run_lemma_suite(cfg);
  if (cfg.mode == "classic") return run_classic(cfg);
  if (cfg.mode == "bench") return run_bench(cfg);
  throw ConfigError("unknown mode: " + cfg.mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic stochastic operators on finite Abelian groups"};
  app.require_subcommand(0, 1);

  std::string config_path, group, mode, out;
  std::uint64_t seed = 0;
  int steps = 0;
  double tol = 0.0;
  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--group", group, "group descriptor, e.g. Z4xZ2");
  app.add_option("--mode", mode, "trajectory|cesaro|exceptional|lemma-suite|classic|bench");
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--steps", steps, "step budget / Cesaro term count");
  app.add_option("--tol", tol, "convergence tolerance");
  app.add_option("--out", out, "output directory");
  for (const char* name :
       {"trajectory", "cesaro", "exceptional", "lemma-suite", "classic", "bench"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    // flags win over config values
    if (app.count("--group")) cfg.group = group;
    if (app.count("--mode")) cfg.mode = mode;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--steps")) cfg.steps = steps;
    if (app.count("--tol")) cfg.tol = tol;
    if (app.count("--out")) cfg.out = out;
    for (const auto* sub : app.get_subcommands()) cfg.mode = sub->get_name();
    if (const char* env = std::getenv("QSO_LAB_MAX_ORDER")) {
      try {
        cfg.max_order = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigError("QSO_LAB_MAX_ORDER must be an integer");
      }
    }
    return dispatch(cfg);
  } catch (const qso::NumericError& e) {
    std::cerr << "{\"error\":{\"code\":3,\"message\":" << json(e.what()).dump() << "}}\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "{\"error\":{\"code\":4,\"message\":" << json(e.what()).dump() << "}}\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "{\"error\":{\"code\":4,\"message\":" << json(e.what()).dump() << "}}\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"code\":2,\"message\":" << json(e.what()).dump() << "}}\n";
    return 2;
  }
}
