#include "adcgs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "adcgs/baselines.hpp"
#include "adcgs/config_parse.hpp"
#include "adcgs/errors.hpp"
#include "adcgs/solver.hpp"

namespace adcgs {

namespace {

using nlohmann::json;

struct RunOutcome {
  Algorithm alg;
  std::uint64_t seed;
  std::vector<TraceRecord> trace;
  RunFlags flags;
  OracleCounters counters;
  double wall_seconds = 0.0;
  std::string status = "ok";
  std::string error;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> field_value(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_array()) {
    for (const auto& s : j) seeds.push_back(s.get<std::uint64_t>());
  } else {
    seeds.push_back(j.get<std::uint64_t>());
  }
  return seeds;
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "adcgs") return Algorithm::adcgs;
  if (name == "adcgs-ls1") return Algorithm::adcgs_ls1;
  if (name == "cg-open") return Algorithm::cg_open;
  if (name == "cg-ls") return Algorithm::cg_ls;
  if (name == "cgs") return Algorithm::cgs;
  if (name == "pg") return Algorithm::pg;
  if (name == "acfgm") return Algorithm::acfgm;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (adcgs|adcgs-ls1|cg-open|cg-ls|cgs|pg|acfgm)");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::adcgs:
      return "adcgs";
    case Algorithm::adcgs_ls1:
      return "adcgs-ls1";
    case Algorithm::cg_open:
      return "cg-open";
    case Algorithm::cg_ls:
      return "cg-ls";
    case Algorithm::cgs:
      return "cgs";
    case Algorithm::pg:
      return "pg";
    case Algorithm::acfgm:
      return "acfgm";
  }
  return "?";
}

bool needs_projection(Algorithm a) { return a == Algorithm::pg || a == Algorithm::acfgm; }

Problem build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  const ObjectiveChoice choice = parse_objective(spec.objective);
  if (spec.data_path.has_value() == spec.synthetic.has_value()) {
    throw ConfigError("exactly one of a dataset path or a synthetic spec is required");
  }

  Dataset data;
  std::optional<double> f_star;
  if (spec.data_path) {
    const LabelMode mode =
        choice.kind == ObjectiveKind::logistic ? LabelMode::binary : LabelMode::regression;
    data = load_libsvm(*spec.data_path, mode);
  } else {
    const KeyedSpec kv = parse_keyed_spec("synthetic:" + *spec.synthetic);
    kv.require_only({"m", "n", "kind"});
    SyntheticSpec s;
    s.m = static_cast<std::size_t>(kv.get_int("m"));
    s.n = static_cast<std::size_t>(kv.get_int("n"));
    s.seed = seed;
    if (auto kind = kv.get("kind")) {
      s.kind = parse_synthetic_kind(*kind);
    } else if (choice.kind == ObjectiveKind::logistic) {
      s.kind = SyntheticKind::logistic_classification;
    } else if (choice.kind == ObjectiveKind::lp_loss) {
      s.kind = SyntheticKind::lp_regression;
    } else if (spec.set.rfind("simplex", 0) == 0) {
      s.kind = SyntheticKind::simplex_lsq;
    } else {
      s.kind = SyntheticKind::ball_lsq_strongly_convex;
    }
    if (s.kind == SyntheticKind::ball_lsq_strongly_convex) {
      s.radius = FeasibleSet::parse(spec.set, s.n).radius();
      if (!(s.radius > 0.0)) throw ConfigError("the ball instance needs an l2ball set");
    }
    SyntheticInstance inst = generate_synthetic(s);
    data = std::move(inst.data);
    const bool planted = s.kind == SyntheticKind::simplex_lsq ||
                         s.kind == SyntheticKind::ball_lsq_strongly_convex;
    if (planted && choice.kind == ObjectiveKind::least_squares && !spec.standardize) {
      f_star = 0.0;
    }
  }
  if (spec.standardize) data = standardize(data);

  FeasibleSet set = FeasibleSet::parse(spec.set, data.features());
  Objective obj = make_objective(choice, data.A, data.b);
  DenseVector x0 = set.default_start();
  return Problem{std::move(data), std::move(obj), std::move(set), std::move(x0), f_star};
}

void apply_config_json(RunConfig& cfg, std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "problem") {
        cfg.problem.objective = v.get<std::string>();
      } else if (key == "set") {
        cfg.problem.set = v.get<std::string>();
      } else if (key == "data") {
        cfg.problem.data_path = v.get<std::string>();
      } else if (key == "synthetic") {
        cfg.problem.synthetic = v.get<std::string>();
      } else if (key == "standardize") {
        cfg.problem.standardize = v.get<bool>();
      } else if (key == "alg") {
        cfg.algorithms.clear();
        if (v.is_array()) {
          for (const auto& a : v) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
        } else {
          std::istringstream list(v.get<std::string>());
          std::string name;
          while (std::getline(list, name, ',')) {
            if (!name.empty()) cfg.algorithms.push_back(parse_algorithm(name));
          }
        }
      } else if (key == "schedule") {
        cfg.schedule.variant = parse_schedule_variant(v.get<std::string>());
      } else if (key == "alpha") {
        cfg.schedule.alpha = v.get<double>();
      } else if (key == "beta") {
        cfg.schedule.beta = v.get<double>();
      } else if (key == "theta") {
        cfg.schedule.theta = v.get<double>();
      } else if (key == "N") {
        cfg.schedule.N = v.get<std::int64_t>();
      } else if (key == "gamma") {
        cfg.schedule.gamma = v.get<double>();
      } else if (key == "eta1_scale") {
        cfg.schedule.eta1_scale = v.get<double>();
      } else if (key == "max_inner") {
        cfg.schedule.max_inner = v.get<std::int64_t>();
      } else if (key == "L") {
        cfg.L_override = v.get<double>();
      } else if (key == "seeds") {
        cfg.seeds = parse_seeds(v);
      } else if (key == "max_iter") {
        cfg.max_iter = v.get<std::int64_t>();
      } else if (key == "stop_gap") {
        cfg.stop_gap = v.get<double>();
      } else if (key == "out") {
        cfg.out_dir = v.get<std::string>();
      } else if (key == "emit_bound") {
        cfg.emit_bound = v.get<bool>();
      } else if (key == "reference") {
        cfg.reference = v.get<bool>();
      } else if (key == "workers") {
        cfg.workers = v.get<int>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON has a value of the wrong type: ") + e.what());
  }
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.algorithms.empty()) throw ConfigError("no algorithm selected");
  if (cfg.seeds.empty()) throw ConfigError("no seeds given");
  if (cfg.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(cfg.stop_gap >= 0.0)) throw ConfigError("stop gap must be nonnegative");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  cfg.schedule.validate();
  parse_objective(cfg.problem.objective);
  // Only the set kind matters here; a large n keeps any valid K acceptable.
  const FeasibleSet probe = FeasibleSet::parse(cfg.problem.set, std::size_t{1} << 30);
  for (Algorithm a : cfg.algorithms) {
    if (needs_projection(a) && !probe.supports_projection()) {
      throw UnsupportedOperation("projection unsupported for set " + cfg.problem.set +
                                 " (algorithm " + to_string(a) + ")");
    }
  }
}

RunResult run_algorithm(Algorithm alg, const Problem& p, const RunConfig& cfg,
                        const RunOptions& options) {
  switch (alg) {
    case Algorithm::adcgs:
    case Algorithm::adcgs_ls1: {
      ScheduleConfig s = cfg.schedule;
      s.max_outer = cfg.max_iter;
      s.outer_stop_gap = cfg.stop_gap;
      if (alg == Algorithm::adcgs_ls1) s.eta1_mode = Eta1Mode::line_search;
      return run_adcgs(p.objective, p.set, s, p.x0, options);
    }
    default: {
      BaselineConfig b;
      b.algorithm = parse_baseline(to_string(alg));
      b.L_override = cfg.L_override;
      b.max_iter = cfg.max_iter;
      b.stop_gap = cfg.stop_gap;
      b.alpha = alg == Algorithm::acfgm ? cfg.schedule.alpha : 0.5;
      b.max_inner = cfg.schedule.max_inner;
      return run_baseline(p.objective, p.set, b, p.x0, options);
    }
  }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace,
                     std::optional<double> f_ref, bool emit_bound) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << trace_csv_header() << '\n';
  for (TraceRecord r : trace) {
    if (f_ref) r.primal_gap = std::max(0.0, r.f_value - *f_ref);
    if (!emit_bound) r.certified_bound.reset();
    out << trace_csv_row(r) << '\n';
  }
}

int run_experiment(const RunConfig& cfg) {
  try {
    validate_run_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  const std::size_t n_seeds = cfg.seeds.size();
  std::vector<std::vector<RunOutcome>> outcomes(n_seeds);
  std::vector<std::optional<double>> references(n_seeds);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> config_failed{false};
  std::mutex log_mutex;

  auto work = [&]() {
    for (std::size_t i = next++; i < n_seeds; i = next++) {
      const std::uint64_t seed = cfg.seeds[i];
      std::optional<Problem> problem;
      try {
        problem.emplace(build_problem(cfg.problem, seed));
        references[i] = problem->f_star;
        if (cfg.reference) {
          const ReferenceSolution ref =
              reference_solution(problem->objective, problem->set, 1e-13, 20000);
          references[i] = references[i] ? std::min(*references[i], ref.f_value) : ref.f_value;
        }
      } catch (const ConfigError& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << "configuration error: " << e.what() << '\n';
        config_failed = true;
        continue;
      } catch (const UnsupportedOperation& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << "configuration error: " << e.what() << '\n';
        config_failed = true;
        continue;
      }
      for (Algorithm alg : cfg.algorithms) {
        RunOutcome o{alg, seed, {}, {}, {}, 0.0, "ok", {}};
        RunOptions opts;
        opts.sink = [&o](const TraceRecord& r) { o.trace.push_back(r); };
        const auto start = std::chrono::steady_clock::now();
        try {
          RunResult res = run_algorithm(alg, *problem, cfg, opts);
          o.flags = std::move(res.flags);
          o.counters = res.counters;
        } catch (const Error& e) {
          const bool numerical = dynamic_cast<const NumericalError*>(&e) != nullptr;
          o.status = numerical ? "numerical_abort" : "error";
          o.error = e.what();
          if (!numerical) config_failed = true;
          std::lock_guard lock(log_mutex);
          std::cerr << to_string(alg) << " seed " << seed << ": " << e.what() << '\n';
        }
        o.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.trace.empty()) {
          o.counters.foo_calls = std::max(o.counters.foo_calls, o.trace.back().foo_calls);
          o.counters.lmo_calls = std::max(o.counters.lmo_calls, o.trace.back().lmo_calls);
        }
        outcomes[i].push_back(std::move(o));
      }
    }
  };

  const int n_workers = std::min<int>(cfg.workers, static_cast<int>(n_seeds));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  json summary;
  summary["runs"] = json::array();
  bool numerical_failure = false;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    std::optional<double> f_ref = references[i];
    for (const RunOutcome& o : outcomes[i]) {
      for (const TraceRecord& r : o.trace) {
        f_ref = f_ref ? std::min(*f_ref, r.f_value) : r.f_value;
      }
    }
    for (const RunOutcome& o : outcomes[i]) {
      const std::string file = to_string(o.alg) + "_seed" + std::to_string(o.seed) + ".csv";
      write_trace_csv((std::filesystem::path(cfg.out_dir) / file).string(), o.trace, f_ref,
                      cfg.emit_bound);
      json run;
      run["algorithm"] = to_string(o.alg);
      run["seed"] = o.seed;
      run["csv"] = file;
      run["status"] = o.status;
      if (!o.error.empty()) run["error"] = o.error;
      run["iterations"] = o.trace.empty() ? 0 : o.trace.back().k;
      if (!o.trace.empty()) {
        run["final_f"] = o.trace.back().f_value;
        run["final_fw_gap"] = o.trace.back().fw_gap;
        if (f_ref) run["final_primal_gap"] = std::max(0.0, o.trace.back().f_value - *f_ref);
      }
      run["foo_calls"] = o.counters.foo_calls;
      run["lmo_calls"] = o.counters.lmo_calls;
      run["projection_calls"] = o.counters.projection_calls;
      run["wall_seconds"] = o.wall_seconds;
      run["flags"] = {{"hit_cap_count", o.flags.hit_cap_count},
                      {"no_global_L", o.flags.no_global_L},
                      {"stalled", o.flags.stalled},
                      {"diverged", o.flags.diverged},
                      {"warnings", o.flags.warnings}};
      summary["runs"].push_back(run);
      numerical_failure = numerical_failure || o.status == "numerical_abort";
    }
    if (f_ref) summary["f_ref"][std::to_string(cfg.seeds[i])] = *f_ref;
  }
  summary["synthetic_rng"] = kSyntheticRng;
  std::ofstream(std::filesystem::path(cfg.out_dir) / "summary.json") << summary.dump(2)
                                                                       << '\n';
  if (config_failed) return 2;
  return numerical_failure ? 3 : 0;
}

void summarize(const std::vector<std::string>& csv_paths, const std::string& out_path) {
  if (csv_paths.empty()) throw ConfigError("summarize: no input files");
  const auto& columns = trace_csv_columns();
  const auto col = [&](const char* name) {
    return static_cast<std::size_t>(
        std::find(columns.begin(), columns.end(), name) - columns.begin());
  };
  const std::size_t k_col = col("k");
  const std::size_t pg_col = col("primal_gap");
  const std::size_t fw_col = col("fw_gap");

  std::map<std::int64_t, std::pair<std::vector<double>, std::vector<double>>> by_k;
  std::map<std::int64_t, std::size_t> runs_at_k;
  for (const std::string& path : csv_paths) {
    std::ifstream in(path);
    if (!in) throw ConfigError("summarize: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != trace_csv_header()) {
      throw ConfigError("summarize: schema mismatch in '" + path + "'");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != columns.size()) {
        throw ConfigError("summarize: wrong field count in '" + path + "'");
      }
      const std::int64_t k = std::stoll(fields[k_col]);
      ++runs_at_k[k];
      if (auto v = field_value(fields[pg_col])) by_k[k].first.push_back(*v);
      if (auto v = field_value(fields[fw_col])) by_k[k].second.push_back(*v);
    }
  }

  std::ofstream out(out_path);
  if (!out) throw ConfigError("summarize: cannot write '" + out_path + "'");
  out << "k,n_runs,primal_gap_mean,primal_gap_std,fw_gap_mean,fw_gap_std\n";
  for (const auto& [k, count] : runs_at_k) {
    const auto& [pg, fw] = by_k[k];
    out << k << ',' << count;
    for (const auto* v : {&pg, &fw}) {
      if (v->empty()) {
        out << ",,";
      } else {
        const double m = mean_of(*v);
        out << ',' << format_double(m) << ',' << format_double(pop_std(*v, m));
      }
    }
    out << '\n';
  }
}

}  // namespace adcgs
