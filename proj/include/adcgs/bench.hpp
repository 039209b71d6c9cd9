#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adcgs/data_io.hpp"
#include "adcgs/feasible_set.hpp"
#include "adcgs/harness.hpp"
#include "adcgs/objective.hpp"
#include "adcgs/schedule.hpp"

namespace adcgs {

enum class Algorithm { adcgs, adcgs_ls1, cg_open, cg_ls, cgs, pg, acfgm };

Algorithm parse_algorithm(std::string_view name);
std::string to_string(Algorithm a);
bool needs_projection(Algorithm a);

struct ProblemSpec {
  std::string objective = "lsq";
  std::string set = "simplex";
  std::optional<std::string> data_path;
  /// "m=<int>,n=<int>[,kind=<name>]"; the run seed drives the generator.
  std::optional<std::string> synthetic;
  bool standardize = false;
};

struct Problem {
  Dataset data;
  Objective objective;
  FeasibleSet set;
  DenseVector x0;
  /// Known optimal value (planted zero-residual instances).
  std::optional<double> f_star;
};

Problem build_problem(const ProblemSpec& spec, std::uint64_t seed);

struct RunConfig {
  ProblemSpec problem;
  std::vector<Algorithm> algorithms{Algorithm::adcgs};
  ScheduleConfig schedule;
  std::optional<double> L_override;
  std::vector<std::uint64_t> seeds{1};
  std::int64_t max_iter = 1000;
  double stop_gap = 1e-10;
  std::string out_dir = ".";
  bool emit_bound = false;
  /// Also compute a high-accuracy reference value for the primal gap.
  bool reference = false;
  int workers = 1;
};

/// Overlays the keys of a JSON object onto `cfg`. Keys mirror the CLI flags.
void apply_config_json(RunConfig& cfg, std::string_view json_text);

/// Rejects incompatible algorithm/set pairs before anything runs.
void validate_run_config(const RunConfig& cfg);

/// Runs one algorithm on one problem with the shared stopping rule.
RunResult run_algorithm(Algorithm alg, const Problem& problem, const RunConfig& cfg,
                        const RunOptions& options = {});

/// Runs every (seed, algorithm) pair, writes <alg>_seed<seed>.csv and
/// summary.json under cfg.out_dir. Primal gaps are measured against the
/// smallest value among the reference and all traces of the same seed.
/// Returns 0 on success, 2 on a configuration error, 3 on a numerical abort.
int run_experiment(const RunConfig& cfg);

/// Per-iteration mean and population std of primal_gap and fw_gap across
/// trace CSVs, aligned on k. Throws ConfigError on a schema mismatch.
void summarize(const std::vector<std::string>& csv_paths, const std::string& out_path);

/// Writes trace rows with primal gaps relative to f_ref.
void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace,
                     std::optional<double> f_ref, bool emit_bound);

}  // namespace adcgs
