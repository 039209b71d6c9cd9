#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adcgs/core.hpp"

namespace adcgs {

/// Conditions raised during a run that do not abort it.
struct RunFlags {
  std::int64_t hit_cap_count = 0;  // inner solves that stopped at the cap
  bool no_global_L = false;        // a surrogate smoothness constant was used
  bool stalled = false;            // backtracking exhausted
  bool diverged = false;           // objective increased under a fixed step
  std::vector<std::string> warnings;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  DenseVector x_final;
  std::optional<DenseVector> x_average;
  OracleCounters counters;
  RunFlags flags;
  bool stopped_on_gap = false;
};

using TraceSink = std::function<void(const TraceRecord&)>;

struct RunOptions {
  /// Reference optimal value; fills TraceRecord::primal_gap when set.
  std::optional<double> f_ref;
  /// Receives every record as soon as it is produced.
  TraceSink sink;
};

/// Common interface of AdCGS and the baselines so that one loop applies the
/// same stopping rule, timing and accounting to all of them.
class IterativeMethod {
 public:
  virtual ~IterativeMethod() = default;
  /// Performs the setup work and returns the k = 0 record.
  virtual TraceRecord initial_record() = 0;
  /// Advances one outer iteration and returns its record.
  virtual TraceRecord step() = 0;
  /// True when the method cannot continue (stall, divergence).
  virtual bool halted() const { return false; }
  virtual const DenseVector& current() const = 0;
  virtual const OracleCounters& counters() const = 0;
  virtual const RunFlags& flags() const = 0;
  virtual std::optional<DenseVector> average() const { return std::nullopt; }
};

/// Emits the k = 0 record, then steps until fw_gap <= stop_gap, k reaches
/// max_iter or the method halts.
RunResult run_method(IterativeMethod& method, double stop_gap, std::int64_t max_iter,
                     const RunOptions& options = {});

}  // namespace adcgs
