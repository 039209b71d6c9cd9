#include "adcgs/harness.hpp"

#include <algorithm>
#include <chrono>

namespace adcgs {

RunResult run_method(IterativeMethod& method, double stop_gap, std::int64_t max_iter,
                     const RunOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  RunResult result;

  auto emit = [&](TraceRecord rec) {
    rec.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (options.f_ref) rec.primal_gap = std::max(0.0, rec.f_value - *options.f_ref);
    if (options.sink) options.sink(rec);
    result.trace.push_back(rec);
    return rec;
  };

  TraceRecord rec = emit(method.initial_record());
  while (true) {
    if (rec.fw_gap <= stop_gap) {
      result.stopped_on_gap = true;
      break;
    }
    if (rec.k >= max_iter || method.halted()) break;
    rec = emit(method.step());
  }
  result.x_final = method.current();
  result.x_average = method.average();
  result.counters = method.counters();
  result.flags = method.flags();
  return result;
}

}  // namespace adcgs
