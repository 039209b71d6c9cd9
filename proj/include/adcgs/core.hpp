#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adcgs {

/// Fixed-length vector of doubles. Every iterate, gradient and direction in
/// the library is a DenseVector; the length never changes after construction.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  DenseVector(std::initializer_list<double> values) : data_(values) {}
  explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {}

  static DenseVector unit(std::size_t n, std::size_t i);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool all_finite() const;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

double dot(const DenseVector& a, const DenseVector& b);

/// Returns alpha * a + beta * b.
DenseVector axpy_combine(double alpha, const DenseVector& a, double beta,
                         const DenseVector& b);

double norm2(const DenseVector& a);
double squared_distance(const DenseVector& a, const DenseVector& b);
double distance(const DenseVector& a, const DenseVector& b);

/// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(const DenseVector& v, const char* what);
void require_finite(double value, const char* what);

/// Calls into the first-order oracle, the linear minimization oracle and the
/// projection oracle. Owned by a single solver run.
struct OracleCounters {
  std::int64_t foo_calls = 0;
  std::int64_t lmo_calls = 0;
  std::int64_t projection_calls = 0;
};

/// One row of a convergence trace.
struct TraceRecord {
  std::int64_t k = 0;
  std::int64_t foo_calls = 0;
  std::int64_t lmo_calls = 0;
  double elapsed_seconds = 0.0;
  double f_value = 0.0;
  std::optional<double> primal_gap;
  double fw_gap = 0.0;
  double eta_k = 0.0;
  double tau_k = 0.0;
  double delta_k = 0.0;
  double L_k = 0.0;
  double L_hat_k = 0.0;
  double L_lower_k = 0.0;  // kept in memory only; not a CSV column
  std::int64_t inner_iters_used = 0;
  bool hit_cap = false;
  std::optional<double> certified_bound;
};

/// Column names of the trace CSV, in order.
const std::vector<std::string>& trace_csv_columns();
std::string trace_csv_header();
std::string trace_csv_row(const TraceRecord& r);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace adcgs
