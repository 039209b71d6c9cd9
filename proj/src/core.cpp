#include "adcgs/core.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "adcgs/errors.hpp"

namespace adcgs {

namespace {

void require_same_length(const DenseVector& a, const DenseVector& b,
                         const char* op) {
  if (a.size() != b.size()) {
    throw ContractViolation(std::string(op) + ": length mismatch (" +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
}

}  // namespace

DenseVector DenseVector::unit(std::size_t n, std::size_t i) {
  if (i >= n) throw ContractViolation("unit: index out of range");
  DenseVector e(n);
  e[i] = 1.0;
  return e;
}

bool DenseVector::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_length(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

DenseVector axpy_combine(double alpha, const DenseVector& a, double beta,
                         const DenseVector& b) {
  require_same_length(a, b, "axpy_combine");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i] + beta * b[i];
  return out;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

double squared_distance(const DenseVector& a, const DenseVector& b) {
  require_same_length(a, b, "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(const DenseVector& a, const DenseVector& b) {
  return std::sqrt(squared_distance(a, b));
}

void require_finite(const DenseVector& v, const char* what) {
  if (!v.all_finite()) {
    throw NumericalError(std::string("non-finite entry in ") + what);
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string("non-finite value for ") + what);
  }
}

const std::vector<std::string>& trace_csv_columns() {
  static const std::vector<std::string> columns = {
      "k",      "foo_calls", "lmo_calls", "elapsed_seconds",  "f_value",
      "primal_gap", "fw_gap", "eta_k",   "tau_k",           "delta_k",
      "L_k",    "L_hat_k",   "inner_iters_used", "hit_cap", "certified_bound"};
  return columns;
}

std::string trace_csv_header() {
  std::string out;
  for (const auto& c : trace_csv_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trace_csv_row(const TraceRecord& r) {
  std::ostringstream os;
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  os << r.k << ',' << r.foo_calls << ',' << r.lmo_calls << ','
     << format_double(r.elapsed_seconds) << ',' << format_double(r.f_value)
     << ',' << opt(r.primal_gap) << ',' << format_double(r.fw_gap) << ','
     << format_double(r.eta_k) << ',' << format_double(r.tau_k) << ','
     << format_double(r.delta_k) << ',' << format_double(r.L_k) << ','
     << format_double(r.L_hat_k) << ',' << r.inner_iters_used << ','
     << (r.hit_cap ? 1 : 0) << ',' << opt(r.certified_bound);
  return os.str();
}

}  // namespace adcgs
