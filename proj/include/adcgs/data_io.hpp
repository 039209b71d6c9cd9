#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adcgs/core.hpp"
#include "adcgs/matrix.hpp"

namespace adcgs {

struct Dataset {
  Matrix A;
  DenseVector b;
  std::vector<double> feature_means;  // empty unless standardized
  std::vector<double> feature_stds;
  std::string label_map = "none";
  bool standardized = false;

  std::size_t samples() const { return A.rows(); }
  std::size_t features() const { return A.cols(); }
};

enum class LabelMode {
  binary,      // map {0,1}, {1,2} or {-1,+1} onto {-1,+1}
  regression,  // keep raw targets
};

/// Reads "<label> <idx>:<val> ..." lines with 1-based, strictly increasing
/// indices; '#' starts a comment. Rows are densified when n <= 4096.
/// Throws ParseError carrying the 1-based line number.
Dataset parse_libsvm(std::istream& in, LabelMode mode = LabelMode::binary,
                     std::size_t min_features = 0);

/// Reads a plain or gzip-compressed LIBSVM file.
Dataset load_libsvm(const std::string& path, LabelMode mode = LabelMode::binary,
                    std::size_t min_features = 0);

/// Writes nonzero entries with shortest round-trip formatting.
void write_libsvm(std::ostream& out, const Dataset& ds);

/// Per-column centering and scaling by the population standard deviation;
/// constant columns are centered and keep divisor 1. The result is dense.
Dataset standardize(const Dataset& ds);

/// JSON with m, n, the label map and the standardization metadata.
void write_sidecar(const std::string& path, const Dataset& ds, std::string_view source);

enum class SyntheticKind {
  simplex_lsq,               // A ~ U[0,1], b = A x*, x* in the simplex
  ball_lsq_strongly_convex,  // sigma_min(A) >= 0.5, b = A x~, ||x~|| = 0.9 r
  lp_regression,             // standardized Gaussian A, noisy linear targets
  logistic_classification,   // Gaussian A, labels sign(A w + noise)
};

SyntheticKind parse_synthetic_kind(std::string_view name);
std::string to_string(SyntheticKind kind);

struct SyntheticSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  SyntheticKind kind = SyntheticKind::simplex_lsq;
  double radius = 1.0;  // ball kind
};

struct SyntheticInstance {
  Dataset data;
  DenseVector x_hint;  // planted solution (or planted weights)
};

/// Name of the pseudo-random generator behind every synthetic instance.
inline constexpr const char* kSyntheticRng = "mt19937_64/u53/box-muller";

/// Pure function of the spec: identical specs give bit-identical instances.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

}  // namespace adcgs
