#include "adcgs/data_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adcgs/errors.hpp"
#include "adcgs/feasible_set.hpp"

namespace adcgs {

namespace {

constexpr std::size_t kDensifyLimit = 4096;

double parse_real(std::string_view tok, std::size_t line, const char* what) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError(std::string("non-finite ") + what, line);
  return v;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw ParseError("malformed feature index '" + std::string(tok) + "'", line);
  }
  if (v <= 0) throw ParseError("feature index must be positive", line);
  return static_cast<std::size_t>(v);
}

std::string label_mapping(const std::vector<double>& labels, std::vector<double>& out) {
  std::set<double> seen(labels.begin(), labels.end());
  auto within = [&](std::initializer_list<double> allowed) {
    return std::all_of(seen.begin(), seen.end(), [&](double v) {
      return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    });
  };
  out = labels;
  if (within({-1.0, 1.0})) return "{-1,+1}";
  double low = 0.0;
  std::string name;
  if (within({0.0, 1.0})) {
    low = 0.0;
    name = "{0,1}->{-1,+1}";
  } else if (within({1.0, 2.0})) {
    low = 1.0;
    name = "{1,2}->{-1,+1}";
  } else {
    throw ConfigError("labels are not binary ({-1,+1}, {0,1} or {1,2})");
  }
  for (double& v : out) v = v == low ? -1.0 : 1.0;
  return name;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    cached_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  bool cached_ = false;
  double spare_ = 0.0;
};

std::vector<double> gaussian_matrix(Rng& rng, std::size_t m, std::size_t n) {
  std::vector<double> a(m * n);
  for (double& v : a) v = rng.normal();
  return a;
}

DenseVector random_direction(Rng& rng, std::size_t n, double length) {
  DenseVector v(n);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = rng.normal();
    norm = norm2(v);
  }
  for (double& x : v) x *= length / norm;
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, LabelMode mode, std::size_t min_features) {
  std::vector<double> labels;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::size_t n = min_features;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::istringstream tokens{std::string(line)};
    std::string tok;
    if (!(tokens >> tok)) continue;
    labels.push_back(parse_real(tok, line_no, "label"));

    std::size_t last = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ParseError("expected <index>:<value>, got '" + tok + "'", line_no);
      }
      const std::size_t idx = parse_index(std::string_view(tok).substr(0, colon), line_no);
      if (idx <= last) throw ParseError("feature indices must increase", line_no);
      last = idx;
      cols.push_back(idx - 1);
      vals.push_back(parse_real(std::string_view(tok).substr(colon + 1), line_no, "value"));
    }
    n = std::max(n, last);
    row_ptr.push_back(cols.size());
  }

  Dataset ds;
  const std::size_t m = labels.size();
  if (mode == LabelMode::binary) {
    ds.label_map = label_mapping(labels, labels);
  }
  ds.b = DenseVector(std::move(labels));
  Matrix a = Matrix::sparse(m, n, std::move(row_ptr), std::move(cols), std::move(vals));
  ds.A = n <= kDensifyLimit ? a.densified() : std::move(a);
  return ds;
}

Dataset load_libsvm(const std::string& path, LabelMode mode, std::size_t min_features) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw ConfigError("cannot open dataset '" + path + "'");
  std::string content;
  char buffer[1 << 16];
  int got = 0;
  while ((got = gzread(file, buffer, sizeof(buffer))) > 0) {
    content.append(buffer, static_cast<std::size_t>(got));
  }
  const bool failed = got < 0;
  gzclose(file);
  if (failed) throw ConfigError("failed to read dataset '" + path + "'");
  std::istringstream in(content);
  return parse_libsvm(in, mode, min_features);
}

void write_libsvm(std::ostream& out, const Dataset& ds) {
  const Matrix& a = ds.A;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out << format_double(ds.b[i]);
    if (a.is_sparse()) {
      for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
        out << ' ' << a.col_idx()[p] + 1 << ':' << format_double(a.values()[p]);
      }
    } else {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const double v = a.at(i, j);
        if (v != 0.0) out << ' ' << j + 1 << ':' << format_double(v);
      }
    }
    out << '\n';
  }
}

Dataset standardize(const Dataset& ds) {
  const std::size_t m = ds.samples();
  const std::size_t n = ds.features();
  if (m < 2) throw ContractViolation("standardize: need at least two samples");
  std::vector<double> a = ds.A.to_dense();
  std::vector<double> means(n, 0.0);
  std::vector<double> stds(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += a[i * n + j];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = a[i * n + j] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(m));
    const double div = sd > 0.0 ? sd : 1.0;
    for (std::size_t i = 0; i < m; ++i) a[i * n + j] = (a[i * n + j] - mean) / div;
    means[j] = mean;
    stds[j] = div;
  }
  Dataset out;
  out.A = Matrix::dense(m, n, std::move(a));
  out.b = ds.b;
  out.feature_means = std::move(means);
  out.feature_stds = std::move(stds);
  out.label_map = ds.label_map;
  out.standardized = true;
  return out;
}

void write_sidecar(const std::string& path, const Dataset& ds, std::string_view source) {
  nlohmann::json j;
  j["source"] = std::string(source);
  j["m"] = ds.samples();
  j["n"] = ds.features();
  j["label_map"] = ds.label_map;
  j["standardized"] = ds.standardized;
  j["feature_means"] = ds.feature_means;
  j["feature_stds"] = ds.feature_stds;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write sidecar '" + path + "'");
  out << j.dump(2) << '\n';
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "simplex_lsq") return SyntheticKind::simplex_lsq;
  if (name == "ball_lsq" || name == "ball_lsq_strongly_convex") {
    return SyntheticKind::ball_lsq_strongly_convex;
  }
  if (name == "lp_regression") return SyntheticKind::lp_regression;
  if (name == "logistic" || name == "logistic_classification") {
    return SyntheticKind::logistic_classification;
  }
  throw ConfigError("unknown synthetic kind '" + std::string(name) + "'");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::simplex_lsq:
      return "simplex_lsq";
    case SyntheticKind::ball_lsq_strongly_convex:
      return "ball_lsq_strongly_convex";
    case SyntheticKind::lp_regression:
      return "lp_regression";
    case SyntheticKind::logistic_classification:
      return "logistic_classification";
  }
  return "?";
}

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t m = spec.m;
  const std::size_t n = spec.n;
  if (m < 1 || n < 1) throw ConfigError("synthetic: m and n must be positive");
  Rng rng(spec.seed);
  SyntheticInstance out;
  Dataset& ds = out.data;

  switch (spec.kind) {
    case SyntheticKind::simplex_lsq: {
      std::vector<double> a(m * n);
      for (double& v : a) v = rng.uniform();
      DenseVector u(n);
      for (double& v : u) v = rng.uniform();
      out.x_hint = project_capped_simplex(u);
      ds.A = Matrix::dense(m, n, std::move(a));
      ds.b = ds.A.multiply(out.x_hint);
      break;
    }
    case SyntheticKind::ball_lsq_strongly_convex: {
      if (m < n) throw ConfigError("synthetic: strongly convex kind needs m >= n");
      if (!(spec.radius > 0.0)) throw ConfigError("synthetic: radius must be positive");
      std::vector<double> a = gaussian_matrix(rng, m, n);
      ds.A = Matrix::dense(m, n, a);
      for (int shift = 0; lambda_min_gram(ds.A) < 0.25; ++shift) {
        if (shift == 1000) throw NumericalError("synthetic: could not condition A");
        for (std::size_t i = 0; i < n; ++i) a[i * n + i] += 0.5;
        ds.A = Matrix::dense(m, n, a);
      }
      out.x_hint = random_direction(rng, n, 0.9 * spec.radius);
      ds.b = ds.A.multiply(out.x_hint);
      break;
    }
    case SyntheticKind::lp_regression: {
      ds.A = Matrix::dense(m, n, gaussian_matrix(rng, m, n));
      if (m >= 2) ds = standardize(ds);
      out.x_hint = random_direction(rng, n, 1.0);
      DenseVector b = ds.A.multiply(out.x_hint);
      for (double& v : b) v += 0.5 * rng.normal();
      ds.b = std::move(b);
      ds.label_map = "none";
      break;
    }
    case SyntheticKind::logistic_classification: {
      ds.A = Matrix::dense(m, n, gaussian_matrix(rng, m, n));
      out.x_hint = random_direction(rng, n, 1.0);
      DenseVector b = ds.A.multiply(out.x_hint);
      for (double& v : b) v = v + 0.1 * rng.normal() >= 0.0 ? 1.0 : -1.0;
      ds.b = std::move(b);
      ds.label_map = "{-1,+1}";
      break;
    }
  }
  return out;
}

}  // namespace adcgs
