#include "adcgs/matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <random>

#include "adcgs/errors.hpp"

namespace adcgs {

Matrix Matrix::dense(std::size_t rows, std::size_t cols,
                     std::vector<double> row_major) {
  if (row_major.size() != rows * cols) {
    throw ContractViolation("Matrix::dense: storage size does not match shape");
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.values_ = std::move(row_major);
  return m;
}

Matrix Matrix::sparse(std::size_t rows, std::size_t cols,
                      std::vector<std::size_t> row_ptr,
                      std::vector<std::size_t> col_idx,
                      std::vector<double> values) {
  if (row_ptr.size() != rows + 1 || col_idx.size() != values.size() ||
      row_ptr.back() != values.size()) {
    throw ContractViolation("Matrix::sparse: inconsistent CSR arrays");
  }
  for (std::size_t c : col_idx) {
    if (c >= cols) throw ContractViolation("Matrix::sparse: column out of range");
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.sparse_ = true;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  return diagonal(std::vector<double>(n, 1.0));
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = d[i];
  return dense(n, n, std::move(v));
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
  return dense(rows, cols, std::vector<double>(rows * cols, 0.0));
}

DenseVector Matrix::multiply(const DenseVector& x) const {
  if (x.size() != cols_) throw ContractViolation("Matrix::multiply: length mismatch");
  DenseVector out(rows_);
  if (sparse_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        s += values_[p] * x[col_idx_[p]];
      }
      out[i] = s;
    }
  } else {
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* row = values_.data() + i * cols_;
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
      out[i] = s;
    }
  }
  return out;
}

DenseVector Matrix::multiply_transpose(const DenseVector& y) const {
  if (y.size() != rows_) {
    throw ContractViolation("Matrix::multiply_transpose: length mismatch");
  }
  DenseVector out(cols_);
  if (sparse_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      const double yi = y[i];
      if (yi == 0.0) continue;
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        out[col_idx_[p]] += values_[p] * yi;
      }
    }
  } else {
    for (std::size_t i = 0; i < rows_; ++i) {
      const double yi = y[i];
      if (yi == 0.0) continue;
      const double* row = values_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) out[j] += row[j] * yi;
    }
  }
  return out;
}

double Matrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw ContractViolation("Matrix::at: out of range");
  if (!sparse_) return values_[i * cols_ + j];
  for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
    if (col_idx_[p] == j) return values_[p];
  }
  return 0.0;
}

std::vector<double> Matrix::to_dense() const {
  if (!sparse_) return values_;
  std::vector<double> out(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      out[i * cols_ + col_idx_[p]] = values_[p];
    }
  }
  return out;
}

Matrix Matrix::densified() const { return dense(rows_, cols_, to_dense()); }

std::vector<double> Matrix::gram() const {
  std::vector<double> g(cols_ * cols_, 0.0);
  const auto d = to_dense();
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = d.data() + i * cols_;
    for (std::size_t a = 0; a < cols_; ++a) {
      if (row[a] == 0.0) continue;
      for (std::size_t b = a; b < cols_; ++b) g[a * cols_ + b] += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < cols_; ++a) {
    for (std::size_t b = 0; b < a; ++b) g[a * cols_ + b] = g[b * cols_ + a];
  }
  return g;
}

namespace {

DenseVector start_vector(std::size_t n) {
  std::mt19937_64 rng(0x5eed);
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = 1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  const double nv = norm2(v);
  for (auto& e : v) e /= nv;
  return v;
}

}  // namespace

double lambda_max_gram(const Matrix& a, double tol, int max_iter) {
  const std::size_t n = a.cols();
  if (n == 0) throw ContractViolation("lambda_max_gram: empty matrix");
  DenseVector v = start_vector(n);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    DenseVector av = a.multiply(v);
    const double rayleigh = dot(av, av);
    DenseVector w = a.multiply_transpose(av);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (it > 0 && std::abs(rayleigh - lambda) <= tol * rayleigh) {
      return std::max(rayleigh, lambda);
    }
    lambda = rayleigh;
  }
  throw EstimationError("power iteration did not converge; best estimate " +
                            format_double(lambda),
                        lambda);
}

double lambda_min_gram(const Matrix& a, double tol, int max_iter) {
  const std::size_t n = a.cols();
  if (n == 0) throw ContractViolation("lambda_min_gram: empty matrix");
  const auto g = a.gram();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      gm(g.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::LLT<Eigen::MatrixXd> llt(gm);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(start_vector(n).data(),
                                                        static_cast<Eigen::Index>(n));
  double mu_inv = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = llt.solve(v);
    const double rayleigh = v.dot(w);  // approximates 1 / lambda_min
    const double nw = w.norm();
    if (!std::isfinite(nw) || nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 0 && std::abs(rayleigh - mu_inv) <= tol * rayleigh) {
      return 1.0 / rayleigh;
    }
    mu_inv = rayleigh;
  }
  throw EstimationError("inverse power iteration did not converge",
                        mu_inv > 0 ? 1.0 / mu_inv : 0.0);
}

}  // namespace adcgs
