#pragma once

#include <cstddef>
#include <vector>

#include "adcgs/core.hpp"

namespace adcgs {

/// Data matrix A (m x n). Stored either dense row-major or as compressed
/// sparse rows; all products are computed row by row so results do not depend
/// on thread scheduling.
class Matrix {
 public:
  Matrix() = default;

  static Matrix dense(std::size_t rows, std::size_t cols,
                      std::vector<double> row_major);
  static Matrix sparse(std::size_t rows, std::size_t cols,
                       std::vector<std::size_t> row_ptr,
                       std::vector<std::size_t> col_idx,
                       std::vector<double> values);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);
  static Matrix zeros(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_sparse() const { return sparse_; }

  /// A x (length rows()).
  DenseVector multiply(const DenseVector& x) const;
  /// A^T y (length cols()).
  DenseVector multiply_transpose(const DenseVector& y) const;

  double at(std::size_t i, std::size_t j) const;
  Matrix densified() const;

  /// Row-major copy of the dense form.
  std::vector<double> to_dense() const;

  /// n x n Gram matrix A^T A, row-major.
  std::vector<double> gram() const;

  // Raw CSR access (valid only when is_sparse()).
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool sparse_ = false;
  std::vector<double> values_;        // dense row-major or CSR values
  std::vector<std::size_t> row_ptr_;  // CSR only
  std::vector<std::size_t> col_idx_;  // CSR only
};

/// Largest eigenvalue of A^T A by power iteration. Relative tolerance on the
/// Rayleigh quotient; throws EstimationError after `max_iter` iterations.
double lambda_max_gram(const Matrix& a, double tol = 1e-8,
                       int max_iter = 10000);

/// Smallest eigenvalue of A^T A by inverse power iteration on the Cholesky
/// factor of the Gram matrix. Returns 0 when A^T A is singular.
double lambda_min_gram(const Matrix& a, double tol = 1e-10,
                       int max_iter = 10000);

}  // namespace adcgs
