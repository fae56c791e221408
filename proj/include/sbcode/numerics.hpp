#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sbcode {

using Vector = std::vector<double>;

// Dense row-major matrix. Assignment matrices additionally keep every entry
// exactly 0.0 or 1.0; that invariant is enforced where they are built.
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> entries;  // row-major, rows*cols

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c, double fill = 0.0);

  double& at(std::int64_t i, std::int64_t j) { return entries[i * cols + j]; }
  double at(std::int64_t i, std::int64_t j) const {
    return entries[i * cols + j];
  }
};

// Minimum-Euclidean-norm minimizer of ||a x - b||_2, computed by SVD on the
// submatrix of nonzero columns with relative singular-value cutoff sv_tol.
// Coordinates of identically-zero columns of `a` come back exactly 0.
Vector solve_min_norm_least_squares(const Matrix& a, const Vector& b,
                                    double sv_tol = 1e-10);

// Copy of g with every column outside `keep` zeroed; shape preserved.
Matrix mask_columns(const Matrix& g, std::span<const std::int64_t> keep);

// ln C(n, r) via log-gamma.
double log_binomial(std::int64_t n, std::int64_t r);

Vector matvec(const Matrix& m, const Vector& v);

}  // namespace sbcode
