#include "sbcode/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

namespace sbcode {

namespace {

std::size_t checked_matrix_size(std::int64_t r, std::int64_t c) {
  if (r <= 0 || c <= 0) {
    throw std::invalid_argument("Matrix dimensions must be positive, got " +
                                std::to_string(r) + "x" + std::to_string(c));
  }
  return static_cast<std::size_t>(r) * static_cast<std::size_t>(c);
}

}  // namespace

Matrix::Matrix(std::int64_t r, std::int64_t c, double fill)
    : rows(r), cols(c), entries(checked_matrix_size(r, c), fill) {}

namespace {

void require_finite(const Matrix& a, const Vector& b) {
  for (double x : a.entries) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("matrix has non-finite entries");
    }
  }
  for (double x : b) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("right-hand side has non-finite entries");
    }
  }
}

}  // namespace

Vector solve_min_norm_least_squares(const Matrix& a, const Vector& b,
                                    double sv_tol) {
  if (a.rows != static_cast<std::int64_t>(b.size())) {
    throw std::invalid_argument(
        "dimension mismatch: matrix has " + std::to_string(a.rows) +
        " rows, rhs has " + std::to_string(b.size()) + " entries");
  }
  if (!(sv_tol > 0.0)) {
    throw std::invalid_argument("sv_tol must be positive");
  }
  require_finite(a, b);

  // Solve on the nonzero columns only and embed zeros back, so straggler
  // coordinates are exactly 0 rather than rounding noise.
  std::vector<std::int64_t> nonzero_cols;
  for (std::int64_t j = 0; j < a.cols; ++j) {
    for (std::int64_t i = 0; i < a.rows; ++i) {
      if (a.at(i, j) != 0.0) {
        nonzero_cols.push_back(j);
        break;
      }
    }
  }

  Vector x(static_cast<std::size_t>(a.cols), 0.0);
  if (nonzero_cols.empty()) {
    return x;
  }

  const auto n = static_cast<Eigen::Index>(nonzero_cols.size());
  Eigen::MatrixXd m(a.rows, n);
  for (Eigen::Index jj = 0; jj < n; ++jj) {
    const std::int64_t j = nonzero_cols[static_cast<std::size_t>(jj)];
    for (std::int64_t i = 0; i < a.rows; ++i) {
      m(i, jj) = a.at(i, j);
    }
  }
  Eigen::Map<const Eigen::VectorXd> bv(b.data(),
                                       static_cast<Eigen::Index>(b.size()));

  // JacobiSVD rather than BDCSVD: the latter miscomputes some inputs in
  // Eigen 3.4.0 (out-of-bounds deflation index, NaN results under NDEBUG)
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv_tol * (sv.size() > 0 ? sv(0) : 0.0);

  Eigen::VectorXd utb = svd.matrixU().transpose() * bv;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      y += (utb(i) / sv(i)) * svd.matrixV().col(i);
    }
  }
  for (Eigen::Index jj = 0; jj < n; ++jj) {
    x[static_cast<std::size_t>(nonzero_cols[static_cast<std::size_t>(jj)])] =
        y(jj);
  }
  return x;
}

Matrix mask_columns(const Matrix& g, std::span<const std::int64_t> keep) {
  for (std::int64_t j : keep) {
    if (j < 0 || j >= g.cols) {
      throw std::invalid_argument("keep index " + std::to_string(j) +
                                  " out of range for " +
                                  std::to_string(g.cols) + " columns");
    }
  }
  std::vector<char> keep_mask(static_cast<std::size_t>(g.cols), 0);
  for (std::int64_t j : keep) {
    keep_mask[static_cast<std::size_t>(j)] = 1;
  }
  Matrix out(g.rows, g.cols, 0.0);
  for (std::int64_t i = 0; i < g.rows; ++i) {
    for (std::int64_t j = 0; j < g.cols; ++j) {
      if (keep_mask[static_cast<std::size_t>(j)]) {
        out.at(i, j) = g.at(i, j);
      }
    }
  }
  return out;
}

double log_binomial(std::int64_t n, std::int64_t r) {
  if (n < 0 || r < 0 || r > n) {
    throw std::invalid_argument("log_binomial requires 0 <= r <= n, got n=" +
                                std::to_string(n) + " r=" + std::to_string(r));
  }
  if (r == 0 || r == n) {
    return 0.0;
  }
  const std::int64_t m = std::min(r, n - r);
  // For small m the lgamma difference cancels to ~1e-9 absolute at n = 10^6
  // while the value itself is small; sum the logs directly instead. For
  // large m the value is big enough that the cancellation is harmless.
  if (m < 1000) {
    long double acc = 0.0L;
    for (std::int64_t i = 1; i <= m; ++i) {
      acc += std::log(static_cast<long double>(n - m + i) /
                      static_cast<long double>(i));
    }
    return static_cast<double>(acc);
  }
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

Vector matvec(const Matrix& m, const Vector& v) {
  if (m.cols != static_cast<std::int64_t>(v.size())) {
    throw std::invalid_argument("matvec dimension mismatch");
  }
  Vector out(static_cast<std::size_t>(m.rows), 0.0);
  for (std::int64_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < m.cols; ++j) {
      acc += m.at(i, j) * v[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace sbcode
