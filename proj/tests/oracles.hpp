// Test-only oracles, independent of the library's solver and formula paths.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace oracles {

using BigInt = boost::multiprecision::cpp_int;

// Exact big-integer binomial coefficient.
inline BigInt exact_binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) {
    return 0;
  }
  BigInt c = 1;
  const std::int64_t m = std::min(r, n - r);
  for (std::int64_t i = 1; i <= m; ++i) {
    c *= n - m + i;
    c /= i;  // exact: C(n, i) is integral
  }
  return c;
}

// Natural log of a positive big integer: ln(mantissa) + shift * ln 2.
inline double log_of_bigint(const BigInt& value) {
  const auto bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 63) {
    return std::log(static_cast<double>(value.convert_to<std::uint64_t>()));
  }
  const auto shift = bits - 63;
  const BigInt top = value >> shift;
  return std::log(static_cast<double>(top.convert_to<std::uint64_t>())) +
         static_cast<double>(shift) * 0.6931471805599453094;
}

// Dense Gaussian elimination with partial pivoting on the normal equations
// A^T A x = A^T b. Returns nullopt when the system is numerically singular,
// so callers can re-sample full-column-rank instances.
inline std::optional<std::vector<double>> solve_normal_equations(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::vector<double>> ata(cols, std::vector<double>(cols, 0.0));
  std::vector<double> atb(cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < rows; ++t) {
        acc += a[t][i] * a[t][j];
      }
      ata[i][j] = acc;
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < rows; ++t) {
      acc += a[t][i] * b[t];
    }
    atb[i] = acc;
  }

  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t pivot = col;
    for (std::size_t i = col + 1; i < cols; ++i) {
      if (std::fabs(ata[i][col]) > std::fabs(ata[pivot][col])) {
        pivot = i;
      }
    }
    if (std::fabs(ata[pivot][col]) < 1e-9) {
      return std::nullopt;
    }
    std::swap(ata[col], ata[pivot]);
    std::swap(atb[col], atb[pivot]);
    for (std::size_t i = 0; i < cols; ++i) {
      if (i == col) {
        continue;
      }
      const double factor = ata[i][col] / ata[col][col];
      for (std::size_t j = col; j < cols; ++j) {
        ata[i][j] -= factor * ata[col][j];
      }
      atb[i] -= factor * atb[col];
    }
  }
  std::vector<double> x(cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) {
    x[i] = atb[i] / ata[i][i];
  }
  return x;
}

// Basis of the null space of a (row-major, rows x cols) found by reduced row
// echelon form with a fixed pivot tolerance.
inline std::vector<std::vector<double>> null_space_basis(
    std::vector<std::vector<double>> m, std::size_t cols) {
  const double tol = 1e-9;
  std::vector<std::ptrdiff_t> pivot_of_col(cols, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t pivot = row;
    for (std::size_t i = row + 1; i < m.size(); ++i) {
      if (std::fabs(m[i][col]) > std::fabs(m[pivot][col])) {
        pivot = i;
      }
    }
    if (std::fabs(m[pivot][col]) < tol) {
      continue;
    }
    std::swap(m[row], m[pivot]);
    const double head = m[row][col];
    for (std::size_t j = 0; j < cols; ++j) {
      m[row][j] /= head;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i != row && std::fabs(m[i][col]) > 0.0) {
        const double factor = m[i][col];
        for (std::size_t j = 0; j < cols; ++j) {
          m[i][j] -= factor * m[row][j];
        }
      }
    }
    pivot_of_col[col] = static_cast<std::ptrdiff_t>(row);
    ++row;
  }
  std::vector<std::vector<double>> basis;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (pivot_of_col[free_col] >= 0) {
      continue;
    }
    std::vector<double> v(cols, 0.0);
    v[free_col] = 1.0;
    for (std::size_t col = 0; col < cols; ++col) {
      if (pivot_of_col[col] >= 0) {
        v[col] = -m[static_cast<std::size_t>(pivot_of_col[col])][free_col];
      }
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Calls fn with every size-r subset of {0..k-1} in lexicographic order.
inline void for_each_combination(
    std::int64_t k, std::int64_t r,
    const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> combo(static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i < r; ++i) {
    combo[static_cast<std::size_t>(i)] = i;
  }
  while (true) {
    fn(combo);
    std::int64_t i = r - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == k - r + i) {
      --i;
    }
    if (i < 0) {
      return;
    }
    ++combo[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < r; ++j) {
      combo[static_cast<std::size_t>(j)] =
          combo[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// Fraction of misclassified indices for a two-group labeling, minimized over
// the label swap. truth[i] and guess[i] are group ids in {0, 1}.
inline double two_community_misclassification(const std::vector<int>& truth,
                                              const std::vector<int>& guess) {
  std::size_t direct = 0;
  std::size_t swapped = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != guess[i]) {
      ++direct;
    }
    if (truth[i] != 1 - guess[i]) {
      ++swapped;
    }
  }
  return static_cast<double>(std::min(direct, swapped)) /
         static_cast<double>(truth.size());
}

}  // namespace oracles
