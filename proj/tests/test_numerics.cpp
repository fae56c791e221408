#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sbcode/numerics.hpp"
#include "sbcode/rng.hpp"

using sbcode::Matrix;
using sbcode::Vector;

namespace {

double norm2(const Vector& v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

// ||A^T (A x - b)||_2, the normal-equations stationarity residual
double stationarity_residual(const Matrix& a, const Vector& x,
                             const Vector& b) {
  Vector ax = sbcode::matvec(a, x);
  Vector res(static_cast<std::size_t>(a.rows));
  for (std::size_t i = 0; i < res.size(); ++i) {
    res[i] = ax[i] - b[i];
  }
  double acc = 0.0;
  for (std::int64_t j = 0; j < a.cols; ++j) {
    double col = 0.0;
    for (std::int64_t i = 0; i < a.rows; ++i) {
      col += a.at(i, j) * res[static_cast<std::size_t>(i)];
    }
    acc += col * col;
  }
  return std::sqrt(acc);
}

Matrix random_binary(std::int64_t rows, std::int64_t cols,
                     std::uint64_t seed) {
  Matrix m(rows, cols, 0.0);
  sbcode::SplitMix64 rng(seed);
  for (auto& e : m.entries) {
    e = rng.next_unit() < 0.5 ? 0.0 : 1.0;
  }
  return m;
}

}  // namespace

TEST_CASE("identity system") {
  Matrix a(2, 2, 0.0);
  a.at(0, 0) = 1.0;
  a.at(1, 1) = 1.0;
  Vector x = sbcode::solve_min_norm_least_squares(a, {1.0, 1.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("all-zero matrix gives the zero min-norm solution") {
  Matrix a(2, 2, 0.0);
  Vector x = sbcode::solve_min_norm_least_squares(a, {1.0, 1.0});
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
}

TEST_CASE("agrees with the normal-equations oracle on zeroed-column systems") {
  int solved = 0;
  for (std::uint64_t seed = 0; solved < 20 && seed < 400; ++seed) {
    Matrix a = random_binary(6, 6, seed);
    // zero out two columns
    for (std::int64_t i = 0; i < 6; ++i) {
      a.at(i, 1) = 0.0;
      a.at(i, 4) = 0.0;
    }
    std::vector<std::vector<double>> restricted(6, std::vector<double>(4));
    const std::int64_t live_cols[4] = {0, 2, 3, 5};
    for (std::int64_t i = 0; i < 6; ++i) {
      for (int j = 0; j < 4; ++j) {
        restricted[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            a.at(i, live_cols[j]);
      }
    }
    Vector b(6, 1.0);
    auto oracle = oracles::solve_normal_equations(restricted, b);
    if (!oracle.has_value()) {
      continue;  // rank-deficient draw; the oracle needs a unique solution
    }
    ++solved;
    Vector x = sbcode::solve_min_norm_least_squares(a, b);
    CHECK(x[1] == 0.0);
    CHECK(x[4] == 0.0);
    for (int j = 0; j < 4; ++j) {
      CHECK(std::fabs(x[static_cast<std::size_t>(live_cols[j])] -
                      (*oracle)[static_cast<std::size_t>(j)]) <= 1e-9);
    }
  }
  CHECK(solved == 20);
}

TEST_CASE("stationarity holds on random instances") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    sbcode::SplitMix64 rng(seed);
    const std::int64_t rows = 3 + static_cast<std::int64_t>(rng.next_below(6));
    const std::int64_t cols = 3 + static_cast<std::int64_t>(rng.next_below(6));
    Matrix a = random_binary(rows, cols, seed * 7 + 1);
    Vector b(static_cast<std::size_t>(rows));
    for (auto& x : b) {
      x = rng.next_unit() * 4.0 - 2.0;
    }
    Vector x = sbcode::solve_min_norm_least_squares(a, b);
    CHECK(stationarity_residual(a, x, b) <= 1e-8 * (1.0 + norm2(b)));
  }
}

TEST_CASE("solution norm is minimal among equal-residual solutions") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    Matrix a = random_binary(4, 6, seed);
    Vector b(4, 1.0);
    Vector x = sbcode::solve_min_norm_least_squares(a, b);

    std::vector<std::vector<double>> rows(4, std::vector<double>(6));
    for (std::int64_t i = 0; i < 4; ++i) {
      for (std::int64_t j = 0; j < 6; ++j) {
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            a.at(i, j);
      }
    }
    const auto basis = oracles::null_space_basis(rows, 6);
    REQUIRE(!basis.empty());  // 4x6 always has a null space
    sbcode::SplitMix64 rng(seed);
    for (const auto& n : basis) {
      const double scale = rng.next_unit() * 2.0 + 0.5;
      Vector alt = x;
      for (std::size_t j = 0; j < 6; ++j) {
        alt[j] += scale * n[j];
      }
      CHECK(norm2(x) <= norm2(alt) + 1e-9);
    }
  }
}

TEST_CASE("matrix construction rejects non-positive dimensions") {
  CHECK_THROWS_AS(Matrix(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Matrix(3, -1), std::invalid_argument);
}

TEST_CASE("solver input validation") {
  Matrix a(2, 2, 1.0);
  CHECK_THROWS_AS(sbcode::solve_min_norm_least_squares(a, {1.0, 2.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sbcode::solve_min_norm_least_squares(a, {1.0, 1.0}, 0.0),
                  std::invalid_argument);
  Matrix bad(2, 2, 1.0);
  bad.at(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sbcode::solve_min_norm_least_squares(bad, {1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("mask_columns") {
  Matrix eye(2, 2, 0.0);
  eye.at(0, 0) = 1.0;
  eye.at(1, 1) = 1.0;

  const std::vector<std::int64_t> keep0{0};
  Matrix masked = sbcode::mask_columns(eye, keep0);
  CHECK(masked.at(0, 0) == 1.0);
  CHECK(masked.at(0, 1) == 0.0);
  CHECK(masked.at(1, 0) == 0.0);
  CHECK(masked.at(1, 1) == 0.0);

  const std::vector<std::int64_t> all{0, 1};
  Matrix unchanged = sbcode::mask_columns(eye, all);
  CHECK(unchanged.entries == eye.entries);

  // FRC(4, 2) with columns {0, 2} kept
  Matrix frc(4, 4, 0.0);
  for (std::int64_t i = 0; i < 4; ++i) {
    const std::int64_t lo = (i / 2) * 2;
    frc.at(i, lo) = 1.0;
    frc.at(i, lo + 1) = 1.0;
  }
  const std::vector<std::int64_t> keep02{0, 2};
  Matrix m = sbcode::mask_columns(frc, keep02);
  for (std::int64_t i = 0; i < 4; ++i) {
    for (std::int64_t j = 0; j < 4; ++j) {
      const double expected = (j == 0 || j == 2) ? frc.at(i, j) : 0.0;
      CHECK(m.at(i, j) == expected);
    }
  }

  // idempotence
  Matrix twice = sbcode::mask_columns(m, keep02);
  CHECK(twice.entries == m.entries);

  const std::vector<std::int64_t> bad{4};
  CHECK_THROWS_AS(sbcode::mask_columns(frc, bad), std::invalid_argument);
}

TEST_CASE("log_binomial") {
  CHECK(sbcode::log_binomial(4, 2) ==
        doctest::Approx(std::log(6.0)).epsilon(1e-12));
  CHECK(sbcode::log_binomial(7, 0) == 0.0);
  CHECK(sbcode::log_binomial(7, 7) == 0.0);

  const double exact100 =
      std::log(static_cast<double>(oracles::exact_binomial(100, 50)));
  CHECK(std::fabs(sbcode::log_binomial(100, 50) - exact100) <=
        1e-10 * std::fabs(exact100));

  for (std::int64_t n = 0; n <= 20; ++n) {
    for (std::int64_t r = 0; r <= n; ++r) {
      const double exact =
          static_cast<double>(oracles::exact_binomial(n, r));
      CHECK(std::exp(sbcode::log_binomial(n, r)) ==
            doctest::Approx(exact).epsilon(1e-9));
    }
  }

  CHECK_THROWS_AS(sbcode::log_binomial(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(sbcode::log_binomial(4, -1), std::invalid_argument);
}

TEST_CASE("log_binomial stays accurate at n = 10^6") {
  const std::int64_t n = 1000000;
  // small r against the exact big-integer value
  for (std::int64_t r : {1LL, 17LL, 999LL}) {
    const double expected =
        oracles::log_of_bigint(oracles::exact_binomial(n, r));
    CHECK(std::fabs(sbcode::log_binomial(n, r) - expected) <=
          1e-12 * std::fabs(expected));
  }
  // large r against an independent summed-logs route
  for (std::int64_t r : {1000LL, 500000LL}) {
    long double acc = 0.0L;
    for (std::int64_t i = 1; i <= r; ++i) {
      acc += std::log(static_cast<long double>(n - r + i) /
                      static_cast<long double>(i));
    }
    const double expected = static_cast<double>(acc);
    CHECK(std::fabs(sbcode::log_binomial(n, r) - expected) <=
          1e-12 * std::fabs(expected));
  }
}
