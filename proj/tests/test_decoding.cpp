#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <stdexcept>

#include "sbcode/decoding.hpp"
#include "sbcode/rng.hpp"

using sbcode::AssignmentMatrix;
using sbcode::CodeSpec;
using sbcode::DecodingVector;
using sbcode::StragglerPattern;

TEST_CASE("beta_of") {
  CHECK(sbcode::beta_of(sbcode::frc_spec(12, 3)) == 1.0);
  CHECK(sbcode::beta_of(sbcode::sbc_spec(4, 2, 1.0, 1.0)) == 2.0);
  CHECK(sbcode::beta_of(sbcode::sbc_spec(100, 10, 0.9, 0.05)) == 1.0);
  // BGC p=0.6, k/s=10: scale is 6
  CHECK(sbcode::beta_of(sbcode::bgc_spec(100, 10, 0.6)) ==
        doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("stochastic block decoding on FRC(4,2)") {
  const AssignmentMatrix frc = sbcode::construct_frc(4, 2);

  const DecodingVector v1 =
      sbcode::stochastic_block_decode(frc, StragglerPattern{4, {0, 2}}, 1);
  CHECK(v1.v == sbcode::Vector{1.0, 0.0, 1.0, 0.0});
  CHECK(sbcode::err(frc, v1) == 0.0);
  CHECK(v1.beta == 1.0);

  const DecodingVector v2 =
      sbcode::stochastic_block_decode(frc, StragglerPattern{4, {0, 1}}, 1);
  CHECK(v2.support.size() == 1);
  CHECK(v2.support[0] <= 1);
  CHECK(sbcode::err(frc, v2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("stochastic block decoding scales the all-ones code") {
  const AssignmentMatrix g =
      sbcode::construct_sbc(sbcode::sbc_spec(4, 2, 1.0, 1.0), 3);
  const DecodingVector v =
      sbcode::stochastic_block_decode(g, StragglerPattern{4, {1, 3}}, 5);
  CHECK(v.beta == 2.0);
  CHECK(sbcode::err(g, v) == 0.0);
}

TEST_CASE("stochastic block decoding structure") {
  const CodeSpec spec = sbcode::sbc_spec(30, 5, 0.9, 0.1);
  const AssignmentMatrix g = sbcode::construct_sbc(spec, 17);
  const double beta = sbcode::beta_of(spec);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StragglerPattern t =
        sbcode::sample_random_nonstragglers(30, 12, seed);
    const auto blocks = sbcode::intersect_blocks(
        t, sbcode::BlockPartition::make(30, 5));
    std::size_t nonempty = 0;
    for (const auto& b : blocks) {
      nonempty += b.empty() ? 0 : 1;
    }
    const DecodingVector v = sbcode::stochastic_block_decode(g, t, seed);
    CHECK(v.support.size() == nonempty);
    for (std::int64_t i : v.support) {
      CHECK(v.v[static_cast<std::size_t>(i)] == 1.0 / beta);
    }
    // support containment and per-seed determinism
    for (std::int64_t i : v.support) {
      CHECK(std::binary_search(t.non_stragglers.begin(),
                               t.non_stragglers.end(), i));
    }
    const DecodingVector again = sbcode::stochastic_block_decode(g, t, seed);
    CHECK(again.v == v.v);
  }
}

TEST_CASE("averaged block decoding") {
  const AssignmentMatrix frc = sbcode::construct_frc(4, 2);

  // singleton survivors make it identical to the stochastic decoder
  const StragglerPattern singles{4, {1, 2}};
  const DecodingVector avg = sbcode::averaged_block_decode(frc, singles);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DecodingVector st =
        sbcode::stochastic_block_decode(frc, singles, seed);
    CHECK(st.v == avg.v);
  }

  const StragglerPattern all{4, {0, 1, 2, 3}};
  const DecodingVector half = sbcode::averaged_block_decode(frc, all);
  CHECK(half.v == sbcode::Vector{0.5, 0.5, 0.5, 0.5});
  CHECK(sbcode::err(frc, half) == 0.0);
}

TEST_CASE("averaging beats stochastic picking on average when r is large") {
  const std::int64_t k = 100;
  const double p = 0.95;
  const CodeSpec spec =
      sbcode::sbc_spec(k, 10, p, sbcode::matched_q(k, 10, p));
  double avg_total = 0.0;
  double stoch_total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const AssignmentMatrix g = sbcode::construct_sbc(spec, seed);
    const StragglerPattern t =
        sbcode::sample_random_nonstragglers(k, 80, seed + 1000);
    avg_total += sbcode::err(g, sbcode::averaged_block_decode(g, t));
    stoch_total += sbcode::err(g, sbcode::stochastic_block_decode(g, t, seed));
  }
  CHECK(avg_total / 100.0 <= stoch_total / 100.0);
}

TEST_CASE("bgc uniform decoding") {
  const DecodingVector v =
      sbcode::bgc_uniform_decode(StragglerPattern{4, {0, 1}}, 4, 2);
  CHECK(v.v == sbcode::Vector{1.0, 1.0, 0.0, 0.0});

  const DecodingVector full =
      sbcode::bgc_uniform_decode(StragglerPattern{4, {0, 1, 2, 3}}, 4, 4);
  for (std::int64_t i : {0, 1, 2, 3}) {
    CHECK(full.v[static_cast<std::size_t>(i)] == doctest::Approx(0.25));
  }

  StragglerPattern t{100, {}};
  for (std::int64_t i = 0; i < 80; ++i) {
    t.non_stragglers.push_back(i);
  }
  const DecodingVector big = sbcode::bgc_uniform_decode(t, 100, 10);
  CHECK(big.v[0] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("optimal decoding") {
  AssignmentMatrix eye{sbcode::sbc_spec(2, 1, 1.0, 0.0),
                       sbcode::Matrix(2, 2, 0.0), 0};
  eye.g.at(0, 0) = 1.0;
  eye.g.at(1, 1) = 1.0;
  const DecodingVector v =
      sbcode::optimal_decode(eye, StragglerPattern{2, {0}});
  CHECK(v.v[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(v.v[1] == 0.0);
  CHECK(sbcode::err(eye, v) == doctest::Approx(1.0).epsilon(1e-9));

  const AssignmentMatrix frc = sbcode::construct_frc(12, 3);
  const StragglerPattern hit_all{12, {0, 3, 7, 11}};
  CHECK(sbcode::err(frc, sbcode::optimal_decode(frc, hit_all)) <= 1e-12);
}

TEST_CASE("optimal decoding dominates every other decoder") {
  const CodeSpec spec = sbcode::sbc_spec(24, 4, 0.8, 0.15);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const AssignmentMatrix g = sbcode::construct_sbc(spec, seed);
    const StragglerPattern t =
        sbcode::sample_random_nonstragglers(24, 14, seed);
    const double opt = sbcode::err(g, sbcode::optimal_decode(g, t));
    CHECK(opt <=
          sbcode::err(g, sbcode::stochastic_block_decode(g, t, seed)) + 1e-9);
    CHECK(opt <= sbcode::err(g, sbcode::averaged_block_decode(g, t)) + 1e-9);
    CHECK(opt <= sbcode::err(g, sbcode::bgc_uniform_decode(t, 24, 4)) + 1e-9);
  }
}

TEST_CASE("err") {
  const AssignmentMatrix frc = sbcode::construct_frc(4, 2);
  CHECK(sbcode::err(frc.g, sbcode::Vector{0, 0, 0, 0}) == 4.0);
  CHECK(sbcode::err(frc.g, sbcode::Vector{1, 0, 1, 0}) == 0.0);
  CHECK(sbcode::err(frc.g, sbcode::Vector{2, 0, 2, 0}) == 4.0);
  CHECK_THROWS_AS(sbcode::err(frc.g, sbcode::Vector{1, 2, 3}),
                  std::invalid_argument);
}

TEST_CASE("masked and unmasked err agree for support-contained vectors") {
  const CodeSpec spec = sbcode::sbc_spec(18, 3, 0.7, 0.2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AssignmentMatrix g = sbcode::construct_sbc(spec, seed);
    const StragglerPattern t =
        sbcode::sample_random_nonstragglers(18, 9, seed);
    const DecodingVector v = sbcode::stochastic_block_decode(g, t, seed);
    const sbcode::Matrix masked = sbcode::mask_columns(g.g, t.non_stragglers);
    CHECK(std::fabs(sbcode::err(g.g, v.v) - sbcode::err(masked, v.v)) <=
          1e-12);
  }
}

TEST_CASE("reconstruct sums block values exactly on a perfect FRC decode") {
  const AssignmentMatrix frc = sbcode::construct_frc(4, 2);
  // f = (1, 2, 3, 4), so worker outputs are block sums (3, 3, 7, 7)
  sbcode::Matrix outputs(4, 1, 0.0);
  outputs.at(0, 0) = 3.0;
  outputs.at(1, 0) = 3.0;
  outputs.at(2, 0) = 7.0;
  outputs.at(3, 0) = 7.0;
  const DecodingVector v =
      sbcode::stochastic_block_decode(frc, StragglerPattern{4, {0, 2}}, 0);
  const double ev = sbcode::err(frc, v);
  const auto res = sbcode::reconstruct(outputs, v, {10.0}, ev);
  CHECK(res.f_hat[0] == 10.0);
  CHECK(res.sq_error == 0.0);
  CHECK(res.err_v == 0.0);
}

TEST_CASE("reconstruct with the zero vector returns zero") {
  const AssignmentMatrix frc = sbcode::construct_frc(4, 2);
  DecodingVector zero;
  zero.v = sbcode::Vector(4, 0.0);
  zero.decoder = sbcode::Decoder::kStochasticBlock;
  sbcode::Matrix outputs(4, 2, 1.5);
  const auto res =
      sbcode::reconstruct(outputs, zero, {3.0, 4.0}, sbcode::err(frc, zero));
  CHECK(res.f_hat == sbcode::Vector{0.0, 0.0});
  CHECK(res.sq_error == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(res.err_v == 4.0);
}

TEST_CASE("reconstruction error obeys the Cauchy-Schwarz chain") {
  const CodeSpec spec = sbcode::sbc_spec(16, 4, 0.9, 0.1);
  const std::int64_t w = 3;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AssignmentMatrix g = sbcode::construct_sbc(spec, seed);
    const StragglerPattern t =
        sbcode::sample_random_nonstragglers(16, 10, seed);
    const DecodingVector v = sbcode::stochastic_block_decode(g, t, seed);

    // per-function values with unit Frobenius norm
    sbcode::SplitMix64 rng(seed + 5);
    std::vector<std::vector<double>> f(16, std::vector<double>(w));
    double norm_sq = 0.0;
    for (auto& row : f) {
      for (auto& x : row) {
        x = rng.next_unit() * 2.0 - 1.0;
        norm_sq += x * x;
      }
    }
    const double norm = std::sqrt(norm_sq);
    for (auto& row : f) {
      for (auto& x : row) {
        x /= norm;
      }
    }

    sbcode::Matrix outputs(16, w, 0.0);
    sbcode::Vector f_true(static_cast<std::size_t>(w), 0.0);
    for (std::int64_t i = 0; i < 16; ++i) {
      for (std::int64_t d = 0; d < w; ++d) {
        f_true[static_cast<std::size_t>(d)] +=
            f[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
      }
    }
    for (std::int64_t j = 0; j < 16; ++j) {
      for (std::int64_t i = 0; i < 16; ++i) {
        if (g.g.at(i, j) == 1.0) {
          for (std::int64_t d = 0; d < w; ++d) {
            outputs.at(j, d) +=
                f[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
          }
        }
      }
    }
    const double ev = sbcode::err(g, v);
    const auto res = sbcode::reconstruct(outputs, v, f_true, ev);
    CHECK(res.sq_error <= ev + 1e-9);
  }
}

TEST_CASE("decoding vector JSON") {
  const AssignmentMatrix frc = sbcode::construct_frc(4, 2);
  const DecodingVector v =
      sbcode::stochastic_block_decode(frc, StragglerPattern{4, {0, 2}}, 0);
  const auto j = nlohmann::json::parse(sbcode::decoding_to_json(v));
  CHECK(j["decoder"] == "STOCHASTIC_BLOCK");
  CHECK(j["beta"] == 1.0);
  CHECK(j["entries"].size() == 2);
  CHECK(j["entries"][0][0] == 0);
  CHECK(j["entries"][0][1] == 1.0);
}

TEST_CASE("decoder names") {
  CHECK(sbcode::decoder_from_name("OPTIMAL") == sbcode::Decoder::kOptimal);
  CHECK(sbcode::decoder_name(sbcode::Decoder::kAveragedBlock) ==
        std::string("AVERAGED_BLOCK"));
  CHECK_THROWS_AS(sbcode::decoder_from_name("nope"), std::invalid_argument);
}
