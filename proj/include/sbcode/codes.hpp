#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sbcode/numerics.hpp"

namespace sbcode {

enum class CodeFamily { kSbc, kFrc, kBgc };

const char* family_name(CodeFamily family);

// Parameters of a gradient code distribution: k functions / k workers, block
// size s, Bernoulli probability p inside the diagonal blocks and q outside.
// FRC is the (p=1, q=0) corner, BGC the p=q diagonal. A short final block is
// allowed when s does not divide k, so blocks number ceil(k/s).
struct CodeSpec {
  std::int64_t k = 0;
  std::int64_t s = 0;
  double p = 0.0;
  double q = 0.0;
  CodeFamily family = CodeFamily::kSbc;

  void validate() const;  // throws std::invalid_argument
  std::int64_t block_count() const { return (k + s - 1) / s; }
};

CodeSpec sbc_spec(std::int64_t k, std::int64_t s, double p, double q);
CodeSpec frc_spec(std::int64_t k, std::int64_t s);
CodeSpec bgc_spec(std::int64_t k, std::int64_t s, double p);

// A realized k x k binary function-assignment matrix: column j lists the
// functions worker j computes and sums.
struct AssignmentMatrix {
  CodeSpec spec;
  Matrix g;
  std::uint64_t seed = 0;
};

AssignmentMatrix construct_frc(std::int64_t k, std::int64_t s);
AssignmentMatrix construct_bgc(std::int64_t k, std::int64_t s, double p,
                               std::uint64_t seed);
AssignmentMatrix construct_sbc(const CodeSpec& spec, std::uint64_t seed);

// The q with s*p + (k-s)*q = s, i.e. expected column weight s; clamped to
// [0, 1].
double matched_q(std::int64_t k, std::int64_t s, double p);

double expected_column_weight(const CodeSpec& spec);

// Dense CSV of 0/1 integers, one row per line.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(std::istream& in);

}  // namespace sbcode
