#pragma once

#include <cstdint>
#include <string>

#include "sbcode/codes.hpp"
#include "sbcode/stragglers.hpp"

namespace sbcode {

enum class Decoder { kStochasticBlock, kAveragedBlock, kBgcUniform, kOptimal };

const char* decoder_name(Decoder decoder);
Decoder decoder_from_name(const std::string& name);

// A decoding vector v with support inside T, plus how it was produced.
struct DecodingVector {
  Vector v;
  std::vector<std::int64_t> support;  // indices with v[i] != 0, sorted
  Decoder decoder = Decoder::kOptimal;
  double beta = 1.0;  // scaling actually used; 1 when not applicable
};

// The block-decoding scale p + (k/s - 1) q, applied only when it is at
// least 2; below that the sum is returned unscaled.
double beta_scaling(std::int64_t k, std::int64_t s, double p, double q);
double beta_of(const CodeSpec& spec);

// Picks one surviving column per nonempty block uniformly at random and sets
// its coefficient to 1/beta. Empty blocks contribute nothing.
DecodingVector stochastic_block_decode(const AssignmentMatrix& g,
                                       const StragglerPattern& t,
                                       std::uint64_t seed);

// Every survivor in block i gets weight 1/(beta * |T_i|).
DecodingVector averaged_block_decode(const AssignmentMatrix& g,
                                     const StragglerPattern& t);

// v_i = k/(r s) on T, 0 elsewhere.
DecodingVector bgc_uniform_decode(const StragglerPattern& t, std::int64_t k,
                                  std::int64_t s);

// Minimum-norm least-squares solution on the column-masked matrix.
DecodingVector optimal_decode(const AssignmentMatrix& g,
                              const StragglerPattern& t,
                              double sv_tol = 1e-10);

// ||G v - 1_k||_2^2
double err(const Matrix& g, const Vector& v);
double err(const AssignmentMatrix& g, const DecodingVector& v);

struct ReconstructionResult {
  Vector f_hat;
  Vector f_true;
  double sq_error = 0.0;
  double err_v = 0.0;
};

// f_hat = node_outputs^T v. node_outputs row i is worker i's output (length
// w); err_v is the caller-computed err(g, v), recorded for reporting.
ReconstructionResult reconstruct(const Matrix& node_outputs,
                                 const DecodingVector& v, const Vector& f_true,
                                 double err_v);

// {decoder, beta, entries: [[index, value], ...]}
std::string decoding_to_json(const DecodingVector& v);

}  // namespace sbcode
