#include "sbcode/decoding.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "sbcode/rng.hpp"

namespace sbcode {

const char* decoder_name(Decoder decoder) {
  switch (decoder) {
    case Decoder::kStochasticBlock:
      return "STOCHASTIC_BLOCK";
    case Decoder::kAveragedBlock:
      return "AVERAGED_BLOCK";
    case Decoder::kBgcUniform:
      return "BGC_UNIFORM";
    case Decoder::kOptimal:
      return "OPTIMAL";
  }
  return "OPTIMAL";
}

Decoder decoder_from_name(const std::string& name) {
  if (name == "STOCHASTIC_BLOCK") return Decoder::kStochasticBlock;
  if (name == "AVERAGED_BLOCK") return Decoder::kAveragedBlock;
  if (name == "BGC_UNIFORM") return Decoder::kBgcUniform;
  if (name == "OPTIMAL") return Decoder::kOptimal;
  throw std::invalid_argument("unknown decoder '" + name + "'");
}

double beta_scaling(std::int64_t k, std::int64_t s, double p, double q) {
  const double raw =
      p + (static_cast<double>(k) / static_cast<double>(s) - 1.0) * q;
  return raw < 2.0 ? 1.0 : raw;
}

double beta_of(const CodeSpec& spec) {
  spec.validate();
  return beta_scaling(spec.k, spec.s, spec.p, spec.q);
}

namespace {

std::vector<std::int64_t> collect_support(const Vector& v) {
  std::vector<std::int64_t> support;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      support.push_back(static_cast<std::int64_t>(i));
    }
  }
  return support;
}

void require_consistent(const AssignmentMatrix& g, const StragglerPattern& t) {
  t.validate();
  if (t.k != g.spec.k) {
    throw std::invalid_argument("pattern and code disagree on k");
  }
}

}  // namespace

DecodingVector stochastic_block_decode(const AssignmentMatrix& g,
                                       const StragglerPattern& t,
                                       std::uint64_t seed) {
  require_consistent(g, t);
  const double beta = beta_of(g.spec);
  const auto blocks = intersect_blocks(
      t, BlockPartition::make(g.spec.k, g.spec.s));
  Vector v(static_cast<std::size_t>(g.spec.k), 0.0);
  SplitMix64 rng(seed_chain(seed, kStreamDecode));
  for (const auto& ti : blocks) {
    if (ti.empty()) {
      continue;
    }
    const std::int64_t pick = ti[static_cast<std::size_t>(
        rng.next_below(static_cast<std::uint64_t>(ti.size())))];
    v[static_cast<std::size_t>(pick)] = 1.0 / beta;
  }
  DecodingVector out;
  out.support = collect_support(v);
  out.v = std::move(v);
  out.decoder = Decoder::kStochasticBlock;
  out.beta = beta;
  return out;
}

DecodingVector averaged_block_decode(const AssignmentMatrix& g,
                                     const StragglerPattern& t) {
  require_consistent(g, t);
  const double beta = beta_of(g.spec);
  const auto blocks = intersect_blocks(
      t, BlockPartition::make(g.spec.k, g.spec.s));
  Vector v(static_cast<std::size_t>(g.spec.k), 0.0);
  for (const auto& ti : blocks) {
    if (ti.empty()) {
      continue;
    }
    const double w = 1.0 / (beta * static_cast<double>(ti.size()));
    for (std::int64_t i : ti) {
      v[static_cast<std::size_t>(i)] = w;
    }
  }
  DecodingVector out;
  out.support = collect_support(v);
  out.v = std::move(v);
  out.decoder = Decoder::kAveragedBlock;
  out.beta = beta;
  return out;
}

DecodingVector bgc_uniform_decode(const StragglerPattern& t, std::int64_t k,
                                  std::int64_t s) {
  t.validate();
  if (t.k != k) {
    throw std::invalid_argument("pattern and k disagree");
  }
  if (s < 1) {
    throw std::invalid_argument("s must be >= 1");
  }
  const double w = static_cast<double>(k) /
                   (static_cast<double>(t.r()) * static_cast<double>(s));
  Vector v(static_cast<std::size_t>(k), 0.0);
  for (std::int64_t i : t.non_stragglers) {
    v[static_cast<std::size_t>(i)] = w;
  }
  DecodingVector out;
  out.support = t.non_stragglers;
  out.v = std::move(v);
  out.decoder = Decoder::kBgcUniform;
  out.beta = 1.0;
  return out;
}

DecodingVector optimal_decode(const AssignmentMatrix& g,
                              const StragglerPattern& t, double sv_tol) {
  require_consistent(g, t);
  const Matrix masked = mask_columns(g.g, t.non_stragglers);
  const Vector ones(static_cast<std::size_t>(g.spec.k), 1.0);
  Vector v = solve_min_norm_least_squares(masked, ones, sv_tol);
  DecodingVector out;
  out.support = collect_support(v);
  out.v = std::move(v);
  out.decoder = Decoder::kOptimal;
  out.beta = 1.0;
  return out;
}

double err(const Matrix& g, const Vector& v) {
  if (g.cols != static_cast<std::int64_t>(v.size())) {
    throw std::invalid_argument("err dimension mismatch");
  }
  double acc = 0.0;
  for (std::int64_t i = 0; i < g.rows; ++i) {
    double row = 0.0;
    for (std::int64_t j = 0; j < g.cols; ++j) {
      row += g.at(i, j) * v[static_cast<std::size_t>(j)];
    }
    const double d = row - 1.0;
    acc += d * d;
  }
  return acc;
}

double err(const AssignmentMatrix& g, const DecodingVector& v) {
  return err(g.g, v.v);
}

ReconstructionResult reconstruct(const Matrix& node_outputs,
                                 const DecodingVector& v,
                                 const Vector& f_true, double err_v) {
  if (node_outputs.rows != static_cast<std::int64_t>(v.v.size())) {
    throw std::invalid_argument(
        "node_outputs row count must equal decoding vector length");
  }
  if (node_outputs.cols != static_cast<std::int64_t>(f_true.size())) {
    throw std::invalid_argument(
        "node_outputs width must equal f_true length");
  }
  ReconstructionResult out;
  out.f_hat.assign(f_true.size(), 0.0);
  for (std::int64_t i = 0; i < node_outputs.rows; ++i) {
    const double vi = v.v[static_cast<std::size_t>(i)];
    if (vi == 0.0) {
      continue;
    }
    for (std::int64_t j = 0; j < node_outputs.cols; ++j) {
      out.f_hat[static_cast<std::size_t>(j)] += node_outputs.at(i, j) * vi;
    }
  }
  out.f_true = f_true;
  double acc = 0.0;
  for (std::size_t j = 0; j < f_true.size(); ++j) {
    const double d = out.f_hat[j] - f_true[j];
    acc += d * d;
  }
  out.sq_error = acc;
  out.err_v = err_v;
  return out;
}

std::string decoding_to_json(const DecodingVector& v) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::int64_t i : v.support) {
    entries.push_back({i, v.v[static_cast<std::size_t>(i)]});
  }
  nlohmann::json j{{"decoder", decoder_name(v.decoder)},
                   {"beta", v.beta},
                   {"entries", entries}};
  return j.dump();
}

}  // namespace sbcode
