#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbcode/bounds.hpp"
#include "sbcode/codes.hpp"
#include "sbcode/decoding.hpp"
#include "sbcode/stragglers.hpp"

namespace sbcode {

enum class StragglerModel { kRandom, kBlocks };

const char* straggler_model_name(StragglerModel model);
StragglerModel straggler_model_from_name(const std::string& name);

struct QRule {
  bool matched = true;
  double explicit_q = 0.0;
};

// One Monte Carlo grid: every (s, p, epsilon, decoder) combination is a cell,
// each run for `trials` trials with per-trial seeds derived from master_seed
// by a fixed counter scheme (see trial_seed). Aggregates are independent of
// execution order and thread count.
struct SweepConfig {
  std::int64_t k = 0;
  std::vector<std::int64_t> s_values;
  std::vector<double> p_values;
  std::vector<double> epsilon_values;
  std::int64_t trials = 0;
  std::vector<Decoder> decoders;
  StragglerModel straggler_model = StragglerModel::kRandom;
  std::uint64_t master_seed = 0;
  QRule q_rule;

  void validate() const;
  static SweepConfig from_json_text(const std::string& text);
};

struct TrialRecord {
  std::int64_t trial_index = 0;
  std::uint64_t seed = 0;
  CodeSpec spec;
  std::int64_t r = 0;
  Decoder decoder = Decoder::kStochasticBlock;
  double err_value = 0.0;
  double err_over_k = 0.0;
  bool all_blocks_hit = false;
};

struct CellResult {
  CodeSpec spec;
  double epsilon = 0.0;
  std::int64_t r = 0;
  Decoder decoder = Decoder::kStochasticBlock;
  StragglerModel model = StragglerModel::kRandom;
  std::int64_t trials = 0;
  double mean_err = 0.0;
  double mean_err_over_k = 0.0;
  double stddev_err = 0.0;
  double bound_value = 0.0;
  bool bound_applicable = false;
  double violation_fraction = 0.0;
  double uncoded = 0.0;  // equals epsilon exactly
};

struct SweepResult {
  SweepConfig config;
  std::vector<CellResult> cells;
};

// r = round((1 - epsilon) k), half away from zero.
std::int64_t r_from_epsilon(std::int64_t k, double epsilon);

// Per-trial seed: master_seed chained with the cell coordinates (excluding
// the decoder, so decoders share (G, T) realizations) and the trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, const CodeSpec& spec,
                         double epsilon, StragglerModel model,
                         std::int64_t trial_index);

// Builds G and T from independent derived streams, decodes, and measures.
TrialRecord run_trial(const CodeSpec& spec, std::int64_t r, Decoder decoder,
                      std::uint64_t seed);

// threads = 0 reads SBCODE_THREADS (0 or unset = hardware concurrency).
SweepResult run_sweep(const SweepConfig& cfg, int threads = 0);

double uncoded_error(double epsilon);

// One row per cell, schema:
// family,k,s,p,q,epsilon,r,decoder,straggler_model,trials,mean_err,
// mean_err_over_k,stddev_err,bound_value,bound_applicable,
// violation_fraction,uncoded,master_seed
std::string sweep_result_to_csv(const SweepResult& result);

struct BoundValidationCell {
  CodeSpec spec;
  double epsilon = 0.0;
  std::int64_t r = 0;
  std::int64_t trials = 0;
  std::string bound_name;
  double bound_value = 0.0;
  double fail_prob = 0.0;
  double violation_fraction = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct BoundValidationReport {
  std::vector<BoundValidationCell> cells;
  bool no_applicable_cells = false;
};

// Checks every applicable closed-form bound against stochastic-block-decoded
// trials: pass iff the violation fraction is at most the theorem's failure
// probability plus 2 sqrt(failprob/trials) sampling slack.
BoundValidationReport validate_bounds(const SweepConfig& cfg, int threads = 0);

struct AttackStats {
  std::string method;
  std::int64_t trials = 0;
  double mean_err = 0.0;
  double stddev_err = 0.0;
  double min_err = 0.0;
  double max_err = 0.0;
  std::vector<double> per_trial_err;
  std::vector<std::int64_t> first_pattern;  // T from the first trial
};

struct AttackComparisonReport {
  std::vector<AttackStats> methods;
};

// Mean err(v_opt) under each straggler model on the same G realizations.
AttackComparisonReport attack_comparison(const CodeSpec& spec, std::int64_t r,
                                         std::int64_t trials,
                                         std::uint64_t seed);

// One method; seeds are derived the same way as attack_comparison so results
// from separate invocations are comparable. method is one of
// random|blocks|greedy|bruteforce|spectral.
AttackStats run_attack(const CodeSpec& spec, std::int64_t r,
                       const std::string& method, std::int64_t trials,
                       std::uint64_t seed);

struct GdDemoReport {
  std::int64_t steps = 0;
  std::int64_t r = 0;
  // objective value before any step, then after each step (length steps+1)
  std::vector<double> objective_coded;
  std::vector<double> objective_full;
  std::vector<double> objective_uncoded;
  bool diverged = false;
  double final_gap_vs_full = 0.0;  // |coded - full| at the last step
};

// Gradient descent on a fixed seeded least-squares problem with k
// single-sample losses: the coded run reconstructs each step's gradient sum
// through the code under fresh random stragglers, against a full-gradient
// baseline and an uncoded one-function-per-node baseline that simply drops
// straggled terms.
GdDemoReport run_gd_demo(const CodeSpec& spec, double epsilon,
                         std::int64_t steps, std::uint64_t seed);

int resolve_thread_count(int requested);

}  // namespace sbcode
