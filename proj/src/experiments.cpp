#include "sbcode/experiments.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sbcode/errors.hpp"
#include "sbcode/rng.hpp"

namespace sbcode {

const char* straggler_model_name(StragglerModel model) {
  switch (model) {
    case StragglerModel::kRandom:
      return "random";
    case StragglerModel::kBlocks:
      return "blocks";
  }
  return "random";
}

StragglerModel straggler_model_from_name(const std::string& name) {
  if (name == "random") return StragglerModel::kRandom;
  if (name == "blocks") return StragglerModel::kBlocks;
  throw std::invalid_argument("unknown straggler model '" + name + "'");
}

namespace {

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

CodeFamily derive_family(double p, double q) {
  if (p == 1.0 && q == 0.0) return CodeFamily::kFrc;
  if (p == q) return CodeFamily::kBgc;
  return CodeFamily::kSbc;
}

double resolve_q(const SweepConfig& cfg, std::int64_t s, double p) {
  if (!cfg.q_rule.matched) {
    return cfg.q_rule.explicit_q;
  }
  if (cfg.k == s) {
    return 0.0;  // single block: no cross-block entries to match
  }
  return matched_q(cfg.k, s, p);
}

double sample_stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) {
    return 0.0;
  }
  double acc = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// Runs fn(t) for t in [0, trials) across `threads` workers over contiguous
// chunks. fn must only write to per-trial slots.
template <typename Fn>
void parallel_trials(std::int64_t trials, int threads, Fn&& fn) {
  if (threads <= 1 || trials < 2) {
    for (std::int64_t t = 0; t < trials; ++t) {
      fn(t);
    }
    return;
  }
  const int n = std::min<std::int64_t>(threads, trials);
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < n; ++w) {
    const std::int64_t lo = trials * w / n;
    const std::int64_t hi = trials * (w + 1) / n;
    workers.emplace_back([&, lo, hi]() {
      try {
        for (std::int64_t t = lo; t < hi; ++t) {
          fn(t);
        }
      } catch (...) {
        std::lock_guard<std::mutex> guard(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace

void SweepConfig::validate() const {
  if (k < 1) {
    throw std::invalid_argument("config field 'k' must be >= 1");
  }
  if (s_values.empty()) {
    throw std::invalid_argument("config field 's_values' must be non-empty");
  }
  for (std::int64_t s : s_values) {
    if (s < 1 || s > k) {
      throw std::invalid_argument("config field 's_values' entries must lie "
                                  "in [1, k]");
    }
  }
  if (p_values.empty()) {
    throw std::invalid_argument("config field 'p_values' must be non-empty");
  }
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("config field 'p_values' entries must lie "
                                  "in [0, 1]");
    }
  }
  if (epsilon_values.empty()) {
    throw std::invalid_argument(
        "config field 'epsilon_values' must be non-empty");
  }
  for (double e : epsilon_values) {
    if (!(e > 0.0 && e < 1.0)) {
      throw std::invalid_argument("config field 'epsilon_values' entries "
                                  "must lie in (0, 1)");
    }
    if (r_from_epsilon(k, e) < 1) {
      throw std::invalid_argument(
          "config field 'epsilon_values': r rounds to zero at epsilon=" +
          format_double(e));
    }
  }
  if (trials < 1) {
    throw std::invalid_argument("config field 'trials' must be >= 1");
  }
  if (decoders.empty()) {
    throw std::invalid_argument("config field 'decoders' must be non-empty");
  }
  if (!q_rule.matched &&
      !(q_rule.explicit_q >= 0.0 && q_rule.explicit_q <= 1.0)) {
    throw std::invalid_argument("config field 'q_rule' explicit q must lie "
                                "in [0, 1]");
  }
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  SweepConfig cfg;
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) {
      throw std::invalid_argument(std::string("config field '") + name +
                                  "' is missing");
    }
    return j.at(name);
  };
  auto read = [&](const char* name, auto& into) {
    try {
      field(name).get_to(into);
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(std::string("config field '") + name +
                                  "' has the wrong type");
    }
  };
  read("k", cfg.k);
  read("s_values", cfg.s_values);
  read("p_values", cfg.p_values);
  read("epsilon_values", cfg.epsilon_values);
  read("trials", cfg.trials);
  read("master_seed", cfg.master_seed);
  std::vector<std::string> decoder_names;
  read("decoders", decoder_names);
  for (const auto& name : decoder_names) {
    try {
      cfg.decoders.push_back(decoder_from_name(name));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("config field 'decoders': unknown decoder '" +
                                  name + "'");
    }
  }
  if (j.contains("straggler_model")) {
    std::string model;
    read("straggler_model", model);
    try {
      cfg.straggler_model = straggler_model_from_name(model);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(
          "config field 'straggler_model': unknown model '" + model + "'");
    }
  }
  const auto& q_rule = field("q_rule");
  if (q_rule.is_string() && q_rule.get<std::string>() == "MATCHED") {
    cfg.q_rule.matched = true;
  } else if (q_rule.is_object() && q_rule.contains("EXPLICIT")) {
    cfg.q_rule.matched = false;
    try {
      q_rule.at("EXPLICIT").get_to(cfg.q_rule.explicit_q);
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(
          "config field 'q_rule': EXPLICIT value must be a number");
    }
  } else if (q_rule.is_number()) {
    cfg.q_rule.matched = false;
    cfg.q_rule.explicit_q = q_rule.get<double>();
  } else {
    throw std::invalid_argument(
        "config field 'q_rule' must be \"MATCHED\", a number, or "
        "{\"EXPLICIT\": q}");
  }
  cfg.validate();
  return cfg;
}

std::int64_t r_from_epsilon(std::int64_t k, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  return static_cast<std::int64_t>(
      std::floor((1.0 - epsilon) * static_cast<double>(k) + 0.5));
}

std::uint64_t trial_seed(std::uint64_t master_seed, const CodeSpec& spec,
                         double epsilon, StragglerModel model,
                         std::int64_t trial_index) {
  std::uint64_t h = master_seed;
  h = seed_chain(h, static_cast<std::uint64_t>(spec.k));
  h = seed_chain(h, static_cast<std::uint64_t>(spec.s));
  h = seed_chain(h, double_bits(spec.p));
  h = seed_chain(h, double_bits(spec.q));
  h = seed_chain(h, double_bits(epsilon));
  h = seed_chain(h, static_cast<std::uint64_t>(model));
  return seed_chain(h, static_cast<std::uint64_t>(trial_index));
}

TrialRecord run_trial(const CodeSpec& spec, std::int64_t r, Decoder decoder,
                      std::uint64_t seed) {
  spec.validate();
  if (r < 1 || r > spec.k) {
    throw std::invalid_argument("run_trial requires 1 <= r <= k");
  }
  const AssignmentMatrix g =
      construct_sbc(spec, seed_chain(seed, kStreamMatrix));
  const StragglerPattern t = sample_random_nonstragglers(spec.k, r, seed);
  const auto blocks =
      intersect_blocks(t, BlockPartition::make(spec.k, spec.s));
  const bool all_hit = std::none_of(blocks.begin(), blocks.end(),
                                    [](const auto& b) { return b.empty(); });

  DecodingVector v;
  switch (decoder) {
    case Decoder::kStochasticBlock:
      v = stochastic_block_decode(g, t, seed);
      break;
    case Decoder::kAveragedBlock:
      v = averaged_block_decode(g, t);
      break;
    case Decoder::kBgcUniform:
      v = bgc_uniform_decode(t, spec.k, spec.s);
      break;
    case Decoder::kOptimal:
      v = optimal_decode(g, t);
      break;
  }
  const double e = err(g, v);

  TrialRecord rec;
  rec.seed = seed;
  rec.spec = spec;
  rec.r = r;
  rec.decoder = decoder;
  rec.err_value = e;
  rec.err_over_k = e / static_cast<double>(spec.k);
  rec.all_blocks_hit = all_hit;
  return rec;
}

namespace {

// Per-cell bound selection for the sweep CSV: theorem1 in the gamma < s
// regime, otherwise theorem2; both carry the full hypothesis flags including
// the block-survival condition from r.
std::pair<BoundReport, bool> cell_bound(const CodeSpec& spec, std::int64_t r,
                                        Decoder decoder) {
  const double gamma = spec.q * static_cast<double>(spec.k);
  BoundReport t1 = theorem1_bound(spec.k, spec.s, spec.p, gamma, r);
  std::optional<BoundReport> t2;
  if (spec.q > 0.0) {
    t2 = theorem2_bound(spec.k, spec.s, spec.p, spec.q, r);
  }
  BoundReport chosen = t1;
  if (t1.applicable() && (!t2 || !t2->applicable())) {
    chosen = t1;
  } else if (t2 && t2->applicable() && !t1.applicable()) {
    chosen = *t2;
  } else if (t2 && t2->applicable() && t1.applicable()) {
    chosen = t1.value <= t2->value ? t1 : *t2;
  } else if (t2 && t2->value < t1.value) {
    chosen = *t2;
  }
  // the theorems speak about stochastic block decoding; err(OPTIMAL) can
  // only be smaller, so the same bound applies there
  const bool decoder_covered = decoder == Decoder::kStochasticBlock ||
                               decoder == Decoder::kOptimal;
  return {chosen, chosen.applicable() && decoder_covered};
}

struct CellTrials {
  std::vector<std::vector<double>> errs_by_decoder;
  std::vector<char> all_hit;
};

CellTrials run_cell_trials(const SweepConfig& cfg, const CodeSpec& spec,
                           double epsilon, std::int64_t r, int threads) {
  CellTrials out;
  out.errs_by_decoder.assign(
      cfg.decoders.size(),
      std::vector<double>(static_cast<std::size_t>(cfg.trials), 0.0));
  out.all_hit.assign(static_cast<std::size_t>(cfg.trials), 0);
  const BlockPartition partition = BlockPartition::make(spec.k, spec.s);

  parallel_trials(cfg.trials, threads, [&](std::int64_t t) {
    const std::uint64_t seed =
        trial_seed(cfg.master_seed, spec, epsilon, cfg.straggler_model, t);
    const AssignmentMatrix g =
        construct_sbc(spec, seed_chain(seed, kStreamMatrix));
    StragglerPattern pattern =
        cfg.straggler_model == StragglerModel::kRandom
            ? sample_random_nonstragglers(spec.k, r, seed)
            : frc_block_attack(partition, r);
    const auto blocks = intersect_blocks(pattern, partition);
    out.all_hit[static_cast<std::size_t>(t)] =
        std::none_of(blocks.begin(), blocks.end(),
                     [](const auto& b) { return b.empty(); })
            ? 1
            : 0;
    for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
      DecodingVector v;
      switch (cfg.decoders[d]) {
        case Decoder::kStochasticBlock:
          v = stochastic_block_decode(g, pattern, seed);
          break;
        case Decoder::kAveragedBlock:
          v = averaged_block_decode(g, pattern);
          break;
        case Decoder::kBgcUniform:
          v = bgc_uniform_decode(pattern, spec.k, spec.s);
          break;
        case Decoder::kOptimal:
          v = optimal_decode(g, pattern);
          break;
      }
      out.errs_by_decoder[d][static_cast<std::size_t>(t)] = err(g, v);
    }
  });
  return out;
}

std::string cell_name(std::int64_t s, double p, double epsilon) {
  return "cell (s=" + std::to_string(s) + ", p=" + format_double(p) +
         ", epsilon=" + format_double(epsilon) + ")";
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, int threads) {
  cfg.validate();
  const int n_threads = resolve_thread_count(threads);
  SweepResult result;
  result.config = cfg;
  for (std::int64_t s : cfg.s_values) {
    for (double p : cfg.p_values) {
      for (double epsilon : cfg.epsilon_values) {
        try {
          const double q = resolve_q(cfg, s, p);
          CodeSpec spec{cfg.k, s, p, q, derive_family(p, q)};
          spec.validate();
          const std::int64_t r = r_from_epsilon(cfg.k, epsilon);
          const CellTrials trials =
              run_cell_trials(cfg, spec, epsilon, r, n_threads);
          for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
            const auto& errs = trials.errs_by_decoder[d];
            CellResult cell;
            cell.spec = spec;
            cell.epsilon = epsilon;
            cell.r = r;
            cell.decoder = cfg.decoders[d];
            cell.model = cfg.straggler_model;
            cell.trials = cfg.trials;
            double sum = 0.0;
            for (double e : errs) {
              sum += e;
            }
            cell.mean_err = sum / static_cast<double>(cfg.trials);
            cell.mean_err_over_k =
                cell.mean_err / static_cast<double>(cfg.k);
            cell.stddev_err = sample_stddev(errs, cell.mean_err);
            auto [bound, applicable] = cell_bound(spec, r, cfg.decoders[d]);
            cell.bound_value = bound.value;
            cell.bound_applicable = applicable;
            std::int64_t violations = 0;
            for (double e : errs) {
              // 1e-9 slack: least-squares decodes carry rounding noise, so a
              // 1e-30 err must not count as exceeding an exactly-zero bound
              if (e > bound.value + 1e-9) {
                ++violations;
              }
            }
            cell.violation_fraction = static_cast<double>(violations) /
                                      static_cast<double>(cfg.trials);
            cell.uncoded = uncoded_error(epsilon);
            result.cells.push_back(std::move(cell));
          }
        } catch (const ResourceLimitError&) {
          throw;
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument(cell_name(s, p, epsilon) + ": " +
                                      e.what());
        } catch (const std::exception& e) {
          throw std::runtime_error(cell_name(s, p, epsilon) + ": " + e.what());
        }
      }
    }
  }
  return result;
}

double uncoded_error(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  return epsilon;
}

std::string sweep_result_to_csv(const SweepResult& result) {
  std::string out =
      "family,k,s,p,q,epsilon,r,decoder,straggler_model,trials,mean_err,"
      "mean_err_over_k,stddev_err,bound_value,bound_applicable,"
      "violation_fraction,uncoded,master_seed\n";
  for (const CellResult& c : result.cells) {
    out += family_name(c.spec.family);
    out += ',';
    out += std::to_string(c.spec.k);
    out += ',';
    out += std::to_string(c.spec.s);
    out += ',';
    out += format_double(c.spec.p);
    out += ',';
    out += format_double(c.spec.q);
    out += ',';
    out += format_double(c.epsilon);
    out += ',';
    out += std::to_string(c.r);
    out += ',';
    out += decoder_name(c.decoder);
    out += ',';
    out += straggler_model_name(c.model);
    out += ',';
    out += std::to_string(c.trials);
    out += ',';
    out += format_double(c.mean_err);
    out += ',';
    out += format_double(c.mean_err_over_k);
    out += ',';
    out += format_double(c.stddev_err);
    out += ',';
    out += format_double(c.bound_value);
    out += ',';
    out += c.bound_applicable ? "true" : "false";
    out += ',';
    out += format_double(c.violation_fraction);
    out += ',';
    out += format_double(c.uncoded);
    out += ',';
    out += std::to_string(result.config.master_seed);
    out += '\n';
  }
  return out;
}

BoundValidationReport validate_bounds(const SweepConfig& cfg, int threads) {
  cfg.validate();
  const int n_threads = resolve_thread_count(threads);
  BoundValidationReport report;
  for (std::int64_t s : cfg.s_values) {
    for (double p : cfg.p_values) {
      for (double epsilon : cfg.epsilon_values) {
        const double q = resolve_q(cfg, s, p);
        CodeSpec spec{cfg.k, s, p, q, derive_family(p, q)};
        spec.validate();
        const std::int64_t r = r_from_epsilon(cfg.k, epsilon);

        std::vector<BoundReport> candidates;
        std::vector<bool> gate;
        const double gamma = q * static_cast<double>(cfg.k);
        BoundReport t1 = theorem1_bound(cfg.k, s, p, gamma, r);
        candidates.push_back(t1);
        gate.push_back(t1.applicable());
        if (q > 0.0) {
          BoundReport t2 = theorem2_bound(cfg.k, s, p, q, r);
          candidates.push_back(t2);
          gate.push_back(t2.applicable());
          BoundReport tr = theorem_ref_bound(cfg.k, s, p, q, r);
          candidates.push_back(tr);
          gate.push_back(tr.applicable());
        }
        if (p == q && p > 0.0) {
          BoundReport c2 = corollary2_bound(cfg.k, s, p, r);
          // corollary2 is gated on its p condition alone; the block-survival
          // condition is reported but does not exclude the cell
          bool p_ok = false;
          for (const auto& [name, ok] : c2.preconditions) {
            if (name == "p_ge_s_lnk_over_k") {
              p_ok = ok;
            }
          }
          candidates.push_back(c2);
          gate.push_back(p_ok);
        }
        if (std::none_of(gate.begin(), gate.end(), [](bool b) { return b; })) {
          continue;
        }

        SweepConfig one_cell = cfg;
        one_cell.s_values = {s};
        one_cell.p_values = {p};
        one_cell.epsilon_values = {epsilon};
        one_cell.decoders = {Decoder::kStochasticBlock};
        const CellTrials trials =
            run_cell_trials(one_cell, spec, epsilon, r, n_threads);
        const auto& errs = trials.errs_by_decoder[0];

        for (std::size_t b = 0; b < candidates.size(); ++b) {
          if (!gate[b]) {
            continue;
          }
          const BoundReport& bound = candidates[b];
          std::int64_t violations = 0;
          for (double e : errs) {
            if (e > bound.value) {
              ++violations;
            }
          }
          BoundValidationCell cell;
          cell.spec = spec;
          cell.epsilon = epsilon;
          cell.r = r;
          cell.trials = cfg.trials;
          cell.bound_name = bound.name;
          cell.bound_value = bound.value;
          cell.fail_prob = 1.0 - bound.prob;
          cell.violation_fraction = static_cast<double>(violations) /
                                    static_cast<double>(cfg.trials);
          cell.slack = 2.0 * std::sqrt(cell.fail_prob /
                                       static_cast<double>(cfg.trials));
          cell.pass =
              cell.violation_fraction <= cell.fail_prob + cell.slack;
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  report.no_applicable_cells = report.cells.empty();
  return report;
}

namespace {

double pattern_optimal_err(const AssignmentMatrix& g,
                           const StragglerPattern& t) {
  return err(g, optimal_decode(g, t));
}

}  // namespace

AttackStats run_attack(const CodeSpec& spec, std::int64_t r,
                       const std::string& method, std::int64_t trials,
                       std::uint64_t seed) {
  spec.validate();
  if (r < 1 || r > spec.k) {
    throw std::invalid_argument("run_attack requires 1 <= r <= k");
  }
  if (trials < 1) {
    throw std::invalid_argument("run_attack requires trials >= 1");
  }
  const bool known =
      method == "random" || method == "blocks" || method == "greedy" ||
      method == "bruteforce" || method == "spectral";
  if (!known) {
    throw std::invalid_argument("unknown attack method '" + method + "'");
  }
  if (method == "blocks" && (spec.k - r) % spec.s != 0) {
    throw std::invalid_argument(
        "blocks attack needs k - r to be a multiple of s; round r");
  }
  const BlockPartition partition = BlockPartition::make(spec.k, spec.s);

  AttackStats stats;
  stats.method = method;
  stats.trials = trials;
  std::vector<double> errs;
  errs.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_base = seed_chain(seed, static_cast<std::uint64_t>(t));
    const AssignmentMatrix g =
        construct_sbc(spec, seed_chain(trial_base, kStreamMatrix));
    StragglerPattern pattern{spec.k, {}};
    double e = 0.0;
    if (method == "random") {
      pattern = sample_random_nonstragglers(spec.k, r, trial_base);
      e = pattern_optimal_err(g, pattern);
    } else if (method == "blocks") {
      pattern = frc_block_attack(partition, r);
      e = pattern_optimal_err(g, pattern);
    } else if (method == "greedy") {
      pattern = greedy_attack(g, r);
      e = pattern_optimal_err(g, pattern);
    } else if (method == "bruteforce") {
      pattern = bruteforce_attack(g, r);
      e = pattern_optimal_err(g, pattern);
    } else {  // spectral: attack the permuted view, report original indices
      const PermutedCode pc = make_permuted_code(g, trial_base);
      const StragglerPattern view_pattern = spectral_community_attack(pc, r);
      e = pattern_optimal_err(pc.matrix, view_pattern);
      std::vector<std::int64_t> original;
      original.reserve(view_pattern.non_stragglers.size());
      for (std::int64_t j : view_pattern.non_stragglers) {
        original.push_back(pc.perm[static_cast<std::size_t>(j)]);
      }
      std::sort(original.begin(), original.end());
      pattern = StragglerPattern{spec.k, std::move(original)};
    }
    if (t == 0) {
      stats.first_pattern = pattern.non_stragglers;
    }
    errs.push_back(e);
  }
  double sum = 0.0;
  stats.min_err = errs.front();
  stats.max_err = errs.front();
  for (double e : errs) {
    sum += e;
    stats.min_err = std::min(stats.min_err, e);
    stats.max_err = std::max(stats.max_err, e);
  }
  stats.mean_err = sum / static_cast<double>(trials);
  stats.stddev_err = sample_stddev(errs, stats.mean_err);
  stats.per_trial_err = std::move(errs);
  return stats;
}

AttackComparisonReport attack_comparison(const CodeSpec& spec, std::int64_t r,
                                         std::int64_t trials,
                                         std::uint64_t seed) {
  AttackComparisonReport report;
  report.methods.push_back(run_attack(spec, r, "random", trials, seed));
  if ((spec.k - r) % spec.s == 0) {
    report.methods.push_back(run_attack(spec, r, "blocks", trials, seed));
  }
  report.methods.push_back(run_attack(spec, r, "greedy", trials, seed));
  report.methods.push_back(run_attack(spec, r, "spectral", trials, seed));
  return report;
}

namespace {

constexpr std::int64_t kGdModelDim = 8;
constexpr std::uint64_t kGdStepLabelBase = 0x1000;

double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.next_unit();  // (0, 1]
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

GdDemoReport run_gd_demo(const CodeSpec& spec, double epsilon,
                         std::int64_t steps, std::uint64_t seed) {
  spec.validate();
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  }
  if (steps < 1) {
    throw std::invalid_argument("steps must be >= 1");
  }
  const std::int64_t k = spec.k;
  const std::int64_t r = r_from_epsilon(k, epsilon);
  if (r < 1) {
    throw std::invalid_argument("epsilon leaves no non-stragglers");
  }

  SplitMix64 data_rng(seed_chain(seed, kStreamGdData));
  Eigen::MatrixXd a(k, kGdModelDim);
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t j = 0; j < kGdModelDim; ++j) {
      a(i, j) = gaussian(data_rng);
    }
  }
  Eigen::VectorXd x_star(kGdModelDim);
  for (std::int64_t j = 0; j < kGdModelDim; ++j) {
    x_star(j) = gaussian(data_rng);
  }
  Eigen::VectorXd b = a * x_star;
  for (std::int64_t i = 0; i < k; ++i) {
    b(i) += 0.01 * gaussian(data_rng);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.transpose() * a);
  const double lipschitz = eig.eigenvalues().maxCoeff();
  const double step_size = 1.0 / lipschitz;

  const AssignmentMatrix g =
      construct_sbc(spec, seed_chain(seed, kStreamMatrix));

  auto objective = [&](const Eigen::VectorXd& x) {
    return 0.5 * (a * x - b).squaredNorm();
  };
  // per-sample gradients as rows: f_i = a_i (a_i^T x - b_i)
  auto gradients = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::VectorXd residual = a * x - b;
    return residual.asDiagonal() * a;
  };

  Eigen::VectorXd x_coded = Eigen::VectorXd::Zero(kGdModelDim);
  Eigen::VectorXd x_full = Eigen::VectorXd::Zero(kGdModelDim);
  Eigen::VectorXd x_uncoded = Eigen::VectorXd::Zero(kGdModelDim);

  GdDemoReport report;
  report.steps = steps;
  report.r = r;
  report.objective_coded.push_back(objective(x_coded));
  report.objective_full.push_back(objective(x_full));
  report.objective_uncoded.push_back(objective(x_uncoded));

  for (std::int64_t step = 0; step < steps; ++step) {
    const std::uint64_t step_seed =
        seed_chain(seed, kGdStepLabelBase + static_cast<std::uint64_t>(step));
    const StragglerPattern t = sample_random_nonstragglers(k, r, step_seed);
    const DecodingVector v = stochastic_block_decode(g, t, step_seed);

    const Eigen::MatrixXd f_coded = gradients(x_coded);
    Eigen::VectorXd coded_grad = Eigen::VectorXd::Zero(kGdModelDim);
    for (std::int64_t j : v.support) {
      // worker j's output is the sum of its assigned per-sample gradients
      Eigen::VectorXd y_j = Eigen::VectorXd::Zero(kGdModelDim);
      for (std::int64_t i = 0; i < k; ++i) {
        if (g.g.at(i, j) != 0.0) {
          y_j += f_coded.row(i).transpose();
        }
      }
      coded_grad += v.v[static_cast<std::size_t>(j)] * y_j;
    }
    x_coded -= step_size * coded_grad;

    x_full -= step_size * (a.transpose() * (a * x_full - b));

    const Eigen::MatrixXd f_uncoded = gradients(x_uncoded);
    Eigen::VectorXd uncoded_grad = Eigen::VectorXd::Zero(kGdModelDim);
    for (std::int64_t i : t.non_stragglers) {
      uncoded_grad += f_uncoded.row(i).transpose();
    }
    x_uncoded -= step_size * uncoded_grad;

    const double oc = objective(x_coded);
    const double of = objective(x_full);
    const double ou = objective(x_uncoded);
    report.objective_coded.push_back(oc);
    report.objective_full.push_back(of);
    report.objective_uncoded.push_back(ou);
    if (!std::isfinite(oc) || oc > 1e6 || !std::isfinite(ou) || ou > 1e6) {
      report.diverged = true;
      break;
    }
  }
  report.final_gap_vs_full =
      std::abs(report.objective_coded.back() - report.objective_full.back());
  return report;
}

int resolve_thread_count(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("SBCODE_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) {
      return static_cast<int>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace sbcode
