#include "sbcode.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbcode/bounds.hpp"
#include "sbcode/codes.hpp"
#include "sbcode/decoding.hpp"
#include "sbcode/errors.hpp"
#include "sbcode/experiments.hpp"
#include "sbcode/plot.hpp"
#include "sbcode/rng.hpp"
#include "sbcode/stragglers.hpp"

struct sbcode_code {
  sbcode::AssignmentMatrix m;
};

struct sbcode_pattern {
  sbcode::StragglerPattern p;
};

struct sbcode_decoding {
  sbcode::DecodingVector d;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) {
    std::memcpy(out, s.c_str(), s.size() + 1);
  }
  return out;
}

template <typename Fn>
sbcode_status guarded(Fn&& fn) {
  try {
    fn();
    return SBCODE_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SBCODE_ERROR_INVALID_ARGUMENT;
  } catch (const sbcode::ResourceLimitError& e) {
    g_last_error = e.what();
    return SBCODE_ERROR_RESOURCE_LIMIT;
  } catch (const sbcode::IoError& e) {
    g_last_error = e.what();
    return SBCODE_ERROR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SBCODE_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SBCODE_ERROR_INTERNAL;
  }
}

sbcode_status require(bool ok, const char* message) {
  if (ok) {
    return SBCODE_OK;
  }
  g_last_error = message;
  return SBCODE_ERROR_INVALID_ARGUMENT;
}

nlohmann::json report_json(const sbcode::BoundReport& report) {
  return nlohmann::json::parse(sbcode::bound_report_to_json(report));
}

}  // namespace

extern "C" {

const char* sbcode_version(void) { return "1.0.0"; }

const char* sbcode_status_name(sbcode_status status) {
  switch (status) {
    case SBCODE_OK:
      return "ok";
    case SBCODE_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case SBCODE_ERROR_IO:
      return "io error";
    case SBCODE_ERROR_RESOURCE_LIMIT:
      return "resource limit";
    case SBCODE_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* sbcode_last_error(void) { return g_last_error.c_str(); }

void sbcode_string_free(char* s) { std::free(s); }

sbcode_status sbcode_code_create_frc(int64_t k, int64_t s, sbcode_code** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] { *out = new sbcode_code{sbcode::construct_frc(k, s)}; });
}

sbcode_status sbcode_code_create_bgc(int64_t k, int64_t s, double p,
                                     uint64_t seed, sbcode_code** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded(
      [&] { *out = new sbcode_code{sbcode::construct_bgc(k, s, p, seed)}; });
}

sbcode_status sbcode_code_create_sbc(int64_t k, int64_t s, double p, double q,
                                     uint64_t seed, sbcode_code** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] {
    *out = new sbcode_code{
        sbcode::construct_sbc(sbcode::sbc_spec(k, s, p, q), seed)};
  });
}

void sbcode_code_destroy(sbcode_code* code) { delete code; }

sbcode_status sbcode_code_dims(const sbcode_code* code, int64_t* k,
                               int64_t* s) {
  if (auto st = require(code != nullptr, "code must not be null")) return st;
  if (k != nullptr) *k = code->m.spec.k;
  if (s != nullptr) *s = code->m.spec.s;
  return SBCODE_OK;
}

sbcode_status sbcode_code_entry(const sbcode_code* code, int64_t row,
                                int64_t col, double* out) {
  if (auto st = require(code != nullptr && out != nullptr,
                        "code and out must not be null")) {
    return st;
  }
  if (auto st = require(row >= 0 && row < code->m.spec.k && col >= 0 &&
                            col < code->m.spec.k,
                        "entry index out of range")) {
    return st;
  }
  *out = code->m.g.at(row, col);
  return SBCODE_OK;
}

sbcode_status sbcode_code_csv(const sbcode_code* code, char** out) {
  if (auto st = require(code != nullptr && out != nullptr,
                        "code and out must not be null")) {
    return st;
  }
  return guarded([&] { *out = dup_string(sbcode::matrix_to_csv(code->m.g)); });
}

sbcode_status sbcode_matched_q(int64_t k, int64_t s, double p, double* out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] { *out = sbcode::matched_q(k, s, p); });
}

sbcode_status sbcode_expected_column_weight(int64_t k, int64_t s, double p,
                                            double q, double* out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] {
    *out = sbcode::expected_column_weight(sbcode::sbc_spec(k, s, p, q));
  });
}

sbcode_status sbcode_r_from_epsilon(int64_t k, double epsilon, int64_t* out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] { *out = sbcode::r_from_epsilon(k, epsilon); });
}

sbcode_status sbcode_pattern_random(int64_t k, int64_t r, uint64_t seed,
                                    sbcode_pattern** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] {
    *out = new sbcode_pattern{sbcode::sample_random_nonstragglers(k, r, seed)};
  });
}

sbcode_status sbcode_pattern_blocks(int64_t k, int64_t s, int64_t r,
                                    sbcode_pattern** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] {
    *out = new sbcode_pattern{
        sbcode::frc_block_attack(sbcode::BlockPartition::make(k, s), r)};
  });
}

sbcode_status sbcode_pattern_greedy(const sbcode_code* code, int64_t r,
                                    sbcode_pattern** out) {
  if (auto st = require(code != nullptr && out != nullptr,
                        "code and out must not be null")) {
    return st;
  }
  return guarded(
      [&] { *out = new sbcode_pattern{sbcode::greedy_attack(code->m, r)}; });
}

sbcode_status sbcode_pattern_bruteforce(const sbcode_code* code, int64_t r,
                                        sbcode_pattern** out) {
  if (auto st = require(code != nullptr && out != nullptr,
                        "code and out must not be null")) {
    return st;
  }
  return guarded(
      [&] { *out = new sbcode_pattern{sbcode::bruteforce_attack(code->m, r)}; });
}

sbcode_status sbcode_pattern_spectral(const sbcode_code* code,
                                      uint64_t perm_seed, int64_t r,
                                      sbcode_pattern** out) {
  if (auto st = require(code != nullptr && out != nullptr,
                        "code and out must not be null")) {
    return st;
  }
  return guarded([&] {
    const sbcode::PermutedCode pc =
        sbcode::make_permuted_code(code->m, perm_seed);
    const sbcode::StragglerPattern view =
        sbcode::spectral_community_attack(pc, r);
    std::vector<std::int64_t> original;
    original.reserve(view.non_stragglers.size());
    for (std::int64_t j : view.non_stragglers) {
      original.push_back(pc.perm[static_cast<std::size_t>(j)]);
    }
    std::sort(original.begin(), original.end());
    *out = new sbcode_pattern{
        sbcode::StragglerPattern{code->m.spec.k, std::move(original)}};
  });
}

void sbcode_pattern_destroy(sbcode_pattern* pattern) { delete pattern; }

sbcode_status sbcode_pattern_size(const sbcode_pattern* pattern, int64_t* r) {
  if (auto st = require(pattern != nullptr && r != nullptr,
                        "pattern and r must not be null")) {
    return st;
  }
  *r = pattern->p.r();
  return SBCODE_OK;
}

sbcode_status sbcode_pattern_indices(const sbcode_pattern* pattern,
                                     int64_t* buf, int64_t capacity) {
  if (auto st = require(pattern != nullptr && buf != nullptr,
                        "pattern and buf must not be null")) {
    return st;
  }
  if (auto st = require(capacity >= pattern->p.r(),
                        "buffer capacity below pattern size")) {
    return st;
  }
  std::copy(pattern->p.non_stragglers.begin(),
            pattern->p.non_stragglers.end(), buf);
  return SBCODE_OK;
}

sbcode_status sbcode_pattern_json(const sbcode_pattern* pattern, char** out) {
  if (auto st = require(pattern != nullptr && out != nullptr,
                        "pattern and out must not be null")) {
    return st;
  }
  return guarded([&] {
    nlohmann::json j = pattern->p.non_stragglers;
    *out = dup_string(j.dump());
  });
}

sbcode_status sbcode_decode(const sbcode_code* code,
                            const sbcode_pattern* pattern, const char* decoder,
                            uint64_t seed, sbcode_decoding** out) {
  if (auto st = require(code != nullptr && pattern != nullptr &&
                            decoder != nullptr && out != nullptr,
                        "code, pattern, decoder and out must not be null")) {
    return st;
  }
  return guarded([&] {
    sbcode::DecodingVector v;
    switch (sbcode::decoder_from_name(decoder)) {
      case sbcode::Decoder::kStochasticBlock:
        v = sbcode::stochastic_block_decode(code->m, pattern->p, seed);
        break;
      case sbcode::Decoder::kAveragedBlock:
        v = sbcode::averaged_block_decode(code->m, pattern->p);
        break;
      case sbcode::Decoder::kBgcUniform:
        v = sbcode::bgc_uniform_decode(pattern->p, code->m.spec.k,
                                       code->m.spec.s);
        break;
      case sbcode::Decoder::kOptimal:
        v = sbcode::optimal_decode(code->m, pattern->p);
        break;
    }
    *out = new sbcode_decoding{std::move(v)};
  });
}

void sbcode_decoding_destroy(sbcode_decoding* decoding) { delete decoding; }

sbcode_status sbcode_decoding_beta(const sbcode_decoding* decoding,
                                   double* out) {
  if (auto st = require(decoding != nullptr && out != nullptr,
                        "decoding and out must not be null")) {
    return st;
  }
  *out = decoding->d.beta;
  return SBCODE_OK;
}

sbcode_status sbcode_decoding_err(const sbcode_code* code,
                                  const sbcode_decoding* decoding,
                                  double* out) {
  if (auto st = require(code != nullptr && decoding != nullptr &&
                            out != nullptr,
                        "code, decoding and out must not be null")) {
    return st;
  }
  return guarded([&] { *out = sbcode::err(code->m, decoding->d); });
}

sbcode_status sbcode_decoding_json(const sbcode_decoding* decoding,
                                   char** out) {
  if (auto st = require(decoding != nullptr && out != nullptr,
                        "decoding and out must not be null")) {
    return st;
  }
  return guarded(
      [&] { *out = dup_string(sbcode::decoding_to_json(decoding->d)); });
}

sbcode_status sbcode_bounds_json(int64_t k, int64_t s, double p, double q,
                                 int64_t r, char** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] {
    const double gamma = q * static_cast<double>(k);
    std::optional<std::int64_t> opt_r;
    if (r >= 0) {
      opt_r = r;
    }
    nlohmann::json bounds = nlohmann::json::array();
    auto push = [&](const char* name, auto&& make) {
      try {
        bounds.push_back(report_json(make()));
      } catch (const std::invalid_argument& e) {
        bounds.push_back({{"name", name}, {"skipped", e.what()}});
      }
    };
    push("theorem1",
         [&] { return sbcode::theorem1_bound(k, s, p, gamma, opt_r); });
    push("theorem2", [&] { return sbcode::theorem2_bound(k, s, p, q, opt_r); });
    push("theorem_general_beta",
         [&] { return sbcode::theorem_ref_bound(k, s, p, q, opt_r); });
    push("corollary2_bgc",
         [&] { return sbcode::corollary2_bound(k, s, p, opt_r); });
    push("lemma3_linf", [&] {
      sbcode::BoundReport lemma3;
      lemma3.name = "lemma3_linf";
      lemma3.value = sbcode::lemma3_linf_bound(k, s, gamma);
      lemma3.prob = 1.0 - 2.0 / static_cast<double>(k);
      lemma3.preconditions.emplace_back("gamma_lt_s",
                                        gamma < static_cast<double>(s));
      lemma3.notes = "sup-norm bound on G v - 1, conditioned on every block "
                     "having a survivor";
      return lemma3;
    });

    nlohmann::json j{{"k", k}, {"s", s}, {"p", p}, {"q", q},
                     {"gamma", gamma}, {"bounds", bounds}};
    if (opt_r) {
      j["r"] = *opt_r;
      j["lemma1_nonempty_prob"] = sbcode::lemma1_nonempty_prob_bound(k, s, *opt_r);
      j["lemma1_nonempty_prob_relaxed"] =
          sbcode::lemma1_nonempty_prob_bound_relaxed(k, s, *opt_r);
      j["lemma2_condition"] = sbcode::lemma2_condition(k, s, *opt_r);
      j["corollary1_applicable"] =
          sbcode::corollary1_applicable(k, s, *opt_r, gamma);
    }
    nlohmann::json predicates;
    predicates["exact_recovery_impossible"] =
        sbcode::exact_recovery_impossible(k, s, p, q);
    predicates["weak_recovery_possible_two_communities"] =
        sbcode::weak_recovery_possible_two_communities(k, p, q);
    const std::int64_t m = (k + s - 1) / s;
    if (m >= 2) {
      try {
        predicates["snr"] = sbcode::snr(p * static_cast<double>(k),
                                        q * static_cast<double>(k), m);
      } catch (const std::invalid_argument&) {
        predicates["snr"] = nullptr;
      }
    } else {
      predicates["snr"] = nullptr;
    }
    j["predicates"] = predicates;
    *out = dup_string(j.dump(2));
  });
}

sbcode_status sbcode_sweep_csv(const char* config_json,
                               int64_t trials_override, int threads,
                               char** out_csv) {
  if (auto st = require(config_json != nullptr && out_csv != nullptr,
                        "config_json and out_csv must not be null")) {
    return st;
  }
  return guarded([&] {
    sbcode::SweepConfig cfg = sbcode::SweepConfig::from_json_text(config_json);
    if (trials_override > 0) {
      cfg.trials = trials_override;
    }
    const sbcode::SweepResult result = sbcode::run_sweep(cfg, threads);
    *out_csv = dup_string(sbcode::sweep_result_to_csv(result));
  });
}

sbcode_status sbcode_plot_svg(const char* results_csv, char** out_svg) {
  if (auto st = require(results_csv != nullptr && out_svg != nullptr,
                        "results_csv and out_svg must not be null")) {
    return st;
  }
  return guarded(
      [&] { *out_svg = dup_string(sbcode::render_results_svg(results_csv)); });
}

sbcode_status sbcode_simulate_json(int64_t k, int64_t s, double p, double q,
                                   const char* decoder, int64_t r,
                                   int64_t trials, uint64_t seed, char** out) {
  if (auto st = require(decoder != nullptr && out != nullptr,
                        "decoder and out must not be null")) {
    return st;
  }
  return guarded([&] {
    if (trials < 1) {
      throw std::invalid_argument("trials must be >= 1");
    }
    const sbcode::CodeSpec spec = sbcode::sbc_spec(k, s, p, q);
    const sbcode::Decoder dec = sbcode::decoder_from_name(decoder);
    double sum = 0.0;
    double min_err = 0.0;
    double max_err = 0.0;
    std::vector<double> errs;
    errs.reserve(static_cast<std::size_t>(trials));
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      const sbcode::TrialRecord rec = sbcode::run_trial(
          spec, r, dec, sbcode::seed_chain(seed, static_cast<uint64_t>(t)));
      errs.push_back(rec.err_value);
      sum += rec.err_value;
      if (t == 0 || rec.err_value < min_err) min_err = rec.err_value;
      if (t == 0 || rec.err_value > max_err) max_err = rec.err_value;
      if (rec.all_blocks_hit) ++hits;
    }
    const double mean = sum / static_cast<double>(trials);
    double var = 0.0;
    for (double e : errs) {
      var += (e - mean) * (e - mean);
    }
    const double stddev =
        trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1)) : 0.0;
    nlohmann::json j{{"k", k},
                     {"s", s},
                     {"p", p},
                     {"q", q},
                     {"r", r},
                     {"decoder", decoder},
                     {"trials", trials},
                     {"seed", seed},
                     {"mean_err", mean},
                     {"mean_err_over_k", mean / static_cast<double>(k)},
                     {"stddev_err", stddev},
                     {"min_err", min_err},
                     {"max_err", max_err},
                     {"all_blocks_hit_fraction",
                      static_cast<double>(hits) / static_cast<double>(trials)}};
    *out = dup_string(j.dump(2));
  });
}

sbcode_status sbcode_attack_json(int64_t k, int64_t s, double p, double q,
                                 int64_t r, const char* method, int64_t trials,
                                 uint64_t seed, char** out_json,
                                 char** out_csv) {
  if (auto st = require(method != nullptr && out_json != nullptr,
                        "method and out_json must not be null")) {
    return st;
  }
  return guarded([&] {
    const sbcode::CodeSpec spec = sbcode::sbc_spec(k, s, p, q);
    const sbcode::AttackStats stats =
        sbcode::run_attack(spec, r, method, trials, seed);
    nlohmann::json j{{"k", k},
                     {"s", s},
                     {"p", p},
                     {"q", q},
                     {"r", r},
                     {"method", stats.method},
                     {"trials", stats.trials},
                     {"seed", seed},
                     {"mean_err", stats.mean_err},
                     {"stddev_err", stats.stddev_err},
                     {"min_err", stats.min_err},
                     {"max_err", stats.max_err},
                     {"first_trial_non_stragglers", stats.first_pattern}};
    *out_json = dup_string(j.dump(2));
    if (out_csv != nullptr) {
      std::string csv = "trial,err\n";
      for (std::size_t t = 0; t < stats.per_trial_err.size(); ++t) {
        csv += std::to_string(t) + "," +
               nlohmann::json(stats.per_trial_err[t]).dump() + "\n";
      }
      *out_csv = dup_string(csv);
    }
  });
}

sbcode_status sbcode_gd_demo_json(int64_t k, int64_t s, double p, double q,
                                  double epsilon, int64_t steps, uint64_t seed,
                                  char** out) {
  if (auto st = require(out != nullptr, "out must not be null")) return st;
  return guarded([&] {
    const sbcode::CodeSpec spec = sbcode::sbc_spec(k, s, p, q);
    const sbcode::GdDemoReport report =
        sbcode::run_gd_demo(spec, epsilon, steps, seed);
    nlohmann::json j{{"k", k},
                     {"s", s},
                     {"p", p},
                     {"q", q},
                     {"epsilon", epsilon},
                     {"steps", report.steps},
                     {"r", report.r},
                     {"diverged", report.diverged},
                     {"final_objective_coded", report.objective_coded.back()},
                     {"final_objective_full", report.objective_full.back()},
                     {"final_objective_uncoded",
                      report.objective_uncoded.back()},
                     {"final_gap_vs_full", report.final_gap_vs_full},
                     {"objective_coded", report.objective_coded},
                     {"objective_full", report.objective_full},
                     {"objective_uncoded", report.objective_uncoded}};
    *out = dup_string(j.dump(2));
  });
}

}  // extern "C"
