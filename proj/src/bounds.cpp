#include "sbcode/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sbcode/decoding.hpp"
#include "sbcode/numerics.hpp"

namespace sbcode {

bool BoundReport::applicable() const {
  return std::all_of(preconditions.begin(), preconditions.end(),
                     [](const auto& f) { return f.second; });
}

namespace {

void require_ksr(std::int64_t k, std::int64_t s, std::int64_t r) {
  if (k < 1 || s < 1 || s > k) {
    throw std::invalid_argument("require 1 <= s <= k");
  }
  if (r < 1 || r > k) {
    throw std::invalid_argument("require 1 <= r <= k");
  }
}

double ln(double x) { return std::log(x); }

// variance of the summed column entries: (1-p)p + (k/s - 1)(1-q)q
double column_variance_term(std::int64_t k, std::int64_t s, double p,
                            double q) {
  return (1.0 - p) * p +
         (static_cast<double>(k) / static_cast<double>(s) - 1.0) *
             (1.0 - q) * q;
}

void maybe_flag_s_condition(BoundReport& report, std::int64_t k,
                            std::int64_t s,
                            const std::optional<std::int64_t>& r) {
  if (r.has_value()) {
    report.preconditions.emplace_back("s_ge_2lnk_k_over_r",
                                      lemma2_condition(k, s, *r));
  }
}

}  // namespace

double lemma1_nonempty_prob_bound(std::int64_t k, std::int64_t s,
                                  std::int64_t r) {
  require_ksr(k, s, r);
  if (r > k - s) {
    return 1.0;  // C(k-s, r) = 0: a block can no longer be all-straggler
  }
  const double log_ratio = log_binomial(k - s, r) - log_binomial(k, r);
  const double blocks = static_cast<double>(k) / static_cast<double>(s);
  return std::max(0.0, 1.0 - blocks * std::exp(log_ratio));
}

double lemma1_nonempty_prob_bound_relaxed(std::int64_t k, std::int64_t s,
                                          std::int64_t r) {
  require_ksr(k, s, r);
  const double blocks = static_cast<double>(k) / static_cast<double>(s);
  const double ratio = static_cast<double>(k - s) / static_cast<double>(k);
  return std::max(0.0, 1.0 - blocks * std::pow(ratio, static_cast<double>(r)));
}

bool lemma2_condition(std::int64_t k, std::int64_t s, std::int64_t r) {
  require_ksr(k, s, r);
  if (k < 2) {
    throw std::invalid_argument("lemma2_condition requires k >= 2");
  }
  return static_cast<double>(s) >=
         2.0 * ln(static_cast<double>(k)) * static_cast<double>(k) /
             static_cast<double>(r);
}

BoundReport theorem1_bound(std::int64_t k, std::int64_t s, double p,
                           double gamma, std::optional<std::int64_t> r) {
  if (k < 2 || s < 1 || s > k) {
    throw std::invalid_argument("require k >= 2 and 1 <= s <= k");
  }
  if (gamma < 0.0) {
    throw std::invalid_argument("gamma must be >= 0");
  }
  const double lnk = ln(static_cast<double>(k));
  const double sd = static_cast<double>(s);
  const double kd = static_cast<double>(k);
  BoundReport report;
  report.name = "theorem1";
  report.value = 14.0 * std::sqrt(lnk * gamma / sd) *
                 std::max(kd * ((1.0 - p) + gamma / sd), 3.0 * lnk);
  report.prob = 1.0 - 4.0 / kd;
  report.preconditions.emplace_back("gamma_lt_s", gamma < sd);
  report.preconditions.emplace_back("one_minus_p_le_inv_k_sq",
                                    1.0 - p <= 1.0 / (kd * kd));
  maybe_flag_s_condition(report, k, s, r);
  report.notes = "err bound for q = gamma/k under stochastic block decoding";
  return report;
}

bool corollary1_applicable(std::int64_t k, std::int64_t s, std::int64_t r,
                           double gamma) {
  require_ksr(k, s, r);
  const double lnk = ln(static_cast<double>(k));
  return lemma2_condition(k, s, r) &&
         gamma <= 3.0 * lnk * static_cast<double>(s) / static_cast<double>(k);
}

BoundReport theorem2_bound(std::int64_t k, std::int64_t s, double p, double q,
                           std::optional<std::int64_t> r) {
  if (k < 2 || s < 1 || s > k) {
    throw std::invalid_argument("require k >= 2 and 1 <= s <= k");
  }
  if (q <= 0.0) {
    throw std::invalid_argument("theorem2_bound requires q > 0");
  }
  const double lnk = ln(static_cast<double>(k));
  const double sd = static_cast<double>(s);
  const double kd = static_cast<double>(k);
  BoundReport report;
  report.name = "theorem2";
  report.value = (16.0 * lnk * sd * sd / (kd * q * q)) *
                 column_variance_term(k, s, p, q);
  report.prob = 1.0 - 2.0 / kd;
  report.preconditions.emplace_back(
      "cross_variance_ge_lnk",
      (kd / sd - 1.0) * (1.0 - q) * q >= lnk);
  maybe_flag_s_condition(report, k, s, r);
  report.notes = "err bound in the q >~ s ln(k)/k regime";
  return report;
}

BoundReport theorem_ref_bound(std::int64_t k, std::int64_t s, double p,
                              double q, std::optional<std::int64_t> r) {
  if (k < 2 || s < 1 || s > k) {
    throw std::invalid_argument("require k >= 2 and 1 <= s <= k");
  }
  const double lnk = ln(static_cast<double>(k));
  const double kd = static_cast<double>(k);
  const double beta = beta_scaling(k, s, p, q);
  BoundReport report;
  report.name = "theorem_general_beta";
  report.value = (16.0 * kd * lnk / (beta * beta)) *
                 column_variance_term(k, s, p, q);
  report.prob = 1.0 - 2.0 / kd;
  report.preconditions.emplace_back(
      "cross_variance_ge_lnk",
      (kd / static_cast<double>(s) - 1.0) * (1.0 - q) * q >= lnk);
  maybe_flag_s_condition(report, k, s, r);
  report.notes = "general form with beta = " + std::to_string(beta);
  return report;
}

BoundReport corollary2_bound(std::int64_t k, std::int64_t s, double p,
                             std::optional<std::int64_t> r) {
  if (k < 2 || s < 1 || s > k) {
    throw std::invalid_argument("require k >= 2 and 1 <= s <= k");
  }
  if (p <= 0.0) {
    throw std::invalid_argument("corollary2_bound requires p > 0");
  }
  const double lnk = ln(static_cast<double>(k));
  BoundReport report;
  report.name = "corollary2_bgc";
  report.value = 16.0 * lnk * static_cast<double>(s) * (1.0 - p) / p;
  report.prob = 1.0 - 2.0 / static_cast<double>(k);
  report.preconditions.emplace_back(
      "p_ge_s_lnk_over_k",
      p >= static_cast<double>(s) * lnk / static_cast<double>(k));
  maybe_flag_s_condition(report, k, s, r);
  report.notes = "BGC specialization (p = q)";
  return report;
}

double lemma3_linf_bound(std::int64_t k, std::int64_t s, double gamma) {
  if (k < 2 || s < 1 || s > k) {
    throw std::invalid_argument("require k >= 2 and 1 <= s <= k");
  }
  if (gamma < 0.0 || gamma >= static_cast<double>(s)) {
    throw std::invalid_argument("lemma3 requires 0 <= gamma < s");
  }
  return 7.0 * std::sqrt(ln(static_cast<double>(k)) * gamma /
                         static_cast<double>(s));
}

double snr(double a, double b, std::int64_t m) {
  if (m < 2) {
    throw std::invalid_argument("snr requires m >= 2 communities");
  }
  const double denom =
      static_cast<double>(m) * (a + static_cast<double>(m - 1) * b);
  if (!(denom > 0.0)) {
    throw std::invalid_argument("snr denominator must be positive");
  }
  const double d = a - b;
  return d * d / denom;
}

bool exact_recovery_impossible(std::int64_t k, std::int64_t s, double p,
                               double q) {
  if (k < 2 || s < 1 || s > k) {
    throw std::invalid_argument("require k >= 2 and 1 <= s <= k");
  }
  if (q > p) {
    throw std::invalid_argument("requires p >= q");
  }
  return std::sqrt(p) - std::sqrt(q) <
         std::sqrt(ln(static_cast<double>(k)) / static_cast<double>(s));
}

bool weak_recovery_possible_two_communities(std::int64_t k, double p,
                                            double q) {
  if (k < 2) {
    throw std::invalid_argument("require k >= 2");
  }
  const double d = p - q;
  return static_cast<double>(k) * d * d > 2.0 * (p + q);
}

std::string bound_report_to_json(const BoundReport& report) {
  nlohmann::json flags = nlohmann::json::object();
  for (const auto& [name, ok] : report.preconditions) {
    flags[name] = ok;
  }
  nlohmann::json j{{"name", report.name},
                   {"value", report.value},
                   {"prob", report.prob},
                   {"preconditions", flags},
                   {"applicable", report.applicable()},
                   {"notes", report.notes}};
  return j.dump();
}

}  // namespace sbcode
