#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sbcode {

// A closed-form bound on err(v) together with the hypotheses it needs.
// Values are always computed; when a hypothesis fails the report is merely
// flagged inapplicable so bound curves can still be plotted across regimes.
// All logarithms are natural.
struct BoundReport {
  std::string name;
  double value = 0.0;
  double prob = 0.0;  // the bound holds with at least this probability
  std::vector<std::pair<std::string, bool>> preconditions;
  std::string notes;

  bool applicable() const;
};

// P(all blocks have a survivor) >= 1 - (k/s) C(k-s, r)/C(k, r), evaluated
// with exact log-binomials; 1 when r > k-s.
double lemma1_nonempty_prob_bound(std::int64_t k, std::int64_t s,
                                  std::int64_t r);

// The looser 1 - (k/s)((k-s)/k)^r form used on the way to lemma2_condition.
double lemma1_nonempty_prob_bound_relaxed(std::int64_t k, std::int64_t s,
                                          std::int64_t r);

// s >= 2 ln(k) k / r, under which P(all blocks hit) >= 1 - 1/k.
bool lemma2_condition(std::int64_t k, std::int64_t s, std::int64_t r);

// err <= 14 sqrt(ln(k) gamma / s) * max{k((1-p) + gamma/s), 3 ln(k)} with
// probability 1 - 4/k, for q = gamma/k.
BoundReport theorem1_bound(std::int64_t k, std::int64_t s, double p,
                           double gamma,
                           std::optional<std::int64_t> r = std::nullopt);

// Regime where theorem1's max-term collapses to 3 ln(k): needs the block
// survival condition and gamma <= 3 ln(k) s / k.
bool corollary1_applicable(std::int64_t k, std::int64_t s, std::int64_t r,
                           double gamma);

// err <= (16 ln(k) s^2 / (k q^2)) ((1-p)p + (k/s-1)(1-q)q) with probability
// 1 - 2/k.
BoundReport theorem2_bound(std::int64_t k, std::int64_t s, double p, double q,
                           std::optional<std::int64_t> r = std::nullopt);

// The general form with the actual decoding scale:
// err <= (16 k ln(k) / beta^2) ((1-p)p + (k/s-1)(1-q)q).
BoundReport theorem_ref_bound(std::int64_t k, std::int64_t s, double p,
                              double q,
                              std::optional<std::int64_t> r = std::nullopt);

// BGC specialization: err <= 16 ln(k) s (1-p) / p with probability 1 - 2/k.
BoundReport corollary2_bound(std::int64_t k, std::int64_t s, double p,
                             std::optional<std::int64_t> r = std::nullopt);

// High-probability bound on ||G v - 1_k||_inf: 7 sqrt(ln(k) gamma / s).
double lemma3_linf_bound(std::int64_t k, std::int64_t s, double gamma);

// (a-b)^2 / (m (a + (m-1) b)) for an m-community model with p=a/k, q=b/k.
double snr(double a, double b, std::int64_t m);

// True iff sqrt(p) - sqrt(q) < sqrt(ln(k)/s): no algorithm recovers the
// block structure exactly.
bool exact_recovery_impossible(std::int64_t k, std::int64_t s, double p,
                               double q);

// Two-community weak recovery condition k(p-q)^2 > 2(p+q).
bool weak_recovery_possible_two_communities(std::int64_t k, double p,
                                            double q);

// {name, value, prob, preconditions: {...}, notes}
std::string bound_report_to_json(const BoundReport& report);

}  // namespace sbcode
