#include "sbcode/stragglers.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sbcode/decoding.hpp"
#include "sbcode/errors.hpp"
#include "sbcode/rng.hpp"

namespace sbcode {

void StragglerPattern::validate() const {
  if (k < 1) {
    throw std::invalid_argument("pattern k must be >= 1");
  }
  if (non_stragglers.empty()) {
    throw std::invalid_argument("non-straggler set must not be empty");
  }
  std::int64_t prev = -1;
  for (std::int64_t i : non_stragglers) {
    if (i < 0 || i >= k) {
      throw std::invalid_argument("non-straggler index out of range");
    }
    if (i <= prev) {
      throw std::invalid_argument("non-straggler indices must be strictly "
                                  "increasing");
    }
    prev = i;
  }
}

BlockPartition BlockPartition::make(std::int64_t k, std::int64_t s) {
  if (k < 1 || s < 1 || s > k) {
    throw std::invalid_argument("block partition requires 1 <= s <= k");
  }
  BlockPartition part{k, s, {}};
  for (std::int64_t lo = 0; lo < k; lo += s) {
    const std::int64_t hi = std::min(lo + s, k);
    std::vector<std::int64_t> block;
    block.reserve(static_cast<std::size_t>(hi - lo));
    for (std::int64_t i = lo; i < hi; ++i) {
      block.push_back(i);
    }
    part.blocks.push_back(std::move(block));
  }
  return part;
}

PermutedCode make_permuted_code(const AssignmentMatrix& original,
                                std::uint64_t seed) {
  const std::int64_t k = original.spec.k;
  std::vector<std::int64_t> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 rng(seed_chain(seed, kStreamPermutation));
  for (std::int64_t i = 0; i < k - 1; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(
                rng.next_below(static_cast<std::uint64_t>(k - i)));
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(j)]);
  }
  PermutedCode out{original, perm};
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t j = 0; j < k; ++j) {
      out.matrix.g.at(i, j) =
          original.g.at(perm[static_cast<std::size_t>(i)],
                        perm[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

StragglerPattern sample_random_nonstragglers(std::int64_t k, std::int64_t r,
                                             std::uint64_t seed) {
  if (r < 1 || r > k) {
    throw std::invalid_argument("r must satisfy 1 <= r <= k, got r=" +
                                std::to_string(r) + " k=" + std::to_string(k));
  }
  std::vector<std::int64_t> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  SplitMix64 rng(seed_chain(seed, kStreamStragglers));
  for (std::int64_t i = 0; i < r; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(
                rng.next_below(static_cast<std::uint64_t>(k - i)));
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(r));
  std::sort(idx.begin(), idx.end());
  return StragglerPattern{k, std::move(idx)};
}

StragglerPattern frc_block_attack(const BlockPartition& partition,
                                  std::int64_t r) {
  const std::int64_t k = partition.k;
  if (r < 1 || r > k) {
    throw std::invalid_argument("r must satisfy 1 <= r <= k");
  }
  if ((k - r) % partition.s != 0) {
    throw std::invalid_argument(
        "block attack needs k - r to be a multiple of s (k-r=" +
        std::to_string(k - r) + ", s=" + std::to_string(partition.s) + ")");
  }
  std::vector<std::int64_t> t;
  t.reserve(static_cast<std::size_t>(r));
  for (std::int64_t i = k - r; i < k; ++i) {
    t.push_back(i);
  }
  return StragglerPattern{k, std::move(t)};
}

namespace {

double optimal_err(const AssignmentMatrix& g, const StragglerPattern& t) {
  return err(g, optimal_decode(g, t));
}

// Scores within this tolerance count as tied, so least-squares rounding
// noise cannot override the deterministic tie-breaks.
constexpr double kScoreTie = 1e-9;

bool combinations_exceed(std::int64_t k, std::int64_t r, double limit) {
  double c = 1.0;
  const std::int64_t m = std::min(r, k - r);
  for (std::int64_t i = 1; i <= m; ++i) {
    c *= static_cast<double>(k - m + i) / static_cast<double>(i);
    if (c > limit) {
      return true;
    }
  }
  return false;
}

}  // namespace

StragglerPattern bruteforce_attack(const AssignmentMatrix& g, std::int64_t r) {
  const std::int64_t k = g.spec.k;
  if (r < 1 || r > k) {
    throw std::invalid_argument("r must satisfy 1 <= r <= k");
  }
  if (combinations_exceed(k, r, 1e6)) {
    throw ResourceLimitError("bruteforce_attack guard: C(" +
                             std::to_string(k) + ", " + std::to_string(r) +
                             ") exceeds 10^6 candidate patterns");
  }

  // Lexicographic enumeration with a strict improvement test keeps the
  // lexicographically smallest maximizer on ties.
  std::vector<std::int64_t> combo(static_cast<std::size_t>(r));
  std::iota(combo.begin(), combo.end(), 0);
  std::vector<std::int64_t> best = combo;
  double best_err = -1.0;
  while (true) {
    StragglerPattern cand{k, combo};
    const double e = optimal_err(g, cand);
    if (e > best_err + kScoreTie) {
      best_err = e;
      best = combo;
    }
    // advance to the next combination
    std::int64_t i = r - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == k - r + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++combo[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < r; ++j) {
      combo[static_cast<std::size_t>(j)] =
          combo[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return StragglerPattern{k, std::move(best)};
}

StragglerPattern greedy_attack(const AssignmentMatrix& g, std::int64_t r) {
  const std::int64_t k = g.spec.k;
  if (r < 1 || r > k) {
    throw std::invalid_argument("r must satisfy 1 <= r <= k");
  }
  std::vector<std::int64_t> t(static_cast<std::size_t>(k));
  std::iota(t.begin(), t.end(), 0);
  for (std::int64_t step = 0; step < k - r; ++step) {
    double best_err = -1.0;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      std::vector<std::int64_t> reduced;
      reduced.reserve(t.size() - 1);
      for (std::size_t q = 0; q < t.size(); ++q) {
        if (q != pos) {
          reduced.push_back(t[q]);
        }
      }
      const double e = optimal_err(g, StragglerPattern{k, std::move(reduced)});
      if (e > best_err + kScoreTie) {
        best_err = e;
        best_pos = pos;
      }
    }
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return StragglerPattern{k, std::move(t)};
}

namespace {

struct KMeansOutcome {
  std::vector<int> assignment;
  double sse = std::numeric_limits<double>::infinity();
};

double sq_dist(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& centroids,
               Eigen::Index point, Eigen::Index centroid) {
  return (pts.row(point) - centroids.row(centroid)).squaredNorm();
}

KMeansOutcome lloyd_once(const Eigen::MatrixXd& pts, std::int64_t n_groups,
                         SplitMix64& rng) {
  const Eigen::Index n = pts.rows();
  const Eigen::Index dim = pts.cols();
  const Eigen::Index g = static_cast<Eigen::Index>(n_groups);

  // k-means++ seeding
  Eigen::MatrixXd centroids(g, dim);
  centroids.row(0) =
      pts.row(static_cast<Eigen::Index>(rng.next_below(
          static_cast<std::uint64_t>(n))));
  std::vector<double> min_d2(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index c = 1; c < g; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = (pts.row(i) - centroids.row(0)).squaredNorm();
      for (Eigen::Index cc = 1; cc < c; ++cc) {
        d = std::min(d, sq_dist(pts, centroids, i, cc));
      }
      min_d2[static_cast<std::size_t>(i)] = d;
      total += d;
    }
    Eigen::Index pick;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(
          rng.next_below(static_cast<std::uint64_t>(n)));
    } else {
      const double target = rng.next_unit() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += min_d2[static_cast<std::size_t>(i)];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = pts.row(pick);
  }

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(pts, centroids, i, 0);
      for (Eigen::Index c = 1; c < g; ++c) {
        const double d = sq_dist(pts, centroids, i, c);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) {
      break;
    }
    centroids.setZero();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(g), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = assign[static_cast<std::size_t>(i)];
      centroids.row(c) += pts.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < g; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) /=
            static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
    // give an empty cluster the point farthest from its centroid
    for (Eigen::Index c = 0; c < g; ++c) {
      if (counts[static_cast<std::size_t>(c)] != 0) {
        continue;
      }
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int ci = assign[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(ci)] <= 1) {
          continue;
        }
        const double d =
            sq_dist(pts, centroids, i, static_cast<Eigen::Index>(ci));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d >= 0.0) {
        --counts[static_cast<std::size_t>(
            assign[static_cast<std::size_t>(far)])];
        assign[static_cast<std::size_t>(far)] = static_cast<int>(c);
        counts[static_cast<std::size_t>(c)] = 1;
        centroids.row(c) = pts.row(far);
      }
    }
  }

  KMeansOutcome out;
  out.assignment = assign;
  out.sse = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.sse += sq_dist(pts, centroids, i,
                       static_cast<Eigen::Index>(
                           assign[static_cast<std::size_t>(i)]));
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::int64_t>> spectral_column_groups(
    const Matrix& g, std::int64_t n_groups) {
  if (n_groups < 1 || n_groups > g.cols) {
    throw std::invalid_argument("n_groups must lie in [1, cols]");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(g.cols);
  Eigen::MatrixXd gm(g.rows, g.cols);
  for (std::int64_t i = 0; i < g.rows; ++i) {
    for (std::int64_t j = 0; j < g.cols; ++j) {
      gm(i, j) = g.at(i, j);
    }
  }
  Eigen::MatrixXd co = gm.transpose() * gm;
  co = 0.5 * (co + co.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(co);
  // eigenvalues come out ascending; the embedding uses the top n_groups
  Eigen::MatrixXd embed =
      eig.eigenvectors().rightCols(static_cast<Eigen::Index>(n_groups));

  SplitMix64 rng(0x5bc0de5eedULL);
  KMeansOutcome best;
  for (int restart = 0; restart < 20; ++restart) {
    KMeansOutcome cand = lloyd_once(embed, n_groups, rng);
    if (cand.sse < best.sse) {
      best = cand;
    }
  }

  std::vector<std::vector<std::int64_t>> groups(
      static_cast<std::size_t>(n_groups));
  for (Eigen::Index i = 0; i < k; ++i) {
    groups[static_cast<std::size_t>(best.assignment[static_cast<std::size_t>(
        i)])].push_back(static_cast<std::int64_t>(i));
  }
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& c) { return c.empty(); }),
               groups.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

StragglerPattern spectral_community_attack(const PermutedCode& pg,
                                           std::int64_t r) {
  const std::int64_t k = pg.matrix.spec.k;
  if (r < 1 || r > k) {
    throw std::invalid_argument("r must satisfy 1 <= r <= k");
  }
  const std::int64_t n_groups = pg.matrix.spec.block_count();
  auto groups = spectral_column_groups(pg.matrix.g, n_groups);

  // cohesion: mean pairwise co-occurrence within the group
  const Matrix& g = pg.matrix.g;
  Eigen::MatrixXd gm(g.rows, g.cols);
  for (std::int64_t i = 0; i < g.rows; ++i) {
    for (std::int64_t j = 0; j < g.cols; ++j) {
      gm(i, j) = g.at(i, j);
    }
  }
  Eigen::MatrixXd co = gm.transpose() * gm;
  std::vector<double> cohesion(groups.size(), 0.0);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    const auto& members = groups[c];
    if (members.size() < 2) {
      continue;
    }
    double acc = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (a != b) {
          acc += co(static_cast<Eigen::Index>(members[a]),
                    static_cast<Eigen::Index>(members[b]));
        }
      }
    }
    cohesion[c] = acc / static_cast<double>(members.size() *
                                            (members.size() - 1));
  }

  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cohesion[a] != cohesion[b]) {
      return cohesion[a] > cohesion[b];
    }
    return groups[a].front() < groups[b].front();
  });

  // whole recovered groups first, then the remainder from the next group's
  // lowest indices
  std::vector<char> straggled(static_cast<std::size_t>(k), 0);
  std::int64_t budget = k - r;
  for (std::size_t oi = 0; oi < order.size() && budget > 0; ++oi) {
    const auto& members = groups[order[oi]];
    if (static_cast<std::int64_t>(members.size()) <= budget) {
      for (std::int64_t m : members) {
        straggled[static_cast<std::size_t>(m)] = 1;
      }
      budget -= static_cast<std::int64_t>(members.size());
    } else {
      for (std::int64_t i = 0; i < budget; ++i) {
        straggled[static_cast<std::size_t>(members[static_cast<std::size_t>(
            i)])] = 1;
      }
      budget = 0;
    }
  }

  std::vector<std::int64_t> t;
  t.reserve(static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i < k; ++i) {
    if (!straggled[static_cast<std::size_t>(i)]) {
      t.push_back(i);
    }
  }
  return StragglerPattern{k, std::move(t)};
}

std::vector<std::vector<std::int64_t>> intersect_blocks(
    const StragglerPattern& t, const BlockPartition& partition) {
  if (t.k != partition.k) {
    throw std::invalid_argument("pattern and partition disagree on k");
  }
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(partition.blocks.size());
  for (const auto& block : partition.blocks) {
    std::vector<std::int64_t> ti;
    std::set_intersection(block.begin(), block.end(),
                          t.non_stragglers.begin(), t.non_stragglers.end(),
                          std::back_inserter(ti));
    out.push_back(std::move(ti));
  }
  return out;
}

}  // namespace sbcode
