#pragma once

#include <cstdint>
#include <vector>

#include "sbcode/codes.hpp"

namespace sbcode {

// The sorted set T of r non-straggler worker indices.
struct StragglerPattern {
  std::int64_t k = 0;
  std::vector<std::int64_t> non_stragglers;

  std::int64_t r() const {
    return static_cast<std::int64_t>(non_stragglers.size());
  }
  void validate() const;
};

// Contiguous blocks S_1..S_m covering {0..k-1}; the last block is shorter
// when s does not divide k.
struct BlockPartition {
  std::int64_t k = 0;
  std::int64_t s = 0;
  std::vector<std::vector<std::int64_t>> blocks;

  static BlockPartition make(std::int64_t k, std::int64_t s);
};

// The view an adversary gets: rows and columns of the original matrix
// relabeled by a hidden permutation. view[i][j] = original[perm[i]][perm[j]],
// so view column j is original column perm[j].
struct PermutedCode {
  AssignmentMatrix matrix;             // permuted view
  std::vector<std::int64_t> perm;      // view index -> original index; hidden
};

PermutedCode make_permuted_code(const AssignmentMatrix& original,
                                std::uint64_t seed);

// Uniform over all C(k, r) subsets; deterministic per seed.
StragglerPattern sample_random_nonstragglers(std::int64_t k, std::int64_t r,
                                             std::uint64_t seed);

// Straggles the first (k-r)/s whole blocks. Requires (k-r) to be a block
// multiple; callers round r themselves.
StragglerPattern frc_block_attack(const BlockPartition& partition,
                                  std::int64_t r);

// Exhaustive maximizer of err(v_opt) over all C(k, r) patterns; guarded at
// C(k, r) <= 10^6. Ties resolve to the lexicographically smallest T.
StragglerPattern bruteforce_attack(const AssignmentMatrix& g, std::int64_t r);

// Removes k-r indices one at a time, each time the one whose removal
// maximizes err(v_opt); ties resolve to the smallest index.
StragglerPattern greedy_attack(const AssignmentMatrix& g, std::int64_t r);

// Clusters the columns of the permuted view into block_count groups by
// spectral embedding of G^T G and k-means, then straggles whole recovered
// groups largest-cohesion first, filling any remainder from the next group's
// lowest indices. Does not look at pg.perm.
StragglerPattern spectral_community_attack(const PermutedCode& pg,
                                           std::int64_t r);

// The recovered column groups the spectral attack works from, exposed so the
// clustering can be checked against a known partition.
std::vector<std::vector<std::int64_t>> spectral_column_groups(
    const Matrix& g, std::int64_t n_groups);

// T_i = S_i intersect T for every block.
std::vector<std::vector<std::int64_t>> intersect_blocks(
    const StragglerPattern& t, const BlockPartition& partition);

}  // namespace sbcode
