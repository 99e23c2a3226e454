#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "medest/rng.hpp"

namespace medest {

enum class BlockScheme { Partition, SWoR, WithReplacement };

// K index blocks over a sample of size n. Partition blocks are disjoint;
// SWoR blocks have distinct indices within a block but may overlap across
// blocks; with-replacement blocks may repeat indices anywhere.
struct BlockAssignment {
  std::size_t n = 0;
  BlockScheme scheme = BlockScheme::Partition;
  std::vector<std::vector<std::size_t>> blocks;
};

// K disjoint blocks of size floor(n/K) over a uniformly random permutation of
// 0..n-1; the trailing n mod K indices are unused.
BlockAssignment partition_blocks(std::size_t n, std::size_t K, RngSeed seed);

// K independent simple-random-samples-without-replacement of size B; each
// block is uniform over the (n choose B) subsets. Block k draws from
// seed.child(k), so blocks are reproducible independent of evaluation order.
BlockAssignment swor_blocks(std::size_t n, std::size_t K, std::size_t B,
                            RngSeed seed);

// K independent with-replacement draws of size B (B may exceed n).
BlockAssignment mc_blocks(std::size_t n, std::size_t K, std::size_t B,
                          RngSeed seed);

enum class PairScheme { WithReplacement, WithoutReplacement };

// M pairs from Lambda = {(i,j): 0 <= i < j < n}.
struct PairSubsample {
  std::size_t n = 0;
  PairScheme scheme = PairScheme::WithReplacement;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

PairSubsample sample_pairs(std::size_t n, std::size_t M, PairScheme scheme,
                           RngSeed seed);

// The full pair set Lambda in lexicographic order.
PairSubsample all_pairs(std::size_t n);

}  // namespace medest
