#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "medest/kernels.hpp"
#include "medest/rng.hpp"
#include "medest/sample.hpp"
#include "medest/sampling.hpp"

namespace medest {

struct PairwiseEstimate {
  double value = 0.0;
  std::vector<double> block_values;
  // B(B-1)/2 for MoU/MoRU, M for MoIU, the per-block tuple count for MoGU.
  std::size_t pairs_per_block = 0;
  std::size_t K = 0;
  std::size_t B = 0;  // holds M for MoIU
};

// Median of U-statistics: partition into K blocks of size B = floor(n/K),
// per-block complete U-statistic, median.
PairwiseEstimate mou(const Sample& sample, const Kernel& h, std::size_t K,
                     RngSeed seed);

PairwiseEstimate mou_with_blocks(const Sample& sample, const Kernel& h,
                                 const BlockAssignment& blocks);

// Median of Randomized U-statistics: K SWoR blocks of size B >= 2; each
// block value is the complete U-statistic over the block's B elements (the
// 1/(B(B-1)) display normalization read as an average over ordered pairs,
// which makes the block value conditionally unbiased for U_n).
PairwiseEstimate moru(const Sample& sample, const Kernel& h, std::size_t K,
                      std::size_t B, RngSeed seed);

// MoM applied to the floor(n/2) i.i.d. values h(X_i, X_{i+floor(n/2)}).
PairwiseEstimate mom_on_split_pairs(const Sample& sample, const Kernel& h,
                                    std::size_t K, RngSeed seed);

// Median of Incomplete U-statistics: K independent pair subsamples of size M
// (with or without replacement in the pair set), median of the incomplete
// U-statistics. No concentration bound is claimed for this estimator.
PairwiseEstimate moiu(const Sample& sample, const Kernel& h, std::size_t K,
                      std::size_t M, PairScheme scheme, RngSeed seed);

// A T-sample generalized U-statistic problem: kernel of d_1 + ... + d_T
// observations (arguments grouped per sample, symmetric within each group).
struct MultiSampleSpec {
  std::vector<Sample> samples;
  std::vector<std::size_t> degrees;
  std::function<double(std::span<const Obs>)> kernel;
};

// Median of Generalized U-statistics. randomized=false partitions every
// sample into K blocks (sizes floor(n_t/K)); randomized=true draws K SWoR
// blocks of the given per-sample sizes. Each block value enumerates all
// prod_t (B_t choose d_t) index tuples; enumeration is guarded by tuple_cap.
PairwiseEstimate mogu(const MultiSampleSpec& spec, std::size_t K,
                      bool randomized, std::span<const std::size_t> block_sizes,
                      RngSeed seed, std::size_t tuple_cap = 10000000);

}  // namespace medest
