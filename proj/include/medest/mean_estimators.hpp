#pragma once

#include <cstddef>
#include <vector>

#include "medest/numeric.hpp"
#include "medest/rng.hpp"
#include "medest/sample.hpp"
#include "medest/sampling.hpp"

namespace medest {

struct MeanEstimate {
  double value = 0.0;
  std::vector<double> block_values;
  BlockScheme scheme = BlockScheme::Partition;
  std::size_t K = 0;
  std::size_t B = 0;
};

// Median-of-Means: partition into K blocks of size floor(n/K), take the
// median of the block means. Scalar samples only.
MeanEstimate mom(const Sample& sample, std::size_t K, RngSeed seed);

// Same estimator over caller-supplied blocks (used by tests and by the
// split-pairs pairwise baseline).
MeanEstimate mom_with_blocks(const Sample& sample, const BlockAssignment& blocks);

// Median-of-Randomized-Means: K blocks of size B drawn without replacement
// (SWoR) or with replacement (WithReplacement), median of block means.
MeanEstimate morm(const Sample& sample, std::size_t K, std::size_t B,
                  BlockScheme scheme, RngSeed seed);

}  // namespace medest
