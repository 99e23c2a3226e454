#include "medest/ustat_estimators.hpp"

#include <stdexcept>
#include <string>

#include "medest/errors.hpp"
#include "medest/mean_estimators.hpp"
#include "medest/numeric.hpp"

namespace medest {

namespace {

PairwiseEstimate blocks_ustat(const Sample& sample, const Kernel& h,
                              const BlockAssignment& blocks) {
  if (blocks.blocks.empty()) {
    throw std::invalid_argument("pairwise estimator: no blocks");
  }
  PairwiseEstimate out;
  out.K = blocks.blocks.size();
  out.B = blocks.blocks.front().size();
  if (out.B < 2) {
    throw insufficient_data("pairwise estimator: blocks need at least 2 points");
  }
  out.pairs_per_block = out.B * (out.B - 1) / 2;
  out.block_values.reserve(out.K);
  for (const auto& block : blocks.blocks) {
    out.block_values.push_back(complete_ustat_indices(sample, h, block));
  }
  out.value = median(out.block_values);
  return out;
}

}  // namespace

PairwiseEstimate mou(const Sample& sample, const Kernel& h, std::size_t K,
                     RngSeed seed) {
  const std::size_t n = sample.size();
  if (K == 0) throw std::invalid_argument("mou: require K >= 1");
  if (K > n || n / K < 2) {
    throw insufficient_data("mou: floor(n/K) must be at least 2");
  }
  return blocks_ustat(sample, h, partition_blocks(n, K, seed));
}

PairwiseEstimate mou_with_blocks(const Sample& sample, const Kernel& h,
                                 const BlockAssignment& blocks) {
  return blocks_ustat(sample, h, blocks);
}

PairwiseEstimate moru(const Sample& sample, const Kernel& h, std::size_t K,
                      std::size_t B, RngSeed seed) {
  if (B < 2) throw insufficient_data("moru: require B >= 2");
  return blocks_ustat(sample, h, swor_blocks(sample.size(), K, B, seed));
}

PairwiseEstimate mom_on_split_pairs(const Sample& sample, const Kernel& h,
                                    std::size_t K, RngSeed seed) {
  const std::size_t n = sample.size();
  if (n < 2) throw insufficient_data("mom_on_split_pairs: need at least 2 points");
  const std::size_t half = n / 2;
  if (K == 0 || K > half) {
    throw std::invalid_argument("mom_on_split_pairs: require 1 <= K <= floor(n/2)");
  }
  std::vector<double> values;
  values.reserve(half);
  for (std::size_t i = 0; i < half; ++i) {
    values.push_back(h(sample.obs(i), sample.obs(i + half)));
  }
  const MeanEstimate inner = mom(Sample(std::move(values)), K, seed);
  PairwiseEstimate out;
  out.value = inner.value;
  out.block_values = inner.block_values;
  out.K = inner.K;
  out.B = inner.B;
  out.pairs_per_block = inner.B;
  return out;
}

PairwiseEstimate moiu(const Sample& sample, const Kernel& h, std::size_t K,
                      std::size_t M, PairScheme scheme, RngSeed seed) {
  if (K == 0) throw std::invalid_argument("moiu: require K >= 1");
  PairwiseEstimate out;
  out.K = K;
  out.B = M;
  out.pairs_per_block = M;
  out.block_values.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const PairSubsample pairs = sample_pairs(sample.size(), M, scheme, seed.child(k));
    out.block_values.push_back(incomplete_ustat(sample, h, pairs));
  }
  out.value = median(out.block_values);
  return out;
}

namespace {

// Lexicographic enumeration of the d-subsets of a block.
class CombinationCursor {
 public:
  CombinationCursor(const std::vector<std::size_t>& block, std::size_t d)
      : block_(block), pos_(d) {
    for (std::size_t t = 0; t < d; ++t) pos_[t] = t;
  }

  void fill(std::vector<std::size_t>& out, std::size_t offset) const {
    for (std::size_t t = 0; t < pos_.size(); ++t) out[offset + t] = block_[pos_[t]];
  }

  bool advance() {
    const std::size_t d = pos_.size();
    const std::size_t n = block_.size();
    std::size_t t = d;
    while (t > 0) {
      --t;
      if (pos_[t] + (d - t) < n) {
        ++pos_[t];
        for (std::size_t u = t + 1; u < d; ++u) pos_[u] = pos_[u - 1] + 1;
        return true;
      }
    }
    for (std::size_t u = 0; u < d; ++u) pos_[u] = u;
    return false;
  }

 private:
  const std::vector<std::size_t>& block_;
  std::vector<std::size_t> pos_;
};

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t t = 0; t < k; ++t) {
    r *= static_cast<double>(n - t) / static_cast<double>(t + 1);
  }
  return r;
}

}  // namespace

PairwiseEstimate mogu(const MultiSampleSpec& spec, std::size_t K,
                      bool randomized, std::span<const std::size_t> block_sizes,
                      RngSeed seed, std::size_t tuple_cap) {
  const std::size_t T = spec.samples.size();
  if (T == 0) throw std::invalid_argument("mogu: no samples");
  if (spec.degrees.size() != T) {
    throw std::invalid_argument("mogu: degrees must match samples");
  }
  if (K == 0) throw std::invalid_argument("mogu: require K >= 1");

  std::vector<BlockAssignment> assignments;
  assignments.reserve(T);
  double tuples_per_block = 1.0;
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t n_t = spec.samples[t].size();
    const std::size_t d_t = spec.degrees[t];
    if (d_t == 0) throw std::invalid_argument("mogu: degrees must be >= 1");
    std::size_t B_t;
    if (randomized) {
      if (block_sizes.size() != T) {
        throw std::invalid_argument("mogu: randomized mode needs one block size per sample");
      }
      B_t = block_sizes[t];
      if (B_t > n_t) throw std::invalid_argument("mogu: block size exceeds sample size");
    } else {
      if (K > n_t) throw insufficient_data("mogu: more blocks than observations");
      B_t = n_t / K;
    }
    if (B_t < d_t) {
      throw insufficient_data("mogu: degree " + std::to_string(d_t) +
                              " exceeds block size " + std::to_string(B_t));
    }
    tuples_per_block *= binomial(B_t, d_t);
    assignments.push_back(randomized
                              ? swor_blocks(n_t, K, B_t, seed.child(t))
                              : partition_blocks(n_t, K, seed.child(t)));
  }
  if (tuples_per_block > static_cast<double>(tuple_cap)) {
    throw std::runtime_error(
        "mogu: tuple enumeration exceeds the cap (" +
        std::to_string(static_cast<unsigned long long>(tuples_per_block)) + " > " +
        std::to_string(tuple_cap) + "); reduce block sizes or raise tuple_cap");
  }

  std::size_t total_degree = 0;
  for (std::size_t d : spec.degrees) total_degree += d;

  PairwiseEstimate out;
  out.K = K;
  out.B = assignments.front().blocks.front().size();
  out.pairs_per_block = static_cast<std::size_t>(tuples_per_block);
  out.block_values.reserve(K);

  std::vector<std::size_t> flat(total_degree);
  std::vector<Obs> args(total_degree);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<CombinationCursor> cursors;
    cursors.reserve(T);
    std::vector<std::size_t> offsets(T);
    std::size_t off = 0;
    for (std::size_t t = 0; t < T; ++t) {
      cursors.emplace_back(assignments[t].blocks[k], spec.degrees[t]);
      offsets[t] = off;
      off += spec.degrees[t];
    }
    CompensatedSum acc;
    for (;;) {
      for (std::size_t t = 0; t < T; ++t) cursors[t].fill(flat, offsets[t]);
      std::size_t pos = 0;
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t u = 0; u < spec.degrees[t]; ++u, ++pos) {
          args[pos] = spec.samples[t].obs(flat[pos]);
        }
      }
      acc.add(spec.kernel(args));
      // Odometer over the per-sample combination cursors, last sample fastest.
      std::size_t t = T;
      bool carried = true;
      while (t > 0 && carried) {
        --t;
        carried = !cursors[t].advance();
      }
      if (carried) break;
    }
    out.block_values.push_back(acc.value() / tuples_per_block);
  }
  out.value = median(out.block_values);
  return out;
}

}  // namespace medest
