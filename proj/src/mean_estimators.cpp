#include "medest/mean_estimators.hpp"

#include <stdexcept>

namespace medest {

namespace {

MeanEstimate from_blocks(const Sample& sample, const BlockAssignment& blocks) {
  if (!sample.is_scalar()) {
    throw std::invalid_argument("mean estimators expect scalar observations");
  }
  if (blocks.blocks.empty()) {
    throw std::invalid_argument("mean estimator: no blocks");
  }
  MeanEstimate out;
  out.scheme = blocks.scheme;
  out.K = blocks.blocks.size();
  out.B = blocks.blocks.front().size();
  out.block_values.reserve(out.K);
  std::vector<double> buf;
  for (const auto& block : blocks.blocks) {
    if (block.empty()) throw std::invalid_argument("mean estimator: empty block");
    buf.clear();
    buf.reserve(block.size());
    for (std::size_t idx : block) {
      if (idx >= sample.size()) {
        throw std::invalid_argument("mean estimator: block index out of range");
      }
      buf.push_back(sample.scalar(idx));
    }
    out.block_values.push_back(pairwise_sum(buf) / static_cast<double>(buf.size()));
  }
  out.value = median(out.block_values);
  return out;
}

}  // namespace

MeanEstimate mom(const Sample& sample, std::size_t K, RngSeed seed) {
  return from_blocks(sample, partition_blocks(sample.size(), K, seed));
}

MeanEstimate mom_with_blocks(const Sample& sample, const BlockAssignment& blocks) {
  return from_blocks(sample, blocks);
}

MeanEstimate morm(const Sample& sample, std::size_t K, std::size_t B,
                  BlockScheme scheme, RngSeed seed) {
  switch (scheme) {
    case BlockScheme::SWoR:
      return from_blocks(sample, swor_blocks(sample.size(), K, B, seed));
    case BlockScheme::WithReplacement:
      return from_blocks(sample, mc_blocks(sample.size(), K, B, seed));
    case BlockScheme::Partition:
      break;
  }
  throw std::invalid_argument("morm: scheme must be SWoR or WithReplacement");
}

}  // namespace medest
