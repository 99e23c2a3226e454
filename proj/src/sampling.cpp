#include "medest/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace medest {

namespace {

// Partial Fisher-Yates over 0..n-1: after B swaps the first B slots are a
// uniform without-replacement draw. The overlay is a version-stamped buffer
// (slot i holds a permuted value only while its stamp is current), so repeated
// draws cost O(B) with no per-draw allocation beyond the output.
std::vector<std::size_t> swor_draw(std::size_t n, std::size_t B, Rng& g) {
  thread_local std::vector<std::size_t> value;
  thread_local std::vector<std::uint64_t> stamp;
  thread_local std::uint64_t version = 0;
  if (value.size() < n) {
    value.resize(n);
    stamp.resize(n, 0);
  }
  ++version;
  auto at = [&](std::size_t i) { return stamp[i] == version ? value[i] : i; };
  std::vector<std::size_t> out(B);
  for (std::size_t t = 0; t < B; ++t) {
    const std::size_t j = t + static_cast<std::size_t>(g.below(n - t));
    const std::size_t vt = at(t);
    out[t] = at(j);
    stamp[j] = version;
    value[j] = vt;
  }
  return out;
}

}  // namespace

BlockAssignment partition_blocks(std::size_t n, std::size_t K, RngSeed seed) {
  if (K == 0 || K > n) {
    throw std::invalid_argument("partition_blocks: require 1 <= K <= n");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng g = seed.stream();
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const std::size_t j = t + static_cast<std::size_t>(g.below(n - t));
    std::swap(perm[t], perm[j]);
  }
  const std::size_t B = n / K;
  BlockAssignment out{n, BlockScheme::Partition, {}};
  out.blocks.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.blocks.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(k * B),
                            perm.begin() + static_cast<std::ptrdiff_t>((k + 1) * B));
  }
  return out;
}

BlockAssignment swor_blocks(std::size_t n, std::size_t K, std::size_t B,
                            RngSeed seed) {
  if (B == 0 || B > n) {
    throw std::invalid_argument("swor_blocks: require 1 <= B <= n");
  }
  if (K == 0) throw std::invalid_argument("swor_blocks: require K >= 1");
  BlockAssignment out{n, BlockScheme::SWoR, {}};
  out.blocks.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    Rng g = seed.child(k).stream();
    out.blocks.push_back(swor_draw(n, B, g));
  }
  return out;
}

BlockAssignment mc_blocks(std::size_t n, std::size_t K, std::size_t B,
                          RngSeed seed) {
  if (n == 0) throw std::invalid_argument("mc_blocks: require n >= 1");
  if (K == 0 || B == 0) {
    throw std::invalid_argument("mc_blocks: require K >= 1 and B >= 1");
  }
  BlockAssignment out{n, BlockScheme::WithReplacement, {}};
  out.blocks.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    Rng g = seed.child(k).stream();
    std::vector<std::size_t> block(B);
    for (auto& idx : block) idx = static_cast<std::size_t>(g.below(n));
    out.blocks.push_back(std::move(block));
  }
  return out;
}

namespace {

// Lexicographic rank <-> pair bijection over Lambda.
std::pair<std::size_t, std::size_t> unrank_pair(std::size_t n, std::uint64_t L) {
  // Row i starts at offset i*(2n-i-1)/2; find i by a guarded search seeded
  // with the closed-form root, then offset within the row.
  const double nd = static_cast<double>(n);
  const double Ld = static_cast<double>(L);
  double guess = nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * Ld);
  std::size_t i = guess <= 0.0 ? 0 : static_cast<std::size_t>(guess);
  if (i >= n - 1) i = n - 2;
  auto row_start = [&](std::size_t r) {
    return static_cast<std::uint64_t>(r) * (2 * n - r - 1) / 2;
  };
  while (i > 0 && row_start(i) > L) --i;
  while (i + 2 < n && row_start(i + 1) <= L) ++i;
  const std::size_t j = i + 1 + static_cast<std::size_t>(L - row_start(i));
  return {i, j};
}

}  // namespace

PairSubsample sample_pairs(std::size_t n, std::size_t M, PairScheme scheme,
                           RngSeed seed) {
  if (n < 2) throw std::invalid_argument("sample_pairs: require n >= 2");
  if (M == 0) throw std::invalid_argument("sample_pairs: require M >= 1");
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  PairSubsample out{n, scheme, {}};
  out.pairs.reserve(M);
  Rng g = seed.stream();
  if (scheme == PairScheme::WithReplacement) {
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t a = static_cast<std::size_t>(g.below(n));
      std::size_t b = static_cast<std::size_t>(g.below(n - 1));
      if (b >= a) ++b;
      out.pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
  } else {
    if (static_cast<std::uint64_t>(M) > total) {
      throw std::invalid_argument(
          "sample_pairs: M exceeds |Lambda| = n(n-1)/2 without replacement");
    }
    std::unordered_map<std::uint64_t, std::uint64_t> overlay;
    overlay.reserve(2 * M);
    auto at = [&](std::uint64_t i) {
      auto it = overlay.find(i);
      return it == overlay.end() ? i : it->second;
    };
    for (std::size_t t = 0; t < M; ++t) {
      const std::uint64_t j = t + g.below(total - t);
      const std::uint64_t vt = at(t);
      const std::uint64_t vj = at(j);
      overlay[j] = vt;
      out.pairs.push_back(unrank_pair(n, vj));
    }
  }
  return out;
}

PairSubsample all_pairs(std::size_t n) {
  if (n < 2) throw std::invalid_argument("all_pairs: require n >= 2");
  PairSubsample out{n, PairScheme::WithoutReplacement, {}};
  out.pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.pairs.emplace_back(i, j);
  }
  return out;
}

}  // namespace medest
