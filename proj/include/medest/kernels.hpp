#pragma once

#include <functional>
#include <span>
#include <string>

#include "medest/sample.hpp"
#include "medest/sampling.hpp"

namespace medest {

// A symmetric pairwise kernel h(x, y).
struct Kernel {
  std::string name;
  std::function<double(Obs, Obs)> f;

  double operator()(Obs a, Obs b) const { return f(a, b); }
};

// h(x, y) = |x - y|^2 / 2 (squared Euclidean distance on vectors).
Kernel variance_kernel();

// h(x, y) = D(x, y) * 1{cell(x) == cell(y)} — the within-cell dispersion term
// of an empirical clustering risk.
Kernel clustering_kernel(std::function<double(Obs, Obs)> metric,
                         std::function<int(Obs)> cell);

// Pairwise ranking loss on labeled observations (features..., label): the
// last coordinate is the label y, the rest is the feature vector. rule must
// be anti-symmetric in its arguments so the kernel is symmetric.
Kernel ranking_kernel(std::function<double(Obs, Obs)> rule,
                      std::function<double(double)> loss);

// (2 / (n(n-1))) * sum_{i<j} h(X_i, X_j) over all pairs, compensated.
double complete_ustat(const Sample& sample, const Kernel& h);

// Same statistic restricted to the given indices (a block); indices need not
// be sorted and must be distinct.
double complete_ustat_indices(const Sample& sample, const Kernel& h,
                              std::span<const std::size_t> idx);

// (1 / floor(n/2)) * sum_i h(X_i, X_{i + floor(n/2)}): the mean of h over
// floor(n/2) disjoint pairs, an i.i.d.-mean baseline for theta(h).
double split_pairs_estimate(const Sample& sample, const Kernel& h);

// (1/M) * sum_m h(X_{i_m}, X_{j_m}) over a pair subsample.
double incomplete_ustat(const Sample& sample, const Kernel& h,
                        const PairSubsample& pairs);

// Plug-in Hoeffding decomposition quantities for h.
struct HoeffdingComponents {
  double theta = 0.0;
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;
  double sigma_sq = 0.0;
};

// theta-hat = complete_ustat; h1(X_i) = mean_j h(X_i, X_j) - theta;
// sigma1^2 = var(h1); sigma^2 = var of pair values about theta;
// sigma2^2 = max(0, sigma^2 - 2 sigma1^2) (clipped: finite-sample noise can
// drive the plug-in difference negative).
//
// Cost is O(n^2) kernel evaluations; above pair_cap points the sample is
// reduced to an evenly strided subsample of pair_cap points first (the
// stride keeps it i.i.d.), so huge inputs stay tractable.
HoeffdingComponents estimate_components(const Sample& sample, const Kernel& h,
                                        std::size_t pair_cap = 10000);

}  // namespace medest
