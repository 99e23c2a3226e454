#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace medest {

// Neumaier-compensated accumulator; keeps O(n^2) pair sums stable.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Pairwise (cascade) summation; used for block means.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double mean_of(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean_of: empty input");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

// Population variance around the given center, compensated.
inline double variance_about(std::span<const double> v, double center) {
  if (v.empty()) throw std::invalid_argument("variance_about: empty input");
  CompensatedSum acc;
  for (double x : v) {
    const double d = x - center;
    acc.add(d * d);
  }
  return acc.value() / static_cast<double>(v.size());
}

// The lower median: sort ascending, take the 1-based rank (n+1)/2 element for
// odd n and the rank n/2 element for even n. An order statistic, never an
// average; every median in this library goes through here.
inline double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  const std::size_t idx = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx),
                   values.end());
  return values[idx];
}

// Empirical (1-delta)-quantile of a batch: the k-th smallest value with
// k = ceil((1-delta) * n), clamped to [1, n].
inline double upper_quantile(std::vector<double> values, double delta) {
  if (values.empty()) throw std::invalid_argument("upper_quantile: empty input");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("upper_quantile: delta must lie in (0,1)");
  }
  const double n = static_cast<double>(values.size());
  std::size_t k = static_cast<std::size_t>(std::ceil((1.0 - delta) * n));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   values.end());
  return values[k - 1];
}

}  // namespace medest
