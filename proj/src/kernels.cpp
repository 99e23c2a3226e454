#include "medest/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "medest/errors.hpp"
#include "medest/numeric.hpp"

namespace medest {

Kernel variance_kernel() {
  return Kernel{"variance", [](Obs a, Obs b) {
                  double s = 0.0;
                  for (std::size_t d = 0; d < a.size(); ++d) {
                    const double diff = a[d] - b[d];
                    s += diff * diff;
                  }
                  return 0.5 * s;
                }};
}

Kernel clustering_kernel(std::function<double(Obs, Obs)> metric,
                         std::function<int(Obs)> cell) {
  return Kernel{"clustering",
                [metric = std::move(metric), cell = std::move(cell)](Obs a, Obs b) {
                  return cell(a) == cell(b) ? metric(a, b) : 0.0;
                }};
}

Kernel ranking_kernel(std::function<double(Obs, Obs)> rule,
                      std::function<double(double)> loss) {
  return Kernel{"ranking",
                [rule = std::move(rule), loss = std::move(loss)](Obs a, Obs b) {
                  if (a.size() < 2) {
                    throw std::invalid_argument(
                        "ranking kernel: observations need features plus a label");
                  }
                  const Obs af = a.first(a.size() - 1);
                  const Obs bf = b.first(b.size() - 1);
                  const double ya = a[a.size() - 1];
                  const double yb = b[b.size() - 1];
                  return loss(-rule(af, bf) * (ya - yb));
                }};
}

double complete_ustat_indices(const Sample& sample, const Kernel& h,
                              std::span<const std::size_t> idx) {
  const std::size_t m = idx.size();
  if (m < 2) throw insufficient_data("complete_ustat: need at least 2 points");
  CompensatedSum acc;
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const Obs xa = sample.obs(idx[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      acc.add(h(xa, sample.obs(idx[b])));
    }
  }
  const double npairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  return acc.value() / npairs;
}

double complete_ustat(const Sample& sample, const Kernel& h) {
  const std::size_t n = sample.size();
  if (n < 2) throw insufficient_data("complete_ustat: need at least 2 points");
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Obs xi = sample.obs(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      acc.add(h(xi, sample.obs(j)));
    }
  }
  const double npairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return acc.value() / npairs;
}

double split_pairs_estimate(const Sample& sample, const Kernel& h) {
  const std::size_t n = sample.size();
  if (n < 2) throw insufficient_data("split_pairs_estimate: need at least 2 points");
  const std::size_t half = n / 2;
  CompensatedSum acc;
  for (std::size_t i = 0; i < half; ++i) {
    acc.add(h(sample.obs(i), sample.obs(i + half)));
  }
  return acc.value() / static_cast<double>(half);
}

double incomplete_ustat(const Sample& sample, const Kernel& h,
                        const PairSubsample& pairs) {
  if (pairs.pairs.empty()) {
    throw std::invalid_argument("incomplete_ustat: empty pair subsample");
  }
  const std::size_t n = sample.size();
  CompensatedSum acc;
  for (const auto& [i, j] : pairs.pairs) {
    if (i >= n || j >= n) {
      throw std::invalid_argument("incomplete_ustat: pair index out of range");
    }
    acc.add(h(sample.obs(i), sample.obs(j)));
  }
  return acc.value() / static_cast<double>(pairs.pairs.size());
}

HoeffdingComponents estimate_components(const Sample& sample, const Kernel& h,
                                        std::size_t pair_cap) {
  const std::size_t n = sample.size();
  if (n < 4) throw insufficient_data("estimate_components: need at least 4 points");
  if (pair_cap < 4) throw std::invalid_argument("estimate_components: pair_cap < 4");

  std::vector<std::size_t> idx;
  const std::size_t m = std::min(n, pair_cap);
  idx.reserve(m);
  for (std::size_t t = 0; t < m; ++t) idx.push_back(t * n / m);

  // First pass: theta and the row means of h.
  std::vector<CompensatedSum> row(m);
  CompensatedSum total;
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const Obs xa = sample.obs(idx[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = h(xa, sample.obs(idx[b]));
      row[a].add(v);
      row[b].add(v);
      total.add(v);
    }
  }
  const double npairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  const double theta = total.value() / npairs;

  std::vector<double> h1(m);
  for (std::size_t a = 0; a < m; ++a) {
    h1[a] = row[a].value() / static_cast<double>(m - 1) - theta;
  }
  const double h1_mean = mean_of(h1);
  const double sigma1_sq = variance_about(h1, h1_mean);

  // Second pass: pair variance about theta (two passes avoid cancellation).
  CompensatedSum sq;
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const Obs xa = sample.obs(idx[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      const double d = h(xa, sample.obs(idx[b])) - theta;
      sq.add(d * d);
    }
  }
  const double sigma_sq = sq.value() / npairs;
  const double sigma2_sq = std::max(0.0, sigma_sq - 2.0 * sigma1_sq);

  return HoeffdingComponents{theta, sigma1_sq, sigma2_sq, sigma_sq};
}

}  // namespace medest
