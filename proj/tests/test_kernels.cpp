#include <doctest.h>

#include <cmath>
#include <vector>

#include "medest/errors.hpp"
#include "medest/kernels.hpp"
#include "medest/rng.hpp"

using namespace medest;

namespace {

double brute_ustat(const Sample& s, const Kernel& h) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) sum += h(s.obs(i), s.obs(j));
  }
  const double m = static_cast<double>(s.size());
  return sum / (0.5 * m * (m - 1.0));
}

Sample random_sample(std::size_t n, std::uint64_t seed) {
  Rng g = RngSeed::root(seed).stream();
  std::vector<double> v(n);
  for (auto& x : v) x = 4.0 * g.uniform01() - 2.0;
  return Sample(std::move(v));
}

}  // namespace

TEST_CASE("variance kernel on scalars and vectors") {
  const std::vector<double> a{1.0}, b{3.0};
  const Kernel h = variance_kernel();
  CHECK(h(Obs(a), Obs(b)) == 2.0);
  const std::vector<double> u{0.0, 0.0}, v{1.0, 1.0};
  CHECK(h(Obs(u), Obs(v)) == 1.0);
  CHECK(h(Obs(u), Obs(v)) == h(Obs(v), Obs(u)));
}

TEST_CASE("complete U-statistic on a tiny sample") {
  const Sample s(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  // Pair values of (x-y)^2/2: 0.5, 2, 4.5, 0.5, 2, 0.5; mean = 10/6.
  CHECK(complete_ustat(s, variance_kernel()) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("complete U-statistic equals the brute-force double loop") {
  const Kernel h = variance_kernel();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Sample s = random_sample(37, seed);
    CHECK(complete_ustat(s, h) == doctest::Approx(brute_ustat(s, h)).epsilon(1e-13));
  }
}

TEST_CASE("complete U-statistic needs two points") {
  CHECK_THROWS_AS(complete_ustat(Sample(std::vector<double>{1.0}), variance_kernel()),
                  insufficient_data);
}

TEST_CASE("indexed U-statistic matches the restriction") {
  const Sample s = random_sample(12, 3);
  const std::vector<std::size_t> idx{7, 2, 9, 4};
  std::vector<double> sub;
  for (std::size_t i : idx) sub.push_back(s.scalar(i));
  const double direct = complete_ustat(Sample(sub), variance_kernel());
  CHECK(complete_ustat_indices(s, variance_kernel(), idx) ==
        doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("split-pairs estimate pairs i with i + floor(n/2)") {
  const Sample s(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  // Pairs (1,3) and (2,4): h = 2 and 2.
  CHECK(split_pairs_estimate(s, variance_kernel()) == 2.0);
  const Sample odd(std::vector<double>{1.0, 2.0, 3.0, 4.0, 7.0});
  // floor(5/2) = 2 pairs: (1,3), (2,4); the last point is dropped.
  CHECK(split_pairs_estimate(odd, variance_kernel()) == 2.0);
}

TEST_CASE("incomplete U-statistic averages the given pairs") {
  const Sample s(std::vector<double>{0.0, 1.0, 3.0});
  PairSubsample pairs{3, PairScheme::WithReplacement, {{0, 1}, {0, 2}, {0, 1}}};
  // h values: 0.5, 4.5, 0.5 -> mean 11/6.
  CHECK(incomplete_ustat(s, variance_kernel(), pairs) ==
        doctest::Approx(11.0 / 6.0).epsilon(1e-14));
  PairSubsample bad{3, PairScheme::WithReplacement, {{0, 3}}};
  CHECK_THROWS_AS(incomplete_ustat(s, variance_kernel(), bad), std::invalid_argument);
}

TEST_CASE("clustering kernel only pays within a cell") {
  const Kernel h = clustering_kernel(
      [](Obs a, Obs b) {
        double d = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
        return d;
      },
      [](Obs a) { return a[0] >= 0.0 ? 1 : 0; });
  const std::vector<double> p{1.0}, q{2.0}, r{-1.0};
  CHECK(h(Obs(p), Obs(q)) == 1.0);
  CHECK(h(Obs(p), Obs(r)) == 0.0);
}

TEST_CASE("ranking kernel scores discordant label order") {
  // Observations are (feature, label); rule is the feature gap; the loss sees
  // -rule * (ya - yb), positive exactly on discordant pairs.
  const Kernel h = ranking_kernel(
      [](Obs a, Obs b) { return a[0] - b[0]; },
      [](double v) { return v > 0.0 ? 1.0 : 0.0; });
  const std::vector<double> lo_neg{0.0, -1.0}, hi_pos{1.0, 1.0}, hi_neg{2.0, -1.0};
  CHECK(h(Obs(lo_neg), Obs(hi_pos)) == 0.0);  // concordant
  CHECK(h(Obs(hi_pos), Obs(hi_neg)) == 1.0);  // discordant
  CHECK(h(Obs(hi_neg), Obs(hi_pos)) == 1.0);  // symmetric
  CHECK(h(Obs(lo_neg), Obs(hi_neg)) == 0.0);  // tie in labels costs nothing
}

TEST_CASE("hoeffding components match hand enumeration on a small sample") {
  const Sample s = random_sample(40, 8);
  const Kernel h = variance_kernel();
  const HoeffdingComponents c = estimate_components(s, h);
  const std::size_t n = s.size();
  const double theta = brute_ustat(s, h);
  CHECK(c.theta == doctest::Approx(theta).epsilon(1e-13));
  std::vector<double> h1(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row += h(s.obs(i), s.obs(j));
    }
    h1[i] = row / static_cast<double>(n - 1) - theta;
  }
  double s1 = 0.0, mean1 = 0.0;
  for (double v : h1) mean1 += v;
  mean1 /= static_cast<double>(n);
  for (double v : h1) s1 += (v - mean1) * (v - mean1);
  s1 /= static_cast<double>(n);
  CHECK(c.sigma1_sq == doctest::Approx(s1).epsilon(1e-10));
  double s_all = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = h(s.obs(i), s.obs(j)) - theta;
      s_all += v * v;
      ++pairs;
    }
  }
  s_all /= static_cast<double>(pairs);
  CHECK(c.sigma_sq == doctest::Approx(s_all).epsilon(1e-10));
  CHECK(c.sigma2_sq == doctest::Approx(std::max(0.0, s_all - 2.0 * s1)).epsilon(1e-9));
}

TEST_CASE("hoeffding components respect the pair cap") {
  const Sample s = random_sample(500, 13);
  const HoeffdingComponents capped = estimate_components(s, variance_kernel(), 100);
  const HoeffdingComponents full = estimate_components(s, variance_kernel());
  // The capped run subsamples, so values differ but stay in the same regime.
  CHECK(std::isfinite(capped.theta));
  CHECK(capped.sigma1_sq >= 0.0);
  CHECK(capped.sigma2_sq >= 0.0);
  CHECK(capped.theta == doctest::Approx(full.theta).epsilon(0.35));
}

TEST_CASE("hoeffding components need four points") {
  CHECK_THROWS_AS(
      estimate_components(Sample(std::vector<double>{1.0, 2.0, 3.0}), variance_kernel()),
      insufficient_data);
}
