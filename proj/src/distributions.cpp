#include "medest/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace medest {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LawSpec LawSpec::normal01() {
  return LawSpec{LawFamily::Normal01, "normal", 0.0, 1.0, 3.0};
}

LawSpec LawSpec::student3() {
  return LawSpec{LawFamily::Student3, "student3", 0.0, 3.0, kInf};
}

LawSpec LawSpec::lognormal01() {
  const double e = std::exp(1.0);
  const double mean = std::exp(0.5);
  const double var = (e - 1.0) * e;
  // Central fourth moment of exp(N(0,1)):
  // E(X - e^{1/2})^4 = e^8 - 4 e^5 + 6 e^3 - 3 e^2.
  const double mu4 = std::exp(8.0) - 4.0 * std::exp(5.0) + 6.0 * std::exp(3.0) -
                     3.0 * std::exp(2.0);
  return LawSpec{LawFamily::LogNormal01, "lognormal", mean, var, mu4};
}

LawSpec LawSpec::pareto3() {
  // shape a=3, scale 1: mean a/(a-1) = 3/2, variance a/((a-1)^2 (a-2)) = 3/4;
  // the fourth moment diverges at a = 3.
  return LawSpec{LawFamily::Pareto3, "pareto3", 1.5, 0.75, kInf};
}

LawSpec LawSpec::by_name(const std::string& name) {
  if (name == "normal") return normal01();
  if (name == "student3") return student3();
  if (name == "lognormal") return lognormal01();
  if (name == "pareto3") return pareto3();
  throw std::invalid_argument(
      "unknown law '" + name + "' (expected normal, student3, lognormal, pareto3)");
}

Sample draw(const LawSpec& law, std::size_t n, Rng& g) {
  if (n == 0) throw std::invalid_argument("draw: require n >= 1");
  std::vector<double> values(n);
  switch (law.family) {
    case LawFamily::Normal01:
      for (auto& x : values) x = g.normal();
      break;
    case LawFamily::Student3:
      // t(3) = Z * sqrt(3 / (Z1^2 + Z2^2 + Z3^2)).
      for (auto& x : values) {
        const double z = g.normal();
        const double a = g.normal();
        const double b = g.normal();
        const double c = g.normal();
        x = z * std::sqrt(3.0 / (a * a + b * b + c * c));
      }
      break;
    case LawFamily::LogNormal01:
      for (auto& x : values) x = std::exp(g.normal());
      break;
    case LawFamily::Pareto3:
      // Inverse CDF with u in (0, 1]: x = u^{-1/3}.
      for (auto& x : values) x = std::pow(1.0 - g.uniform01(), -1.0 / 3.0);
      break;
  }
  return Sample(std::move(values));
}

ContaminationResult contaminate(const Sample& sample, const Contamination& c,
                                RngSeed seed) {
  if (!(c.fraction >= 0.0 && c.fraction < 0.5)) {
    throw std::invalid_argument("contaminate: fraction must lie in [0, 1/2)");
  }
  if (!sample.is_scalar()) {
    throw std::invalid_argument("contaminate: scalar samples only");
  }
  const std::size_t n = sample.size();
  const std::size_t m = static_cast<std::size_t>(c.fraction * static_cast<double>(n));
  ContaminationResult out{sample, {}};
  if (m == 0) return out;

  Rng g = seed.stream();
  // First m slots of a partial Fisher-Yates permutation: uniform positions.
  std::unordered_map<std::size_t, std::size_t> overlay;
  overlay.reserve(2 * m);
  auto at = [&](std::size_t i) {
    auto it = overlay.find(i);
    return it == overlay.end() ? i : it->second;
  };
  out.replaced.reserve(m);
  for (std::size_t t = 0; t < m; ++t) {
    const std::size_t j = t + static_cast<std::size_t>(g.below(n - t));
    const std::size_t vt = at(t);
    const std::size_t vj = at(j);
    overlay[j] = vt;
    out.replaced.push_back(vj);
  }
  std::sort(out.replaced.begin(), out.replaced.end());

  std::vector<double> values = sample.flat();
  for (std::size_t pos : out.replaced) {
    values[pos] = c.use_fixed_value ? c.fixed_value
                                    : draw(c.outlier_law, 1, g).scalar(0);
  }
  out.sample = Sample(std::move(values));
  return out;
}

}  // namespace medest
