#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "medest/rng.hpp"
#include "medest/sample.hpp"

namespace medest {

enum class LawFamily { Normal01, Student3, LogNormal01, Pareto3 };

// A test law with known ground truth. fourth_central is +infinity when the
// fourth moment diverges (Student(3), Pareto(3)); the variance-kernel
// Hoeffding components derived from it are then infinite too, and bound
// planners that need them are infeasible on those laws.
struct LawSpec {
  LawFamily family = LawFamily::Normal01;
  std::string name;
  double true_mean = 0.0;
  double true_variance = 1.0;
  double fourth_central = 3.0;

  // Components of the variance kernel h(x,y) = (x-y)^2/2 under this law:
  // theta = variance, sigma1^2 = (mu4 - var^2)/4, sigma2^2 = var^2.
  double kernel_sigma1_sq() const {
    return (fourth_central - true_variance * true_variance) / 4.0;
  }
  double kernel_sigma2_sq() const { return true_variance * true_variance; }
  double kernel_sigma_sq() const {
    return 2.0 * kernel_sigma1_sq() + kernel_sigma2_sq();
  }

  static LawSpec normal01();
  static LawSpec student3();
  static LawSpec lognormal01();
  static LawSpec pareto3();  // shape 3, scale 1: support [1, inf)
  static LawSpec by_name(const std::string& name);
};

Sample draw(const LawSpec& law, std::size_t n, Rng& g);

// Replace floor(fraction * n) uniformly chosen positions with outliers, drawn
// from a law or set to a fixed value.
struct Contamination {
  double fraction = 0.0;
  bool use_fixed_value = true;
  double fixed_value = 0.0;
  LawSpec outlier_law;
};

struct ContaminationResult {
  Sample sample;
  std::vector<std::size_t> replaced;  // sorted positions
};

ContaminationResult contaminate(const Sample& sample, const Contamination& c,
                                RngSeed seed);

}  // namespace medest
