#include "medest/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "medest/errors.hpp"
#include "medest/mean_estimators.hpp"
#include "medest/parallel.hpp"
#include "medest/ustat_estimators.hpp"

namespace medest {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_common(std::size_t n, double delta) {
  if (n == 0) throw std::invalid_argument("planner: require n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("planner: delta must lie in (0, 1)");
  }
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 0.5)) {
    throw std::invalid_argument("planner: tau must lie in (0, 1/2)");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string estimator_kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::MoM: return "mom";
    case EstimatorKind::MoRM: return "morm";
    case EstimatorKind::MoU: return "mou";
    case EstimatorKind::MoRU: return "moru";
    case EstimatorKind::MoMSplitPairs: return "mom-split-pairs";
    case EstimatorKind::MoIU: return "moiu";
    case EstimatorKind::MoGU: return "mogu";
    case EstimatorKind::MoRGU: return "morgu";
  }
  return "unknown";
}

EstimatorPlan plan_mom(std::size_t n, double delta, double sigma) {
  check_common(n, delta);
  if (sigma < 0.0) throw std::invalid_argument("plan_mom: sigma must be >= 0");
  const double floor_delta = std::exp(1.0 - static_cast<double>(n) / 2.0);
  if (delta < floor_delta) {
    throw infeasible_plan("plan_mom: delta = " + fmt(delta) +
                          " below the admissible floor e^{1 - n/2} = " +
                          fmt(floor_delta));
  }
  const double L = std::log(1.0 / delta);
  EstimatorPlan p;
  p.estimator = EstimatorKind::MoM;
  p.n = n;
  p.delta = delta;
  p.K = static_cast<std::size_t>(std::max(1.0, std::ceil(L)));
  p.B = n / p.K;
  p.radius = 2.0 * std::sqrt(2.0) * std::exp(1.0) * sigma *
             std::sqrt((1.0 + L) / static_cast<double>(n));
  p.sigma = sigma;
  p.scheme = BlockScheme::Partition;
  return p;
}

EstimatorPlan plan_morm(std::size_t n, double delta, double tau, double sigma,
                        BlockScheme scheme) {
  check_common(n, delta);
  check_tau(tau);
  if (sigma < 0.0) throw std::invalid_argument("plan_morm: sigma must be >= 0");
  if (scheme == BlockScheme::Partition) {
    throw std::invalid_argument("plan_morm: scheme must be SWoR or WithReplacement");
  }
  const double L = std::log(2.0 / delta);
  const double half_gap = 0.5 - tau;
  const double B_real = 8.0 * tau * tau * static_cast<double>(n) / (9.0 * L);
  if (B_real < 1.0) {
    throw infeasible_plan(
        "plan_morm: B = floor(8 tau^2 n / (9 log(2/delta))) < 1; requires delta >= "
        "2 e^{-8 tau^2 n / 9} = " + fmt(2.0 * std::exp(-8.0 * tau * tau *
                                        static_cast<double>(n) / 9.0)));
  }
  EstimatorPlan p;
  p.estimator = EstimatorKind::MoRM;
  p.n = n;
  p.delta = delta;
  p.tau = tau;
  p.K = static_cast<std::size_t>(std::ceil(L / (2.0 * half_gap * half_gap)));
  p.B = static_cast<std::size_t>(B_real);
  p.radius = (3.0 * std::sqrt(3.0) * sigma / (2.0 * std::pow(tau, 1.5))) *
             std::sqrt(L / static_cast<double>(n));
  p.sigma = sigma;
  p.scheme = scheme;
  return p;
}

EstimatorPlan plan_mou(std::size_t n, double delta, double sigma1_sq,
                       double sigma2_sq) {
  check_common(n, delta);
  if (sigma1_sq < 0.0 || sigma2_sq < 0.0) {
    throw std::invalid_argument("plan_mou: variance inputs must be >= 0");
  }
  const double floor_delta = std::exp(1.0 - 2.0 * static_cast<double>(n) / 9.0);
  if (delta < floor_delta) {
    throw infeasible_plan("plan_mou: delta = " + fmt(delta) +
                          " below the admissible floor e^{1 - 2n/9} = " +
                          fmt(floor_delta));
  }
  const double L = std::log(1.0 / delta);
  EstimatorPlan p;
  p.estimator = EstimatorKind::MoU;
  p.n = n;
  p.delta = delta;
  p.K = static_cast<std::size_t>(std::max(1.0, std::ceil(4.5 * L)));
  p.B = n / p.K;
  if (p.B < 2) {
    throw infeasible_plan(
        "plan_mou: floor(n/K) = " + std::to_string(p.B) +
        " < 2 with K = ceil((9/2) log(1/delta)) = " + std::to_string(p.K));
  }
  const double nd = static_cast<double>(n);
  p.radius = std::sqrt(108.0 * sigma1_sq * L / nd +
                       486.0 * sigma2_sq * L * L / (nd * (2.0 * nd - 9.0 * L)));
  p.sigma1_sq = sigma1_sq;
  p.sigma2_sq = sigma2_sq;
  p.scheme = BlockScheme::Partition;
  return p;
}

EstimatorPlan plan_moru(std::size_t n, double delta, double tau,
                        double sigma1_sq, double sigma2_sq) {
  check_common(n, delta);
  check_tau(tau);
  if (sigma1_sq < 0.0 || sigma2_sq < 0.0) {
    throw std::invalid_argument("plan_moru: variance inputs must be >= 0");
  }
  const double L = std::log(2.0 / delta);
  const double half_gap = 0.5 - tau;
  const double nd = static_cast<double>(n);
  const double B_real = 8.0 * tau * tau * nd / (9.0 * L);
  if (B_real < 2.0) {
    throw infeasible_plan(
        "plan_moru: B = floor(8 tau^2 n / (9 log(2/delta))) < 2; requires "
        "8 tau^2 n >= 18 log(2/delta)");
  }
  EstimatorPlan p;
  p.estimator = EstimatorKind::MoRU;
  p.n = n;
  p.delta = delta;
  p.tau = tau;
  p.K = static_cast<std::size_t>(std::ceil(L / (2.0 * half_gap * half_gap)));
  p.B = static_cast<std::size_t>(B_real);
  const double tau3 = tau * tau * tau;
  const double c1 = 27.0 * sigma1_sq / (2.0 * tau3);
  const double c2 = 243.0 * sigma2_sq / (4.0 * tau3);
  p.radius = std::sqrt(c1 * L / nd +
                       c2 * L * L / (nd * (8.0 * tau * tau * nd - 9.0 * L)));
  p.sigma1_sq = sigma1_sq;
  p.sigma2_sq = sigma2_sq;
  p.scheme = BlockScheme::SWoR;
  return p;
}

EstimatorPlan plan_mom_split_pairs(std::size_t n, double delta, double sigma_h) {
  if (n < 2) throw std::invalid_argument("plan_mom_split_pairs: require n >= 2");
  EstimatorPlan inner = plan_mom(n / 2, delta, sigma_h);
  inner.estimator = EstimatorKind::MoMSplitPairs;
  inner.n = n;
  return inner;
}

EstimatorPlan plan_moiu(std::size_t n, double delta, double tau,
                        PairScheme scheme) {
  check_common(n, delta);
  check_tau(tau);
  if (n < 2) throw std::invalid_argument("plan_moiu: require n >= 2");
  const double L = std::log(2.0 / delta);
  const double half_gap = 0.5 - tau;
  const double lambda = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double M_real = 8.0 * tau * tau * lambda / (9.0 * L);
  if (M_real < 1.0) {
    throw infeasible_plan(
        "plan_moiu: M = floor(8 tau^2 n(n-1)/2 / (9 log(2/delta))) < 1");
  }
  EstimatorPlan p;
  p.estimator = EstimatorKind::MoIU;
  p.n = n;
  p.delta = delta;
  p.tau = tau;
  p.K = static_cast<std::size_t>(std::ceil(L / (2.0 * half_gap * half_gap)));
  p.B = static_cast<std::size_t>(M_real);
  p.radius = kNan;
  p.pair_scheme = scheme;
  p.scheme = BlockScheme::SWoR;
  return p;
}

double estimate_with_plan(const EstimatorPlan& plan, const Sample& sample,
                          const Kernel& h, RngSeed seed) {
  switch (plan.estimator) {
    case EstimatorKind::MoM:
      return mom(sample, plan.K, seed).value;
    case EstimatorKind::MoRM:
      return morm(sample, plan.K, plan.B, plan.scheme, seed).value;
    case EstimatorKind::MoU:
      return mou(sample, h, plan.K, seed).value;
    case EstimatorKind::MoRU:
      return moru(sample, h, plan.K, plan.B, seed).value;
    case EstimatorKind::MoMSplitPairs:
      return mom_on_split_pairs(sample, h, plan.K, seed).value;
    case EstimatorKind::MoIU:
      return moiu(sample, h, plan.K, plan.B, plan.pair_scheme, seed).value;
    default:
      throw std::invalid_argument("estimate_with_plan: unsupported estimator kind");
  }
}

double coverage_check(const EstimatorPlan& plan, const LawSpec& law,
                      std::size_t replications, RngSeed seed, unsigned threads) {
  if (replications < 100) {
    throw std::invalid_argument("coverage_check: require replications >= 100");
  }
  const Kernel h = variance_kernel();
  const bool mean_target = plan.estimator == EstimatorKind::MoM ||
                           plan.estimator == EstimatorKind::MoRM;
  const double target = mean_target ? law.true_mean : law.true_variance;
  std::vector<char> exceeded(replications, 0);
  parallel_for(replications, threads, [&](std::size_t r) {
    const RngSeed rep = seed.child(r);
    Rng g = rep.child(0).stream();
    const Sample sample = draw(law, plan.n, g);
    const double est = estimate_with_plan(plan, sample, h, rep.child(1));
    exceeded[r] = std::abs(est - target) > plan.radius ? 1 : 0;
  });
  std::size_t count = 0;
  for (char e : exceeded) count += static_cast<std::size_t>(e);
  return static_cast<double>(count) / static_cast<double>(replications);
}

}  // namespace medest
