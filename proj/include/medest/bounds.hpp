#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "medest/distributions.hpp"
#include "medest/kernels.hpp"
#include "medest/rng.hpp"
#include "medest/sampling.hpp"

namespace medest {

enum class EstimatorKind { MoM, MoRM, MoU, MoRU, MoMSplitPairs, MoIU, MoGU, MoRGU };

std::string estimator_kind_name(EstimatorKind kind);

// A (K, B, radius) prescription: with probability at least 1 - delta the
// estimator deviates from its target by less than radius. radius is NaN when
// no bound is claimed (MoIU, or overridden block counts).
struct EstimatorPlan {
  EstimatorKind estimator = EstimatorKind::MoM;
  std::size_t n = 0;
  double delta = 0.0;
  std::optional<double> tau;
  std::size_t K = 0;
  std::size_t B = 0;  // holds M for MoIU
  double radius = 0.0;
  std::optional<double> sigma;                 // mean estimators: sd of the law
  std::optional<double> sigma1_sq, sigma2_sq;  // pairwise estimators
  BlockScheme scheme = BlockScheme::Partition;
  PairScheme pair_scheme = PairScheme::WithReplacement;
};

// All logs are natural. Admissibility floors are enforced with closed lower
// endpoints; violations raise infeasible_plan with the condition spelled out.

// K = ceil(log(1/delta)), B = floor(n/K),
// radius = 2*sqrt(2)*e*sigma*sqrt((1 + log(1/delta))/n),
// admissible for delta in [e^{1 - n/2}, 1).
EstimatorPlan plan_mom(std::size_t n, double delta, double sigma);

// K = ceil(log(2/delta) / (2 (1/2 - tau)^2)), B = floor(8 tau^2 n / (9 log(2/delta))),
// radius = (3 sqrt(3) sigma / (2 tau^{3/2})) * sqrt(log(2/delta)/n),
// admissible iff B >= 1, equivalently delta >= 2 e^{-8 tau^2 n / 9}.
// The deviation guarantee is proven for the SWoR scheme; the same shapes are
// recorded for the with-replacement scheme without a guarantee.
EstimatorPlan plan_morm(std::size_t n, double delta, double tau, double sigma,
                        BlockScheme scheme = BlockScheme::SWoR);

// K = ceil((9/2) log(1/delta)), B = floor(n/K),
// radius = sqrt(108 s1 L / n + 486 s2 L^2 / (n (2n - 9L))), L = log(1/delta),
// admissible for delta in [e^{1 - 2n/9}, 1); additionally requires B >= 2.
EstimatorPlan plan_mou(std::size_t n, double delta, double sigma1_sq,
                       double sigma2_sq);

// K, B as plan_morm with L = log(2/delta); B >= 2 required. radius =
// sqrt(C1(tau) L / n + C2(tau) L^2 / (n (8 tau^2 n - 9L))) with
// C1 = 27 s1 / (2 tau^3), C2 = 243 s2 / (4 tau^3). As tau -> 1/2 this
// recovers plan_mou's radius with log(2/delta) in place of log(1/delta).
EstimatorPlan plan_moru(std::size_t n, double delta, double tau,
                        double sigma1_sq, double sigma2_sq);

// MoM over the floor(n/2) split-pair values: plan_mom shapes on m = floor(n/2)
// with sigma_h = sd of the kernel values.
EstimatorPlan plan_mom_split_pairs(std::size_t n, double delta, double sigma_h);

// Heuristic MoIU shapes (no concentration bound; radius = NaN):
// K as plan_morm; M = floor(8 tau^2 |Lambda| / (9 log(2/delta))) with
// |Lambda| = n(n-1)/2 — the Prop-1 block-size rule applied to the pair set.
EstimatorPlan plan_moiu(std::size_t n, double delta, double tau,
                        PairScheme scheme = PairScheme::WithReplacement);

// Runs the planned estimator once on a sample (variance kernel h for the
// pairwise kinds); shared by coverage_check and the experiment harness.
double estimate_with_plan(const EstimatorPlan& plan, const Sample& sample,
                          const Kernel& h, RngSeed seed);

// Fraction of replications where |estimate - target| exceeds plan.radius,
// drawing fresh n-samples from the law each time (variance kernel for the
// pairwise estimators; the mean for MoM/MoRM). Reported, never asserted:
// the bounds are conservative, so values far below delta are expected.
double coverage_check(const EstimatorPlan& plan, const LawSpec& law,
                      std::size_t replications, RngSeed seed,
                      unsigned threads = 1);

}  // namespace medest
