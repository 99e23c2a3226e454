#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "medest/kernels.hpp"
#include "medest/rng.hpp"
#include "medest/sample.hpp"

namespace medest {

// Mahalanobis metric d_M(x, y) = sqrt((x-y)^T M (x-y)) with M symmetric PSD.
struct MahalanobisModel {
  Eigen::MatrixXd M;
  double margin = 1.0;
  double step_size = 0.05;

  static MahalanobisModel identity(std::size_t dim, double margin,
                                   double step_size);
  double squared_distance(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) const;
};

// Points with symmetric similar/dissimilar pair labels. Labels come either
// from group ids (same group = similar) or from an explicit pair table.
struct PairLabelDataset {
  std::vector<Eigen::VectorXd> points;
  std::vector<int> groups;
  std::map<std::pair<std::size_t, std::size_t>, bool> explicit_labels;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
  bool similar(std::size_t i, std::size_t j) const;
};

// Contrastive loss: similar pairs pay d_M^2, dissimilar pairs pay the hinge
// max(0, margin - d_M^2).
double pairwise_loss(const MahalanobisModel& model, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& y, bool similar);
Eigen::MatrixXd pairwise_loss_gradient(const MahalanobisModel& model,
                                       const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& y, bool similar);

// Clips negative eigenvalues to zero and re-symmetrizes.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);

// Average loss over all point pairs of the dataset.
double full_pairwise_risk(const PairLabelDataset& data,
                          const MahalanobisModel& model);

struct GdStep {
  std::size_t step = 0;
  double block_risk = 0.0;
  double full_risk = 0.0;
};

struct GdResult {
  MahalanobisModel model;
  std::vector<GdStep> trace;
};

// Mini-batch descent that redraws K sampled-without-replacement blocks of B
// points each step, steps on the median-risk block's gradient, and projects
// back to the PSD cone.
GdResult moru_minibatch_gd(const PairLabelDataset& data,
                           MahalanobisModel model, std::size_t K,
                           std::size_t B, std::size_t steps, RngSeed seed);

// Candidates are pairwise loss kernels l_f; matches compare H_f = sqrt(l_f).
double phi_distance_oracle(const Sample& s, const Kernel& loss_f,
                           const Kernel& loss_g, std::size_t K);

enum class MatchWinner { First, Second };

// Winner of the (f, g) match: First iff the median block U-statistic of
// l_f - l_g is <= 0.
MatchWinner psi_match(const Sample& s_prime, const Kernel& loss_f,
                      const Kernel& loss_g, std::size_t K_prime);

struct TournamentMatch {
  std::size_t first = 0;
  std::size_t second = 0;
  double phi = 0.0;
  std::size_t winner = 0;
};

struct TournamentResult {
  std::vector<std::size_t> champions;
  std::vector<TournamentMatch> matches;
  std::size_t split_first = 0;
  std::size_t split_second = 0;
};

// Shuffles the data once, splits it in half, gates matches on the first half
// (phi >= beta * r) and resolves them on the second. Champions lose no
// allowed match.
TournamentResult run_tournament(const Sample& data,
                                const std::vector<Kernel>& candidates,
                                double beta, double r, std::size_t K,
                                std::size_t K_prime, RngSeed seed);

// Two Gaussian clusters at (+/-separation, 0, ..., 0); even indices belong to
// group 0, odd to group 1.
PairLabelDataset make_two_cluster_dataset(std::size_t n, std::size_t dim,
                                          double separation, double noise_sd,
                                          RngSeed seed);

// Replaces floor(fraction * n) points by a fixed outlier location.
void contaminate_points(PairLabelDataset& data, double fraction,
                        const Eigen::VectorXd& outlier, RngSeed seed);

}  // namespace medest
