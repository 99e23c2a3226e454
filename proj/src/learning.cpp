#include "medest/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "medest/errors.hpp"
#include "medest/numeric.hpp"
#include "medest/sampling.hpp"

namespace medest {

namespace {

void check_pair_args(const MahalanobisModel& model, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() != model.M.rows() ||
      model.M.rows() != model.M.cols()) {
    throw std::invalid_argument("pairwise_loss: dimension mismatch");
  }
  if (!(model.margin > 0.0)) {
    throw std::invalid_argument("pairwise_loss: margin must be positive");
  }
}

double block_risk(const PairLabelDataset& data, const MahalanobisModel& model,
                  const std::vector<std::size_t>& idx) {
  CompensatedSum acc;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      acc.add(pairwise_loss(model, data.points[idx[a]], data.points[idx[b]],
                            data.similar(idx[a], idx[b])));
      ++pairs;
    }
  }
  return acc.value() / static_cast<double>(pairs);
}

Eigen::MatrixXd block_gradient(const PairLabelDataset& data,
                               const MahalanobisModel& model,
                               const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(data.dim(), data.dim());
  std::size_t pairs = 0;
  for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      grad += pairwise_loss_gradient(model, data.points[idx[a]],
                                     data.points[idx[b]],
                                     data.similar(idx[a], idx[b]));
      ++pairs;
    }
  }
  return grad / static_cast<double>(pairs);
}

// Index of the block whose risk is the lower median of the K block risks.
std::size_t median_block_index(const std::vector<double>& risks) {
  std::vector<std::size_t> order(risks.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t mid = (risks.size() - 1) / 2;
  std::nth_element(order.begin(), order.begin() + mid, order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return risks[a] < risks[b];
                   });
  return order[mid];
}

std::vector<double> block_ustats(const Sample& s, const Kernel& k,
                                 std::size_t K) {
  if (K == 0 || s.size() / K < 2) {
    throw insufficient_data("match blocks need at least 2 points each");
  }
  const std::size_t B = s.size() / K;
  std::vector<double> values(K);
  std::vector<std::size_t> idx(B);
  for (std::size_t b = 0; b < K; ++b) {
    std::iota(idx.begin(), idx.end(), b * B);
    values[b] = complete_ustat_indices(s, k, idx);
  }
  return values;
}

}  // namespace

MahalanobisModel MahalanobisModel::identity(std::size_t dim, double margin,
                                            double step_size) {
  if (dim == 0) throw std::invalid_argument("model dimension must be positive");
  if (!(margin > 0.0) || !(step_size > 0.0)) {
    throw std::invalid_argument("margin and step size must be positive");
  }
  MahalanobisModel model;
  model.M = Eigen::MatrixXd::Identity(dim, dim);
  model.margin = margin;
  model.step_size = step_size;
  return model;
}

double MahalanobisModel::squared_distance(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) const {
  const Eigen::VectorXd diff = x - y;
  return diff.dot(M * diff);
}

bool PairLabelDataset::similar(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) {
    throw std::invalid_argument("pair label index out of range");
  }
  if (!groups.empty()) return groups[i] == groups[j];
  const auto key = std::minmax(i, j);
  const auto it = explicit_labels.find({key.first, key.second});
  if (it == explicit_labels.end()) {
    throw std::invalid_argument("no label for pair (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
  }
  return it->second;
}

double pairwise_loss(const MahalanobisModel& model, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& y, bool similar) {
  check_pair_args(model, x, y);
  const double d2 = model.squared_distance(x, y);
  if (similar) return d2;
  return std::max(0.0, model.margin - d2);
}

Eigen::MatrixXd pairwise_loss_gradient(const MahalanobisModel& model,
                                       const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& y, bool similar) {
  check_pair_args(model, x, y);
  const Eigen::VectorXd diff = x - y;
  if (similar) return diff * diff.transpose();
  const double d2 = diff.dot(model.M * diff);
  if (model.margin - d2 <= 0.0) {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  }
  return -diff * diff.transpose();
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("project_psd: eigendecomposition failed");
  }
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out = solver.eigenvectors() * clipped.asDiagonal() *
                        solver.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double full_pairwise_risk(const PairLabelDataset& data,
                          const MahalanobisModel& model) {
  if (data.size() < 2) throw insufficient_data("risk needs at least 2 points");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  return block_risk(data, model, idx);
}

GdResult moru_minibatch_gd(const PairLabelDataset& data,
                           MahalanobisModel model, std::size_t K,
                           std::size_t B, std::size_t steps, RngSeed seed) {
  if (B < 2) throw std::invalid_argument("moru_minibatch_gd: B must be >= 2");
  if (steps < 1) throw std::invalid_argument("moru_minibatch_gd: steps must be >= 1");
  if (K < 1) throw std::invalid_argument("moru_minibatch_gd: K must be >= 1");
  if (data.size() < B) throw insufficient_data("fewer points than block size");
  if (static_cast<std::size_t>(model.M.rows()) != data.dim()) {
    throw std::invalid_argument("moru_minibatch_gd: model dimension mismatch");
  }

  GdResult result;
  result.model = std::move(model);
  result.trace.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const BlockAssignment blocks = swor_blocks(data.size(), K, B, seed.child(s));
    std::vector<double> risks(K);
    for (std::size_t b = 0; b < K; ++b) {
      risks[b] = block_risk(data, result.model, blocks.blocks[b]);
    }
    const std::size_t pick = median_block_index(risks);
    const Eigen::MatrixXd grad =
        block_gradient(data, result.model, blocks.blocks[pick]);
    if (!grad.allFinite()) {
      throw std::runtime_error("moru_minibatch_gd: non-finite gradient at step " +
                               std::to_string(s));
    }
    result.model.M = project_psd(result.model.M - result.model.step_size * grad);
    result.trace.push_back(
        {s, risks[pick], full_pairwise_risk(data, result.model)});
  }
  return result;
}

double phi_distance_oracle(const Sample& s, const Kernel& loss_f,
                           const Kernel& loss_g, std::size_t K) {
  Kernel gap{"phi_gap", [&](Obs x, Obs y) {
               return std::abs(std::sqrt(loss_f(x, y)) -
                               std::sqrt(loss_g(x, y)));
             }};
  return median(block_ustats(s, gap, K));
}

MatchWinner psi_match(const Sample& s_prime, const Kernel& loss_f,
                      const Kernel& loss_g, std::size_t K_prime) {
  Kernel diff{"psi_diff", [&](Obs x, Obs y) {
                return loss_f(x, y) - loss_g(x, y);
              }};
  return median(block_ustats(s_prime, diff, K_prime)) <= 0.0
             ? MatchWinner::First
             : MatchWinner::Second;
}

TournamentResult run_tournament(const Sample& data,
                                const std::vector<Kernel>& candidates,
                                double beta, double r, std::size_t K,
                                std::size_t K_prime, RngSeed seed) {
  if (candidates.empty()) {
    throw std::invalid_argument("run_tournament: no candidates");
  }
  if (!(beta > 1.0) || !(r > 0.0)) {
    throw std::invalid_argument("run_tournament: need beta > 1 and r > 0");
  }
  const std::size_t n = data.size();
  const std::size_t half = n / 2;
  if (K == 0 || K_prime == 0 || half / K < 2 || (n - half) / K_prime < 2) {
    throw insufficient_data("tournament halves need blocks of >= 2 points");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng g = seed.stream();
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[g.below(i + 1)]);
  }
  const std::size_t dim = data.dim();
  std::vector<double> first_flat, second_flat;
  first_flat.reserve(half * dim);
  second_flat.reserve((n - half) * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Obs obs = data.obs(order[i]);
    auto& dst = i < half ? first_flat : second_flat;
    dst.insert(dst.end(), obs.begin(), obs.end());
  }
  const Sample s(std::move(first_flat), dim);
  const Sample s_prime(std::move(second_flat), dim);

  TournamentResult result;
  result.split_first = s.size();
  result.split_second = s_prime.size();
  std::vector<bool> beaten(candidates.size(), false);
  const double gate = beta * r;
  for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const double phi = phi_distance_oracle(s, candidates[i], candidates[j], K);
      if (phi < gate) continue;
      Kernel diff{"psi_diff", [&](Obs x, Obs y) {
                    return candidates[i](x, y) - candidates[j](x, y);
                  }};
      std::vector<double> values = block_ustats(s_prime, diff, K_prime);
      const double med_ij = median(values);
      for (auto& v : values) v = -v;
      const double med_ji = median(values);
      if (med_ij > 0.0) beaten[i] = true;
      if (med_ji > 0.0) beaten[j] = true;
      result.matches.push_back({i, j, phi, med_ij <= 0.0 ? i : j});
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!beaten[i]) result.champions.push_back(i);
  }
  return result;
}

PairLabelDataset make_two_cluster_dataset(std::size_t n, std::size_t dim,
                                          double separation, double noise_sd,
                                          RngSeed seed) {
  if (n < 2 || dim == 0) {
    throw std::invalid_argument("two-cluster dataset needs n >= 2, dim >= 1");
  }
  PairLabelDataset data;
  data.points.reserve(n);
  data.groups.reserve(n);
  Rng g = seed.stream();
  for (std::size_t i = 0; i < n; ++i) {
    const int group = static_cast<int>(i % 2);
    Eigen::VectorXd p(dim);
    for (std::size_t d = 0; d < dim; ++d) p[d] = noise_sd * g.normal();
    p[0] += group == 0 ? separation : -separation;
    data.points.push_back(std::move(p));
    data.groups.push_back(group);
  }
  return data;
}

void contaminate_points(PairLabelDataset& data, double fraction,
                        const Eigen::VectorXd& outlier, RngSeed seed) {
  if (!(fraction >= 0.0 && fraction < 0.5)) {
    throw std::invalid_argument("contamination fraction must lie in [0, 1/2)");
  }
  if (outlier.size() != static_cast<Eigen::Index>(data.dim())) {
    throw std::invalid_argument("outlier dimension mismatch");
  }
  const std::size_t m =
      static_cast<std::size_t>(fraction * static_cast<double>(data.size()));
  if (m == 0) return;
  const std::vector<std::size_t> positions =
      swor_blocks(data.size(), 1, m, seed).blocks.front();
  for (std::size_t pos : positions) data.points[pos] = outlier;
}

}  // namespace medest
