#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace medest {

// One observation: a fixed-dimension real vector. Scalar samples are
// 1-vectors so clustering/ranking/metric kernels share a single interface.
using Obs = std::span<const double>;

class Sample {
 public:
  Sample() = default;

  explicit Sample(std::vector<double> scalars)
      : data_(std::move(scalars)), dim_(1) {}

  Sample(std::vector<double> flat, std::size_t dim)
      : data_(std::move(flat)), dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("Sample: dim must be >= 1");
    if (data_.size() % dim_ != 0) {
      throw std::invalid_argument("Sample: flat size not a multiple of dim");
    }
  }

  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool is_scalar() const { return dim_ == 1; }

  Obs obs(std::size_t i) const { return Obs(data_.data() + i * dim_, dim_); }

  double scalar(std::size_t i) const { return data_[i * dim_]; }

  const std::vector<double>& flat() const { return data_; }

 private:
  std::vector<double> data_;
  std::size_t dim_ = 1;
};

}  // namespace medest
