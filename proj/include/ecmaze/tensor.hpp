#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ecmaze/common.hpp"

namespace ecmaze {

// Dense row-major f64 tensor. Rank 1 and 2 cover everything in this repo
// (observations are flattened before they reach the numerics).
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    long n = 1;
    for (int d : shape_) {
      if (d <= 0) throw ConfigError("Tensor: dimensions must be positive");
      n *= d;
    }
    data_.assign(static_cast<std::size_t>(n), 0.0);
  }

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

  static Tensor from(std::vector<int> shape, std::vector<double> data) {
    Tensor t(std::move(shape));
    if (data.size() != t.data_.size())
      throw ConfigError("Tensor: data length does not match shape");
    t.data_ = std::move(data);
    return t;
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  int rows() const { return rank() == 2 ? shape_[0] : (rank() == 1 ? 1 : 0); }
  int cols() const { return rank() == 2 ? shape_[1] : (rank() == 1 ? shape_[0] : 0); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * shape_[1] + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * shape_[1] + c]; }

  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * shape_[1]; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * shape_[1]; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

inline bool all_finite(const Tensor& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) return false;
  }
  return true;
}

}  // namespace ecmaze
