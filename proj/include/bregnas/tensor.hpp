#pragma once

#include <cstddef>
#include <vector>

#include "bregnas/errors.hpp"

namespace bregnas {

/// Dense n-dimensional array of doubles, row-major. The carrier for all
/// parameters, activations and data in this library. No views, no
/// broadcasting; operations allocate fresh tensors.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), data_(checked_numel(shape_), 0.0) {}

  Tensor(std::vector<std::size_t> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (checked_numel(shape_) != data_.size())
      throw DimensionError("tensor data length does not match shape");
  }

  static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

  static Tensor full(std::vector<std::size_t> shape, double value) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = value;
    return t;
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t ndim() const { return shape_.size(); }
  std::size_t numel() const { return data_.size(); }

  std::size_t extent(std::size_t dim) const { return shape_.at(dim); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& vec() { return data_; }
  const std::vector<double>& vec() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // 2-D accessors; only valid for matrices.
  double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  bool all_finite() const;

 private:
  static std::size_t checked_numel(const std::vector<std::size_t>& shape);

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Standard matrix product a[m×k] · b[k×n]. The reduction over the inner
/// dimension runs in ascending k order with a scalar accumulator, so results
/// are bit-reproducible run to run.
Tensor matmul(const Tensor& a, const Tensor& b);

/// Elementwise max(x, 0).
Tensor relu(const Tensor& x);

/// upstream * 1[x > 0]; the derivative at exactly 0 is taken as 0.
Tensor relu_backward(const Tensor& x, const Tensor& upstream);

/// Samples exp(-(i^2+j^2)/(2 sigma^2)) on the centered integer grid and
/// normalizes to unit sum. size must be odd.
Tensor gaussian_kernel2d(std::size_t size, double sigma);

/// 2-D correlation (no kernel flip) with zero padding; output shape equals
/// the input shape. kernel must be odd-sized square with extent <= min(h, w).
Tensor conv2d_same(const Tensor& image, const Tensor& kernel);

}  // namespace bregnas
