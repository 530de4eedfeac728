#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "bottlegan/error.hpp"
#include "bottlegan/rng.hpp"

namespace bottlegan {

template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using ColVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Dense row-major n-d array. The data currency for parameters, gradients
// and images; compute maps onto it with Eigen.
template <class T>
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<T> v;

  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> dims)
      : shape(std::move(dims)), v(static_cast<std::size_t>(numel_of(shape))) {}

  static std::int64_t numel_of(const std::vector<std::int64_t>& dims) {
    std::int64_t n = 1;
    for (std::int64_t d : dims) {
      if (d < 0) throw InvalidInputError("tensor dims must be non-negative");
      n *= d;
    }
    return n;
  }

  std::int64_t numel() const { return static_cast<std::int64_t>(v.size()); }
  T* data() { return v.data(); }
  const T* data() const { return v.data(); }

  void set_zero() { std::fill(v.begin(), v.end(), T(0)); }

  void fill_normal(Rng& rng, T stddev) {
    for (auto& x : v) x = static_cast<T>(rng.normal(0.0, static_cast<double>(stddev)));
  }

  bool all_finite() const {
    for (const T& x : v)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }

  Tensor zeros_like() const {
    Tensor t;
    t.shape = shape;
    t.v.assign(v.size(), T(0));
    return t;
  }

  template <class U>
  Tensor<U> cast() const {
    Tensor<U> t;
    t.shape = shape;
    t.v.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) t.v[i] = static_cast<U>(v[i]);
    return t;
  }
};

template <class T>
Eigen::Map<RowMat<T>> as_matrix(Tensor<T>& t, std::int64_t rows, std::int64_t cols) {
  if (rows * cols != t.numel()) throw InvalidInputError("as_matrix: shape mismatch");
  return Eigen::Map<RowMat<T>>(t.data(), rows, cols);
}

template <class T>
Eigen::Map<const RowMat<T>> as_matrix(const Tensor<T>& t, std::int64_t rows,
                                      std::int64_t cols) {
  if (rows * cols != t.numel()) throw InvalidInputError("as_matrix: shape mismatch");
  return Eigen::Map<const RowMat<T>>(t.data(), rows, cols);
}

}  // namespace bottlegan
