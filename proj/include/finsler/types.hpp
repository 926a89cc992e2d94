#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace finsler {

/// Largest chart dimension supported by the fixed-capacity vector types.
inline constexpr int kMaxDim = 4;

/// Dynamic-size, fixed-capacity vectors and matrices (no heap traffic in hot loops).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: wrong dimension, out-of-range parameters, malformed config.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to produce a trustworthy result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class IntegrationFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class ShootingDiverged : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class AmbiguousPreimage : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegenerateFlag : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class MaxIterExceeded : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// ---------------------------------------------------------------------------
// Fixed-capacity rank-3 array, indexed (i, j, k).

class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n) { data_.fill(0.0); }

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  /// Max-norm of all components.
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) m = std::max(m, std::abs((*this)(i, j, k)));
    return m;
  }

  Tensor3& operator-=(const Tensor3& o) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) (*this)(i, j, k) -= o(i, j, k);
    return *this;
  }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }

  /// Contract the last two slots with (u, w): out^i = T(i, j, k) u^j w^k.
  Vec contract23(const Vec& u, const Vec& w) const {
    Vec out = Vec::Zero(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) out[i] += (*this)(i, j, k) * u[j] * w[k];
    return out;
  }

  /// Contract the last slot with w: out(i, j) = T(i, j, k) w^k.
  Mat contract3(const Vec& w) const {
    Mat out = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) out(i, j) += (*this)(i, j, k) * w[k];
    return out;
  }

 private:
  int index(int i, int j, int k) const { return (i * kMaxDim + j) * kMaxDim + k; }

  alignas(16) std::array<double, kMaxDim * kMaxDim * kMaxDim> data_{};
  int n_ = 0;
};

}  // namespace finsler
