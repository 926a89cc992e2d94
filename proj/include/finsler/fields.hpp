#pragma once

// Coefficient fields a_ij(x), b_i(x) for Randers-type metrics. Every field is
// evaluated generically over double and the nested dual types, so metrics
// built from them get exact y- and x-derivatives.

#include <memory>
#include <span>
#include <vector>

#include "finsler/dual.hpp"
#include "finsler/types.hpp"

namespace finsler {

/// Symmetric matrix-valued field; `out` is row-major n*n.
class MatrixField {
 public:
  virtual ~MatrixField() = default;
  virtual int dim() const = 0;
  virtual void eval(std::span<const double> x, std::span<double> out) const = 0;
  virtual void eval(std::span<const D1> x, std::span<D1> out) const = 0;
  virtual void eval(std::span<const D2> x, std::span<D2> out) const = 0;
  virtual void eval(std::span<const D3> x, std::span<D3> out) const = 0;
  /// True when the field does not depend on x.
  virtual bool is_constant() const { return false; }

  Mat at(const Vec& x) const;
};

/// Covector-valued field; `out` has n entries.
class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual int dim() const = 0;
  virtual void eval(std::span<const double> x, std::span<double> out) const = 0;
  virtual void eval(std::span<const D1> x, std::span<D1> out) const = 0;
  virtual void eval(std::span<const D2> x, std::span<D2> out) const = 0;
  virtual void eval(std::span<const D3> x, std::span<D3> out) const = 0;
  virtual bool is_constant() const { return false; }

  Vec at(const Vec& x) const;
};

using MatrixFieldPtr = std::shared_ptr<const MatrixField>;
using VectorFieldPtr = std::shared_ptr<const VectorField>;

namespace detail {

template <class Derived, class Base>
class FieldImpl : public Base {
 public:
  void eval(std::span<const double> x, std::span<double> out) const override { self().evaluate(x, out); }
  void eval(std::span<const D1> x, std::span<D1> out) const override { self().evaluate(x, out); }
  void eval(std::span<const D2> x, std::span<D2> out) const override { self().evaluate(x, out); }
  void eval(std::span<const D3> x, std::span<D3> out) const override { self().evaluate(x, out); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

}  // namespace detail

// ---------------------------------------------------------------------------

class ConstantMatrixField : public detail::FieldImpl<ConstantMatrixField, MatrixField> {
 public:
  explicit ConstantMatrixField(Mat value);
  int dim() const override { return static_cast<int>(value_.rows()); }
  bool is_constant() const override { return true; }

  template <class T>
  void evaluate(std::span<const T>, std::span<T> out) const {
    const int n = dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = T(value_(i, j));
  }

 private:
  Mat value_;
};

class ConstantVectorField : public detail::FieldImpl<ConstantVectorField, VectorField> {
 public:
  explicit ConstantVectorField(Vec value) : value_(std::move(value)) {}
  int dim() const override { return static_cast<int>(value_.size()); }
  bool is_constant() const override { return true; }

  template <class T>
  void evaluate(std::span<const T>, std::span<T> out) const {
    for (int i = 0; i < dim(); ++i) out[i] = T(value_[i]);
  }

 private:
  Vec value_;
};

/// One cosine mode: amplitude * cos(wavevector . x + phase).
struct FourierMode {
  Vec wavevector;
  double phase = 0.0;
};

/// base + sum_m amplitude_m cos(k_m . x + phase_m), with matrix amplitudes.
class FourierMatrixField : public detail::FieldImpl<FourierMatrixField, MatrixField> {
 public:
  FourierMatrixField(Mat base, std::vector<FourierMode> modes, std::vector<Mat> amplitudes);
  int dim() const override { return static_cast<int>(base_.rows()); }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    const int n = dim();
    for (int i = 0; i < n * n; ++i) out[i] = T(base_(i / n, i % n));
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      T arg(modes_[m].phase);
      for (int k = 0; k < n; ++k) arg += modes_[m].wavevector[k] * x[k];
      T c = cos(arg);
      for (int i = 0; i < n * n; ++i) out[i] += amplitudes_[m](i / n, i % n) * c;
    }
  }

 private:
  Mat base_;
  std::vector<FourierMode> modes_;
  std::vector<Mat> amplitudes_;
};

class FourierVectorField : public detail::FieldImpl<FourierVectorField, VectorField> {
 public:
  FourierVectorField(Vec base, std::vector<FourierMode> modes, std::vector<Vec> amplitudes);
  int dim() const override { return static_cast<int>(base_.size()); }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    const int n = dim();
    for (int i = 0; i < n; ++i) out[i] = T(base_[i]);
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      T arg(modes_[m].phase);
      for (int k = 0; k < n; ++k) arg += modes_[m].wavevector[k] * x[k];
      T c = cos(arg);
      for (int i = 0; i < n; ++i) out[i] += amplitudes_[m][i] * c;
    }
  }

 private:
  Vec base_;
  std::vector<FourierMode> modes_;
  std::vector<Vec> amplitudes_;
};

/// Unit round 2-sphere in polar coordinates (theta, phi): diag(1, sin^2 theta).
class SpherePolarField : public detail::FieldImpl<SpherePolarField, MatrixField> {
 public:
  int dim() const override { return 2; }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    T s = sin(x[0]);
    out[0] = T(1.0);
    out[1] = T(0.0);
    out[2] = T(0.0);
    out[3] = s * s;
  }
};

/// Unit round n-sphere in stereographic coordinates from the south pole:
/// 4 / (1 + |u|^2)^2 * identity. The north pole sits at u = 0.
class SphereStereographicField : public detail::FieldImpl<SphereStereographicField, MatrixField> {
 public:
  explicit SphereStereographicField(int n) : n_(n) {}
  int dim() const override { return n_; }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    T r2(0.0);
    for (int k = 0; k < n_; ++k) r2 += x[k] * x[k];
    T c = 1.0 + r2;
    T conf = 4.0 / (c * c);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[i * n_ + j] = i == j ? conf : T(0.0);
  }

 private:
  int n_;
};

/// Regular tensor-product grid over a box, with per-axis periodicity.
struct GridSpec {
  std::vector<int> shape;
  Vec lo;
  Vec hi;
  std::vector<bool> periodic;

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
};

namespace detail {

// Catmull-Rom cubic weights for local coordinate s in [0, 1).
template <class T>
std::array<T, 4> cubic_weights(const T& s) {
  T s2 = s * s;
  T s3 = s2 * s;
  return {0.5 * (-1.0 * s3 + 2.0 * s2 - s), 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0),
          0.5 * (-3.0 * s3 + 4.0 * s2 + s), 0.5 * (s3 - s2)};
}

// Interpolates `ncomp` interleaved components of `values` at x.
template <class T>
void grid_interpolate(const GridSpec& grid, const std::vector<double>& values, int ncomp,
                      std::span<const T> x, std::span<T> out) {
  const int n = grid.dim();
  std::array<std::array<int, 4>, kMaxDim> idx{};
  std::array<std::array<T, 4>, kMaxDim> w{};
  for (int a = 0; a < n; ++a) {
    const int m = grid.shape[a];
    const double h = grid.periodic[a] ? (grid.hi[a] - grid.lo[a]) / m : (grid.hi[a] - grid.lo[a]) / (m - 1);
    T u = (x[a] - grid.lo[a]) / h;
    double base = std::floor(value_of(u));
    T s = u - base;
    w[a] = cubic_weights(s);
    for (int o = 0; o < 4; ++o) {
      long i = static_cast<long>(base) + o - 1;
      if (grid.periodic[a]) {
        i %= m;
        if (i < 0) i += m;
      } else {
        i = std::clamp<long>(i, 0, m - 1);
      }
      idx[a][o] = static_cast<int>(i);
    }
  }
  for (int c = 0; c < ncomp; ++c) out[c] = T(0.0);
  int total = 1;
  for (int a = 0; a < n; ++a) total *= 4;
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    std::size_t lin = 0;
    T weight(1.0);
    for (int a = 0; a < n; ++a) {
      int o = rem % 4;
      rem /= 4;
      lin = lin * grid.shape[a] + idx[a][o];
      weight = weight * w[a][o];
    }
    for (int c = 0; c < ncomp; ++c) out[c] += weight * values[lin * ncomp + c];
  }
}

}  // namespace detail

/// Tabulated symmetric matrix field with cubic interpolation. `values` holds
/// n*n row-major entries per grid node, nodes in row-major (first axis slowest).
class GridMatrixField : public detail::FieldImpl<GridMatrixField, MatrixField> {
 public:
  GridMatrixField(GridSpec grid, std::vector<double> values);
  int dim() const override { return grid_.dim(); }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    const int n = dim();
    detail::grid_interpolate(grid_, values_, n * n, x, out);
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

class GridVectorField : public detail::FieldImpl<GridVectorField, VectorField> {
 public:
  GridVectorField(GridSpec grid, std::vector<double> values);
  int dim() const override { return grid_.dim(); }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    detail::grid_interpolate(grid_, values_, dim(), x, out);
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

}  // namespace finsler
