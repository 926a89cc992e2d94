#pragma once

#include <memory>
#include <span>
#include <string>

#include "finsler/dual.hpp"
#include "finsler/fields.hpp"
#include "finsler/types.hpp"

namespace finsler {

/// Chart coordinates; periodic coordinates are kept reduced into [0, period).
using ChartPoint = Vec;

enum class DerivativeMode {
  analytic,           // exact y/x derivatives by nested dual numbers
  finite_difference,  // central differences of F^2 with a configurable step
};

/// Chart metadata shared by every metric: dimension, periodicity and the
/// coordinate box used for sampling and for volume integration.
struct Chart {
  int dim = 0;
  Vec periods;  // 0 marks a non-periodic coordinate
  Vec lo;       // sampling / integration box
  Vec hi;
  /// Every coordinate periodic, or an explicit bounded domain was given.
  bool compact = false;

  bool periodic(int i) const { return periods[i] > 0.0; }
  bool any_periodic() const;
  ChartPoint reduce(const Vec& x) const;
};

/// A Finsler metric on a single chart. Subclasses provide F over double and,
/// when analytic derivatives are available, over the dual types as well.
class MetricModel {
 public:
  virtual ~MetricModel() = default;

  int dim() const { return chart_.dim; }
  const Chart& chart() const { return chart_; }
  const std::string& name() const { return name_; }

  DerivativeMode derivative_mode() const { return mode_; }
  /// Relative y-step for finite-difference mode; the absolute step is
  /// fd_step * max(1, |y|).
  double fd_step() const { return fd_step_; }

  bool claimed_berwald() const { return claimed_berwald_; }
  bool claimed_reversible() const { return claimed_reversible_; }
  /// True when F does not depend on x at all (a Minkowski norm on the chart).
  virtual bool x_independent() const { return false; }

  virtual double F(std::span<const double> x, std::span<const double> y) const = 0;
  virtual bool has_dual_evaluation() const { return false; }
  virtual D2 F(std::span<const D2> x, std::span<const D2> y) const;
  virtual D3 F(std::span<const D3> x, std::span<const D3> y) const;

  double F(const Vec& x, const Vec& y) const;

  void set_derivative_mode(DerivativeMode mode, double fd_step = 1e-5);
  void set_name(std::string name) { name_ = std::move(name); }
  void set_claims(bool berwald, bool reversible) {
    claimed_berwald_ = berwald;
    claimed_reversible_ = reversible;
  }

 protected:
  MetricModel(Chart chart, std::string name);

 private:
  Chart chart_;
  std::string name_;
  DerivativeMode mode_ = DerivativeMode::analytic;
  double fd_step_ = 1e-5;
  bool claimed_berwald_ = false;
  bool claimed_reversible_ = false;
};

using ModelPtr = std::shared_ptr<const MetricModel>;

/// F(x, y) = sqrt(a_ij(x) y^i y^j) + b_i(x) y^i. With b = 0 this is a
/// Riemannian metric; euclidean, sphere and torus charts are all built on it.
class RandersMetric : public MetricModel {
 public:
  RandersMetric(Chart chart, std::string name, MatrixFieldPtr a, VectorFieldPtr b);

  double F(std::span<const double> x, std::span<const double> y) const override;
  D2 F(std::span<const D2> x, std::span<const D2> y) const override;
  D3 F(std::span<const D3> x, std::span<const D3> y) const override;
  using MetricModel::F;

  bool has_dual_evaluation() const override { return true; }
  bool x_independent() const override;
  bool is_riemannian() const { return b_ == nullptr; }

  const MatrixField& a() const { return *a_; }
  const VectorField* b() const { return b_.get(); }

  /// max over the probe points of ||b||_a; the constructor rejects >= 1.
  static double max_b_norm(const Chart& chart, const MatrixField& a, const VectorField& b);

 private:
  template <class T>
  T evaluate(std::span<const T> x, std::span<const T> y) const;

  MatrixFieldPtr a_;
  VectorFieldPtr b_;
};

}  // namespace finsler
