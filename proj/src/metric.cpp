#include "finsler/metric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <utility>

namespace finsler {

bool Chart::any_periodic() const {
  for (int i = 0; i < dim; ++i)
    if (periodic(i)) return true;
  return false;
}

ChartPoint Chart::reduce(const Vec& x) const {
  if (x.size() != dim) throw InvalidArgument("chart point has the wrong dimension");
  ChartPoint r = x;
  for (int i = 0; i < dim; ++i) {
    if (!periodic(i)) continue;
    double v = std::fmod(r[i], periods[i]);
    if (v < 0.0) v += periods[i];
    if (v >= periods[i]) v = 0.0;
    r[i] = v;
  }
  return r;
}

MetricModel::MetricModel(Chart chart, std::string name) : chart_(std::move(chart)), name_(std::move(name)) {
  if (chart_.dim < 1 || chart_.dim > kMaxDim) throw InvalidArgument("metric dimension must be in [1, 4]");
  if (chart_.periods.size() != chart_.dim || chart_.lo.size() != chart_.dim || chart_.hi.size() != chart_.dim)
    throw InvalidArgument("chart metadata does not match the dimension");
}

D2 MetricModel::F(std::span<const D2>, std::span<const D2>) const {
  throw NumericalFailure("metric '" + name_ + "' has no dual-number evaluation");
}

D3 MetricModel::F(std::span<const D3>, std::span<const D3>) const {
  throw NumericalFailure("metric '" + name_ + "' has no dual-number evaluation");
}

double MetricModel::F(const Vec& x, const Vec& y) const {
  if (x.size() != dim() || y.size() != dim()) throw InvalidArgument("dimension mismatch in F(x, y)");
  return F(std::span<const double>(x.data(), dim()), std::span<const double>(y.data(), dim()));
}

void MetricModel::set_derivative_mode(DerivativeMode mode, double fd_step) {
  if (mode == DerivativeMode::analytic && !has_dual_evaluation())
    throw InvalidArgument("metric '" + name_ + "' supports finite differences only");
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
  mode_ = mode;
  fd_step_ = fd_step;
}

RandersMetric::RandersMetric(Chart chart, std::string name, MatrixFieldPtr a, VectorFieldPtr b)
    : MetricModel(std::move(chart), std::move(name)), a_(std::move(a)), b_(std::move(b)) {
  if (!a_ || a_->dim() != dim()) throw InvalidArgument("randers: a_ij field dimension mismatch");
  if (b_ && b_->dim() != dim()) throw InvalidArgument("randers: b_i field dimension mismatch");
  if (b_) {
    double bn = max_b_norm(this->chart(), *a_, *b_);
    if (!(bn < 1.0)) throw InvalidArgument("randers: ||b||_a must be < 1 (got " + std::to_string(bn) + ")");
  }
}

template <class T>
T RandersMetric::evaluate(std::span<const T> x, std::span<const T> y) const {
  const int n = dim();
  std::array<T, kMaxDim * kMaxDim> a{};
  a_->eval(x, std::span<T>(a.data(), n * n));
  T q(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q += a[i * n + j] * y[i] * y[j];
  T f = sqrt(q);
  if (b_) {
    std::array<T, kMaxDim> b{};
    b_->eval(x, std::span<T>(b.data(), n));
    for (int i = 0; i < n; ++i) f += b[i] * y[i];
  }
  return f;
}

double RandersMetric::F(std::span<const double> x, std::span<const double> y) const { return evaluate(x, y); }
D2 RandersMetric::F(std::span<const D2> x, std::span<const D2> y) const { return evaluate(x, y); }
D3 RandersMetric::F(std::span<const D3> x, std::span<const D3> y) const { return evaluate(x, y); }

bool RandersMetric::x_independent() const { return a_->is_constant() && (!b_ || b_->is_constant()); }

double RandersMetric::max_b_norm(const Chart& chart, const MatrixField& a, const VectorField& b) {
  const int n = chart.dim;
  const int per_axis = (a.is_constant() && b.is_constant()) ? 1 : 9;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  double worst = 0.0;
  for (int flat = 0; flat < total; ++flat) {
    Vec x(n);
    int rem = flat;
    for (int i = 0; i < n; ++i) {
      int k = rem % per_axis;
      rem /= per_axis;
      x[i] = chart.lo[i] + (chart.hi[i] - chart.lo[i]) * (k + 0.5) / per_axis;
    }
    Mat am = a.at(x);
    Vec bv = b.at(x);
    Eigen::LLT<Mat> llt(am);
    if (llt.info() != Eigen::Success) throw InvalidArgument("randers: a_ij is not positive definite");
    worst = std::max(worst, std::sqrt(bv.dot(llt.solve(bv))));
  }
  return worst;
}

}  // namespace finsler
