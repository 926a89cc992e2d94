#include "finsler/tensors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <numbers>

#include "finsler/quadrature.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

namespace {

void check_point(const MetricModel& model, const Vec& x, const Vec& y) {
  if (x.size() != model.dim() || y.size() != model.dim()) throw InvalidArgument("dimension mismatch");
}

void check_nonzero(const Vec& y) {
  if (y.squaredNorm() == 0.0) throw InvalidArgument("tangent vector must be nonzero");
}

template <class T>
T squared_F(const MetricModel& m, const std::array<T, kMaxDim>& x, const std::array<T, kMaxDim>& y, int n) {
  T f = m.F(std::span<const T>(x.data(), n), std::span<const T>(y.data(), n));
  return f * f;
}

// Seeds for one D3 evaluation: first-level direction a on y, second-level b on
// y, third-level c on y (c_on_x == false) or on x.
void analytic_derivatives(const MetricModel& m, const Vec& x, const Vec& y, LocalTensors& t) {
  const int n = t.n;
  if (t.level == TensorLevel::metric) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        std::array<D2, kMaxDim> xs{}, ys{};
        for (int m2 = 0; m2 < n; ++m2) {
          xs[m2] = D2(x[m2]);
          ys[m2] = D2{D1{y[m2], m2 == i ? 1.0 : 0.0}, D1{m2 == j ? 1.0 : 0.0, 0.0}};
        }
        double h = squared_F(m, xs, ys, n).d.d;
        t.g(i, j) = t.g(j, i) = 0.5 * h;
      }
    }
    return;
  }
  const bool want_x = t.level == TensorLevel::full && !m.x_independent();
  for (int k = 0; k < 2 * n; ++k) {
    const bool on_x = k >= n;
    const int kk = on_x ? k - n : k;
    if (on_x && !want_x) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.dg_dx[kk](i, j) = 0.0;
      continue;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        std::array<D3, kMaxDim> xs{}, ys{};
        for (int c = 0; c < n; ++c) {
          const double a = c == i ? 1.0 : 0.0;
          const double b = c == j ? 1.0 : 0.0;
          const double cy = (!on_x && c == kk) ? 1.0 : 0.0;
          const double cx = (on_x && c == kk) ? 1.0 : 0.0;
          ys[c] = D3{D2{D1{y[c], a}, D1{b, 0.0}}, D2{D1{cy, 0.0}, D1{0.0, 0.0}}};
          xs[c] = D3{D2{D1{x[c], 0.0}, D1{0.0, 0.0}}, D2{D1{cx, 0.0}, D1{0.0, 0.0}}};
        }
        D3 r = squared_F(m, xs, ys, n);
        if (k == 0) t.g(i, j) = t.g(j, i) = 0.5 * r.v.d.d;
        double third = 0.5 * r.d.d.d;
        if (on_x)
          t.dg_dx[kk](i, j) = t.dg_dx[kk](j, i) = third;
        else
          t.dg_dy[kk](i, j) = t.dg_dy[kk](j, i) = third;
      }
    }
  }
}

// Central-difference Hessian of F^2 in y, halved.
Mat fd_g(const MetricModel& m, const Vec& x, const Vec& y, double h) {
  const int n = m.dim();
  Mat g(n, n);
  auto f2 = [&](const Vec& yy) {
    double f = m.F(x, yy);
    return f * f;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vec pp = y, pm = y, mp = y, mm = y;
      pp[i] += h, pp[j] += h;
      pm[i] += h, pm[j] -= h;
      mp[i] -= h, mp[j] += h;
      mm[i] -= h, mm[j] -= h;
      double v = (f2(pp) - f2(pm) - f2(mp) + f2(mm)) / (4.0 * h * h);
      g(i, j) = g(j, i) = 0.5 * v;
    }
  }
  return g;
}

constexpr double kThirdStep = 1e-3;

void fd_derivatives(const MetricModel& m, const Vec& x, const Vec& y, LocalTensors& t) {
  const int n = t.n;
  const double scale = std::max(1.0, y.norm());
  t.g = fd_g(m, x, y, m.fd_step() * scale);
  if (t.level == TensorLevel::metric) return;
  // Third derivatives use a coarser step for both the inner Hessian and the
  // outer difference; with the fine step the rounding error dominates.
  const double hy = kThirdStep * scale;
  for (int k = 0; k < n; ++k) {
    Vec yp = y, ym = y;
    yp[k] += hy;
    ym[k] -= hy;
    t.dg_dy[k] = (fd_g(m, x, yp, hy) - fd_g(m, x, ym, hy)) / (2.0 * hy);
  }
  const bool want_x = t.level == TensorLevel::full && !m.x_independent();
  for (int k = 0; k < n; ++k) {
    if (!want_x) {
      t.dg_dx[k] = Mat::Zero(n, n);
      continue;
    }
    Vec xp = x, xm = x;
    xp[k] += kThirdStep;
    xm[k] -= kThirdStep;
    t.dg_dx[k] = (fd_g(m, xp, y, hy) - fd_g(m, xm, y, hy)) / (2.0 * kThirdStep);
  }
}

}  // namespace

LocalTensors local_tensors(const MetricModel& model, const Vec& x, const Vec& y, TensorLevel level) {
  check_point(model, x, y);
  check_nonzero(y);
  LocalTensors t;
  t.n = model.dim();
  t.level = level;
  t.F = model.F(x, y);
  t.g = Mat::Zero(t.n, t.n);
  for (int k = 0; k < t.n; ++k) {
    t.dg_dy[k] = Mat::Zero(t.n, t.n);
    t.dg_dx[k] = Mat::Zero(t.n, t.n);
  }
  if (model.derivative_mode() == DerivativeMode::analytic)
    analytic_derivatives(model, x, y, t);
  else
    fd_derivatives(model, x, y, t);
  if (!t.g.allFinite()) throw NotPositiveDefinite("fundamental tensor is not finite");
  Eigen::LLT<Mat> llt(t.g);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("fundamental tensor is not positive definite");
  t.ginv = llt.solve(Mat::Identity(t.n, t.n));
  return t;
}

double eval_F(const MetricModel& model, const Vec& x, const Vec& y) {
  check_point(model, x, y);
  if (y.squaredNorm() == 0.0) return 0.0;
  return model.F(x, y);
}

Mat fundamental_tensor(const MetricModel& model, const Vec& x, const Vec& y) {
  return local_tensors(model, x, y, TensorLevel::metric).g;
}

Tensor3 cartan_tensor(const MetricModel& model, const Vec& x, const Vec& y) {
  LocalTensors t = local_tensors(model, x, y, TensorLevel::vertical);
  const int n = t.n;
  Tensor3 raw(n), out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) raw(i, j, k) = 0.5 * t.F * t.dg_dy[k](i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out(i, j, k) = (raw(i, j, k) + raw(i, k, j) + raw(j, k, i) + raw(j, i, k) + raw(k, i, j) + raw(k, j, i)) / 6.0;
  return out;
}

Vec legendre(const MetricModel& model, const Vec& x, const Vec& y) {
  check_point(model, x, y);
  if (y.squaredNorm() == 0.0) return Vec::Zero(model.dim());
  return fundamental_tensor(model, x, y) * y;
}

Vec legendre_inverse(const MetricModel& model, const Vec& x, const Vec& xi, double tol, int max_iter) {
  check_point(model, x, xi);
  if (xi.squaredNorm() == 0.0) throw InvalidArgument("legendre_inverse: covector must be nonzero");
  auto phi = [&](const Vec& y) {
    double f = model.F(x, y);
    return 0.5 * f * f - xi.dot(y);
  };
  // Start from the Riemannian guess built on g at xi viewed as a vector.
  Vec y = fundamental_tensor(model, x, xi).ldlt().solve(xi);
  for (int it = 0; it < max_iter; ++it) {
    LocalTensors t = local_tensors(model, x, y, TensorLevel::metric);
    Vec grad = t.g * y - xi;
    if (grad.norm() <= tol * xi.norm()) return y;
    // The Hessian of F^2/2 is g_y itself: the Cartan term vanishes against y.
    Vec step = -t.ginv * grad;
    if (step.norm() <= tol * std::max(1.0, y.norm())) return y + step;
    double s = 1.0;
    const double p0 = phi(y);
    const double slope = grad.dot(step);
    Vec trial = y + step;
    while (s > 1e-8) {
      trial = y + s * step;
      if (trial.squaredNorm() > 0.0 && phi(trial) <= p0 + 1e-4 * s * slope + 1e-15 * std::abs(p0)) break;
      s *= 0.5;
    }
    y = trial;
  }
  throw MaxIterExceeded("legendre_inverse: Newton iteration did not converge");
}

Mat average_metric(const MetricModel& model, const Vec& x, int quadrature_order) {
  const int n = model.dim();
  if (x.size() != n) throw InvalidArgument("dimension mismatch");
  if (quadrature_order < 8) throw InvalidArgument("degenerate quadrature: angular order must be >= 8");
  if (n == 1) return fundamental_tensor(model, x, Vec::Ones(1));
  SphereRule rule = sphere_rule(n, quadrature_order);
  Mat acc = Mat::Zero(n, n);
  double vol = 0.0;
  for (std::size_t q = 0; q < rule.dirs.size(); ++q) {
    const Vec& u = rule.dirs[q];
    LocalTensors t = local_tensors(model, x, u, TensorLevel::metric);
    const Vec grad = t.g * u / t.F;
    const int m = static_cast<int>(rule.tangents[q].size());
    std::vector<Vec> ya;
    for (const Vec& du : rule.tangents[q]) ya.push_back(du / t.F - u * grad.dot(du) / (t.F * t.F));
    Mat G(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) G(a, b) = ya[a].dot(t.g * ya[b]);
    const double dnu = std::sqrt(std::max(0.0, G.determinant())) * rule.weights[q];
    acc += t.g * dnu;
    vol += dnu;
  }
  if (!(vol > 0.0)) throw NumericalFailure("average_metric: indicatrix has zero measure");
  Mat out = acc / vol;
  return 0.5 * (out + out.transpose());
}

std::vector<Vec> indicatrix_sample(const MetricModel& model, const Vec& x, std::size_t count, std::uint64_t seed) {
  if (x.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = sample_rng(seed, 0x1d1c, i);
    out.push_back(random_unit(model, x, rng));
  }
  return out;
}

const char* to_string(Measure m) {
  return m == Measure::busemann_hausdorff ? "busemann_hausdorff" : "holmes_thompson";
}

double volume_density(const MetricModel& model, const Vec& x, Measure measure, int quadrature_order) {
  const int n = model.dim();
  if (x.size() != n) throw InvalidArgument("dimension mismatch");
  // Radial integration reduces both measures to sphere integrals:
  //   Leb(B)          = (1/n) int F(u)^{-n} dsigma
  //   int_B det g dy  = (1/n) int det g(u) F(u)^{-n} dsigma
  double leb = 0.0, ht = 0.0;
  auto add = [&](const Vec& u, double w) {
    const double f = model.F(x, u);
    const double fn = std::pow(f, -n);
    leb += w * fn / n;
    if (measure == Measure::holmes_thompson) ht += w * fn * fundamental_tensor(model, x, u).determinant() / n;
  };
  if (n == 1) {
    add(Vec::Constant(1, 1.0), 1.0);
    add(Vec::Constant(1, -1.0), 1.0);
  } else {
    SphereRule rule = sphere_rule(n, quadrature_order);
    for (std::size_t q = 0; q < rule.dirs.size(); ++q) add(rule.dirs[q], rule.area_weights[q]);
  }
  const double omega = unit_ball_volume(n);
  if (measure == Measure::busemann_hausdorff) return omega / leb;
  return ht / omega;
}

double volume(const MetricModel& model, Measure measure, int quadrature_order, Exec exec) {
  const Chart& c = model.chart();
  if (!c.compact) throw InvalidArgument("volume: chart '" + model.name() + "' has no compact fundamental domain");
  if (quadrature_order < 1) throw InvalidArgument("volume: quadrature order must be positive");
  const int n = c.dim;
  double box = 1.0;
  for (int i = 0; i < n; ++i) box *= c.hi[i] - c.lo[i];
  if (model.x_independent()) return box * volume_density(model, c.lo, measure);
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(quadrature_order);
  const double cell = box / static_cast<double>(cells);
  double sum = ordered_sum<double>(
      cells,
      [&](std::size_t idx) {
        Vec x(n);
        std::size_t r = idx;
        for (int i = 0; i < n; ++i) {
          std::size_t k = r % quadrature_order;
          r /= quadrature_order;
          x[i] = c.lo[i] + (c.hi[i] - c.lo[i]) * (static_cast<double>(k) + 0.5) / quadrature_order;
        }
        return volume_density(model, x, measure);
      },
      0.0, exec);
  return sum * cell;
}

}  // namespace finsler
