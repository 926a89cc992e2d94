#include "finsler/connection.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/sampling.hpp"

namespace finsler {

namespace {

// 1/2 g^il (d_k g_jl + d_j g_kl - d_l g_jk) for a family of derivative matrices.
Tensor3 christoffel_from(const Mat& ginv, const std::array<Mat, kMaxDim>& d, int n) {
  Tensor3 lower(n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v = 0.5 * (d[k](j, l) + d[j](k, l) - d[l](j, k));
        lower(l, j, k) = v;
        lower(l, k, j) = v;
      }
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += ginv(i, l) * lower(l, j, k);
        out(i, j, k) = v;
        out(i, k, j) = v;
      }
  return out;
}

}  // namespace

ConnectionCoeffs connection(const LocalTensors& t, const Vec& x, const Vec& y) {
  if (t.level != TensorLevel::full) throw InvalidArgument("connection needs full local tensors");
  const int n = t.n;
  ConnectionCoeffs c;
  c.x = x;
  c.y = y;
  c.gamma = christoffel_from(t.ginv, t.dg_dx, n);

  // gamma^k_rs y^r y^s
  Vec gyy = Vec::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) gyy[k] += c.gamma(k, r, s) * y[r] * y[s];

  // A^i_jk / F = 1/2 g^il dg_lj/dy^k; contracted with gyy over k.
  Mat ag = Mat::Zero(n, n);  // ag(l, j) = sum_k 1/2 dg_lj/dy^k gyy^k
  for (int k = 0; k < n; ++k) ag += 0.5 * gyy[k] * t.dg_dy[k];
  Mat ginv_ag = t.ginv * ag;
  c.N = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += c.gamma(i, j, k) * y[k];
      c.N(i, j) = v - ginv_ag(i, j);
    }

  // delta_k g_ij = d g_ij/dx^k - N^m_k d g_ij/dy^m
  std::array<Mat, kMaxDim> dh;
  for (int k = 0; k < n; ++k) {
    dh[k] = t.dg_dx[k];
    for (int m = 0; m < n; ++m) dh[k] -= c.N(m, k) * t.dg_dy[m];
  }
  c.Gamma = christoffel_from(t.ginv, dh, n);
  return c;
}

ConnectionCoeffs connection(const MetricModel& model, const Vec& x, const Vec& y) {
  return connection(local_tensors(model, x, y, TensorLevel::full), x, y);
}

Tensor3 formal_christoffel(const MetricModel& model, const Vec& x, const Vec& y) {
  return connection(model, x, y).gamma;
}

Mat nonlinear_connection(const MetricModel& model, const Vec& x, const Vec& y) {
  return connection(model, x, y).N;
}

Tensor3 chern_coefficients(const MetricModel& model, const Vec& x, const Vec& y) {
  return connection(model, x, y).Gamma;
}

Vec geodesic_spray(const MetricModel& model, const Vec& x, const Vec& y) {
  const int n = model.dim();
  if (x.size() != n || y.size() != n) throw InvalidArgument("dimension mismatch");
  if (y.squaredNorm() == 0.0) return Vec::Zero(n);
  if (model.x_independent()) return Vec::Zero(n);
  Tensor3 gamma = formal_christoffel(model, x, y);
  return 0.5 * gamma.contract23(y, y);
}

double berwald_defect(const MetricModel& model, const Vec& x, const Vec& y1, const Vec& y2) {
  return (chern_coefficients(model, x, y1) - chern_coefficients(model, x, y2)).max_abs();
}

BerwaldSweep berwald_sweep(const MetricModel& model, std::size_t samples, std::uint64_t seed, double threshold,
                           Exec exec) {
  auto defects = map_indexed<double>(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, 0xbe5, i);
        Vec x = random_point(model, rng);
        Vec y1 = random_unit(model, x, rng);
        Vec y2 = random_unit(model, x, rng);
        return berwald_defect(model, x, y1, y2);
      },
      exec);
  BerwaldSweep s;
  s.samples = samples;
  s.seed = seed;
  for (double d : defects) s.max_defect = std::max(s.max_defect, d);
  s.numerically_berwald = s.max_defect < threshold;
  return s;
}

bool has_zero_spray(const MetricModel& model, std::size_t samples, std::uint64_t seed, double tol) {
  if (model.x_independent()) return true;
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = sample_rng(seed, 0x5b7, i);
    Vec x = random_point(model, rng);
    Vec y = random_unit(model, x, rng);
    if (geodesic_spray(model, x, y).norm() > tol) return false;
  }
  return true;
}

}  // namespace finsler
