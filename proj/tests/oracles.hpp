#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the library's derivative or connection code; models are only evaluated
// through F(x, y).

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>

#include "finsler/metric.hpp"

namespace oracle {

using finsler::Mat;
using finsler::Vec;

constexpr double pi = std::numbers::pi;

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

inline double f2(const finsler::MetricModel& m, const Vec& x, const Vec& y) {
  double f = m.F(x, y);
  return f * f;
}

/// 1/2 d^2 F^2 / dy_i dy_j by central differences.
inline Mat fd_hessian(const finsler::MetricModel& m, const Vec& x, const Vec& y, double h) {
  const int n = m.dim();
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec pp = y, pm = y, mp = y, mm = y;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      g(i, j) = 0.5 * (f2(m, x, pp) - f2(m, x, pm) - f2(m, x, mp) + f2(m, x, mm)) / (4 * h * h);
    }
  return g;
}

/// (F/4) d^3 F^2 / dy_i dy_j dy_k by a third-order central stencil.
inline double fd_cartan(const finsler::MetricModel& m, const Vec& x, const Vec& y, int i, int j, int k,
                        double h) {
  Vec yp = y, ym = y;
  yp[k] += h;
  ym[k] -= h;
  double d = (fd_hessian(m, x, yp, h)(i, j) - fd_hessian(m, x, ym, h)(i, j)) / (2 * h);
  return 0.5 * m.F(x, y) * d;
}

/// Unit sphere in stereographic coordinates: u -> point of S^2 in R^3.
inline Eigen::Vector3d stereo_to_sphere(const Vec& u) {
  double s = u.squaredNorm();
  return Eigen::Vector3d(2 * u[0], 2 * u[1], 1 - s) / (1 + s);
}

inline Vec sphere_to_stereo(const Eigen::Vector3d& p) {
  Vec u(2);
  u << p[0] / (1 + p[2]), p[1] / (1 + p[2]);
  return u;
}

/// Push a chart tangent vector at u to R^3.
inline Eigen::Vector3d stereo_push(const Vec& u, const Vec& v) {
  const double h = 1e-6;
  return (stereo_to_sphere(u + h * v) - stereo_to_sphere(u - h * v)) / (2 * h);
}

/// Great-circle distance on the unit sphere between chart points.
inline double sphere_distance(const Vec& a, const Vec& b) {
  Eigen::Vector3d p = stereo_to_sphere(a), q = stereo_to_sphere(b);
  return std::atan2(p.cross(q).norm(), p.dot(q));
}

/// Closed-form exp on the unit sphere, chart in / chart out.
inline Vec sphere_exp(const Vec& u, const Vec& v) {
  Eigen::Vector3d p = stereo_to_sphere(u), w = stereo_push(u, v);
  double t = w.norm();
  if (t == 0) return u;
  Eigen::Vector3d q = std::cos(t) * p + std::sin(t) * w / t;
  return sphere_to_stereo(q);
}

/// Closed-form log on the unit sphere returned as a R^3 tangent vector at p.
inline Eigen::Vector3d sphere_log3(const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
  Eigen::Vector3d w = q - p.dot(q) * p;
  double wn = w.norm();
  double ang = std::atan2(wn, p.dot(q));
  if (wn == 0) return Eigen::Vector3d::Zero();
  return ang * w / wn;
}

/// Simple bisection to absolute tolerance on [a, b] with f(a), f(b) of opposite sign.
inline double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a);
  for (int i = 0; i < 400 && b - a > tol; ++i) {
    double c = 0.5 * (a + b);
    double fc = f(c);
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle

namespace oracle {

/// Spray from the Euler-Lagrange equations of L = F^2/2, all derivatives by
/// central differences: x'' = g^{-1}(dL/dx - d^2L/dydx y), G = -x''/2.
inline Vec euler_lagrange_spray(const finsler::MetricModel& m, const Vec& x, const Vec& y) {
  const int n = m.dim();
  const double h = 1e-4;
  auto L = [&](const Vec& xx, const Vec& yy) { return 0.5 * f2(m, xx, yy); };
  Mat g = fd_hessian(m, x, y, 1e-4);
  Vec Lx(n);
  Mat Lyx(n, n);  // Lyx(i, k) = d^2 L / dy^i dx^k
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    Lx[k] = (L(xp, y) - L(xm, y)) / (2 * h);
    for (int i = 0; i < n; ++i) {
      Vec yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      Lyx(i, k) = (L(xp, yp) - L(xp, ym) - L(xm, yp) + L(xm, ym)) / (4 * h * h);
    }
  }
  Vec acc = g.ldlt().solve(Lx - Lyx * y);
  return -0.5 * acc;
}

}  // namespace oracle
