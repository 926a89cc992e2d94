#include "finsler/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace finsler {

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    double v0 = es.eigenvectors()(0, i);
    rule.nodes[i] = a + half * (es.eigenvalues()[i] + 1.0);
    rule.weights[i] = 2.0 * v0 * v0 * half;
  }
  return rule;
}

SphereRule sphere_rule(int dim, int order) {
  if (order < 8) throw InvalidArgument("degenerate quadrature: angular order must be >= 8");
  SphereRule r;
  r.dim = dim;
  constexpr double pi = std::numbers::pi;
  if (dim == 2) {
    const double w = 2.0 * pi / order;
    for (int i = 0; i < order; ++i) {
      double th = w * i;
      Vec u(2), du(2);
      u << std::cos(th), std::sin(th);
      du << -std::sin(th), std::cos(th);
      r.dirs.push_back(u);
      r.tangents.push_back({du});
      r.weights.push_back(w);
      r.area_weights.push_back(w);
    }
    return r;
  }
  if (dim == 3) {
    QuadratureRule gl = gauss_legendre(order, 0.0, pi);
    const int nphi = 2 * order;
    const double wphi = 2.0 * pi / nphi;
    for (int i = 0; i < order; ++i) {
      double th = gl.nodes[i];
      double st = std::sin(th), ct = std::cos(th);
      for (int j = 0; j < nphi; ++j) {
        double ph = wphi * j;
        double sp = std::sin(ph), cp = std::cos(ph);
        Vec u(3), dth(3), dph(3);
        u << st * cp, st * sp, ct;
        dth << ct * cp, ct * sp, -st;
        dph << -st * sp, st * cp, 0.0;
        r.dirs.push_back(u);
        r.tangents.push_back({dth, dph});
        r.weights.push_back(gl.weights[i] * wphi);
        r.area_weights.push_back(gl.weights[i] * wphi * st);
      }
    }
    return r;
  }
  throw InvalidArgument("angular quadrature supports dimensions 2 and 3");
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol);
  // Map to [0, 1]: the library's stopping test mixes scaled and unscaled
  // error terms and never terminates on very short or very long intervals.
  const double h = b - a;
  auto g = [&](double u) { return f(a + h * u); };
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 20, abs_tol / std::max(1.0, h), &err);
  return h * v;
}

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

double unit_sphere_area(int m) {
  // vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

}  // namespace finsler
