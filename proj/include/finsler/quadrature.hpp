#pragma once

#include <functional>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

/// Gauss-Legendre nodes and weights on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int order, double a, double b);

/// Quadrature on the Euclidean unit sphere S^{n-1}, n in {2, 3}.
/// `tangents[q]` are the coordinate derivatives of the parametrization
/// (d/dtheta, and d/dphi in 3D), so their Gram determinant gives the area
/// element; `weights` are parameter-space weights (no area factor) and
/// `area_weights` already include it.
struct SphereRule {
  int dim = 0;
  std::vector<Vec> dirs;
  std::vector<std::vector<Vec>> tangents;
  std::vector<double> weights;
  std::vector<double> area_weights;
};
/// Uniform angular grid of `order` points in 2D; Gauss-Legendre in theta
/// (order nodes) times a uniform phi grid (2*order nodes) in 3D.
SphereRule sphere_rule(int dim, int order);

/// Adaptive Gauss-Kronrod on [a, b] to the requested absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12);

/// Euclidean unit-ball volume omega_n and unit-sphere area vol(S^m).
double unit_ball_volume(int n);
double unit_sphere_area(int m);

}  // namespace finsler
