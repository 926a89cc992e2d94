#pragma once

// Built-in metric catalog.

#include "finsler/metric.hpp"

namespace finsler::catalog {

/// Flat R^n; sampling box [0,1]^n, which is also the volume domain.
ModelPtr euclidean(int n);

/// Riemannian metric a_ij(x). `periods` entries of 0 mark non-periodic axes.
ModelPtr riemannian(MatrixFieldPtr a, Vec periods, Vec lo, Vec hi, bool compact,
                    std::string name = "riemannian");

/// Randers metric sqrt(a(y,y)) + b(y); rejects ||b||_a >= 1 on the probe grid.
ModelPtr randers(MatrixFieldPtr a, VectorFieldPtr b, Vec periods, Vec lo, Vec hi, bool compact,
                 std::string name = "randers");

/// Unit 2-sphere in polar coordinates (theta, phi), phi periodic.
/// Sampling box keeps theta away from the coordinate poles.
ModelPtr sphere_polar();

/// Unit n-sphere in stereographic coordinates (north pole at the origin).
ModelPtr sphere_stereographic(int n = 2);

/// Flat product torus, periods 2*pi on every axis.
ModelPtr flat_torus(int n = 2);

/// F_n = alpha + (1 - 1/n_param) dtheta^1 on the flat torus with periods 2*pi;
/// a Berwald metric with reversibility 2 n_param - 1.
ModelPtr berwald_torus(int n_param, int dim = 2);

/// Flat torus with a non-parallel drift: F = |y| + eps sin(theta^2) dtheta^1.
/// Not Berwald.
ModelPtr randers_shear_torus(double eps = 0.3);

/// Small non-flat conformal perturbation of the flat torus,
/// a = (1 + eps cos theta^1) I, with a constant 1-form b = (b1, 0).
ModelPtr randers_perturbed_torus(double eps = 0.1, double b1 = 0.1);

}  // namespace finsler::catalog
