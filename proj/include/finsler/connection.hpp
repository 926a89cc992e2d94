#pragma once

// Formal Christoffel symbols, nonlinear connection, Chern connection
// coefficients, geodesic spray and the Berwald defect.

#include <cstdint>

#include "finsler/tensors.hpp"

namespace finsler {

/// gamma^i_jk, N^i_j and the Chern Gamma^i_jk at one (x, y).
struct ConnectionCoeffs {
  Vec x;
  Vec y;
  Tensor3 gamma;  // gamma(i, j, k) = gamma^i_jk
  Mat N;          // N(i, j) = N^i_j
  Tensor3 Gamma;  // Gamma(i, j, k) = Gamma^i_jk, symmetric in (j, k)
};

ConnectionCoeffs connection(const MetricModel& model, const Vec& x, const Vec& y);
/// Same, reusing already evaluated tensors (level full).
ConnectionCoeffs connection(const LocalTensors& t, const Vec& x, const Vec& y);

Tensor3 formal_christoffel(const MetricModel& model, const Vec& x, const Vec& y);
Mat nonlinear_connection(const MetricModel& model, const Vec& x, const Vec& y);
Tensor3 chern_coefficients(const MetricModel& model, const Vec& x, const Vec& y);

/// G^i with geodesics solving x'' = -2 G(x, x').
Vec geodesic_spray(const MetricModel& model, const Vec& x, const Vec& y);

/// max_ijk |Gamma^i_jk(x, y1) - Gamma^i_jk(x, y2)|.
double berwald_defect(const MetricModel& model, const Vec& x, const Vec& y1, const Vec& y2);

struct BerwaldSweep {
  double max_defect = 0.0;
  bool numerically_berwald = false;  // max_defect < threshold
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Defect over `samples` random (x, y1, y2) with y on the indicatrix.
BerwaldSweep berwald_sweep(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                           double threshold = 1e-6, Exec exec = Exec::parallel);

/// Spray vanishes at sampled points (locally Minkowski chart).
bool has_zero_spray(const MetricModel& model, std::size_t samples = 64, std::uint64_t seed = 1,
                    double tol = 1e-10);

}  // namespace finsler
