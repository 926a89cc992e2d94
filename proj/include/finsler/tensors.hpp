#pragma once

// Pointwise tensors of a Finsler metric: F, the fundamental tensor g_y, the
// Cartan tensor, the Legendre transform, the average Riemannian metric and
// the Busemann-Hausdorff / Holmes-Thompson volume densities.

#include <cstdint>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

/// How many derivatives of g a LocalTensors evaluation carries.
enum class TensorLevel {
  metric,    // F, g, g^{-1}
  vertical,  // + dg/dy
  full,      // + dg/dx
};

/// Everything the connection needs at one point (x, y) of the slit tangent bundle.
struct LocalTensors {
  int n = 0;
  double F = 0.0;
  Mat g;
  Mat ginv;
  std::array<Mat, kMaxDim> dg_dy;  // dg_dy[k](i, j) = d g_ij / d y^k
  std::array<Mat, kMaxDim> dg_dx;  // dg_dx[k](i, j) = d g_ij / d x^k
  TensorLevel level = TensorLevel::metric;
};

/// Throws InvalidArgument for y = 0 or dimension mismatch and
/// NotPositiveDefinite when g_y fails its Cholesky factorization.
LocalTensors local_tensors(const MetricModel& model, const Vec& x, const Vec& y,
                           TensorLevel level = TensorLevel::full);

double eval_F(const MetricModel& model, const Vec& x, const Vec& y);

/// g_ij(x, y) = 1/2 d^2 F^2 / dy^i dy^j.
Mat fundamental_tensor(const MetricModel& model, const Vec& x, const Vec& y);

/// A_ijk(x, y) = F/4 d^3 F^2 / dy^i dy^j dy^k, symmetrized over all index orders.
Tensor3 cartan_tensor(const MetricModel& model, const Vec& x, const Vec& y);

/// y -> g_y(y, .), with 0 -> 0.
Vec legendre(const MetricModel& model, const Vec& x, const Vec& y);

/// Inverse Legendre transform by damped Newton on F^2/2 - <xi, y>.
/// Throws MaxIterExceeded when the iteration budget runs out.
Vec legendre_inverse(const MetricModel& model, const Vec& x, const Vec& xi, double tol = 1e-12,
                     int max_iter = 100);

/// Average of g_y over the indicatrix S_xM against the measure induced by g_y.
Mat average_metric(const MetricModel& model, const Vec& x, int quadrature_order = 64);

/// `count` points of S_xM, deterministic in (seed, index).
std::vector<Vec> indicatrix_sample(const MetricModel& model, const Vec& x, std::size_t count, std::uint64_t seed);

enum class Measure { busemann_hausdorff, holmes_thompson };

const char* to_string(Measure m);

/// Density of the measure w.r.t. coordinate Lebesgue measure at x.
/// BH: omega_n / Leb(B_xM).  HT: (1/omega_n) * int_{B_xM} det g_y dy.
double volume_density(const MetricModel& model, const Vec& x, Measure measure, int quadrature_order = 128);

/// Total volume over the chart's compact fundamental domain.
double volume(const MetricModel& model, Measure measure, int quadrature_order = 64, Exec exec = Exec::parallel);

}  // namespace finsler
