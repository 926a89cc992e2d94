#pragma once

// Geodesics, exponential map and its inverse, parallel transport, Jacobi
// fields and curvature along geodesics. Covariant derivatives along a curve
// use the curve velocity as reference vector: D_T X = dX/dt + Gamma(x, T)(X, T).

#include <array>
#include <vector>

#include "finsler/connection.hpp"

namespace finsler {

struct GeodesicSegment {
  std::vector<double> t;
  std::vector<ChartPoint> xs;  // reduced into the chart's periods
  std::vector<Vec> lifted;     // the same positions without reduction
  std::vector<Vec> vs;
  double speed = 0.0;  // F(x0, y0)
  int steps() const { return static_cast<int>(t.size()) - 1; }
};

struct TransportFrame {
  GeodesicSegment geodesic;
  std::vector<Vec> X;
};

struct JacobiSolution {
  GeodesicSegment geodesic;
  std::vector<Vec> J;
  std::vector<Vec> Jp;  // covariant derivative D_T J
};

/// Step count used when callers pass steps <= 0: about 100 steps per unit length.
int default_steps(double length);

/// Fixed-step RK4 on x'' = -2G(x, x'). Throws InvalidArgument for y0 = 0 or
/// steps < 8 and IntegrationFailure when the state stops being finite.
GeodesicSegment integrate_geodesic(const MetricModel& model, const Vec& x0, const Vec& y0, double t_end,
                                   int steps = 0);

ChartPoint exp_map(const MetricModel& model, const Vec& x, const Vec& v, int steps = 0);

/// Damped Newton shooting for v with exp_x(v) = q. The Jacobian of the
/// endpoint map comes from Jacobi fields. On periodic charts the initial
/// guess is the minimal-F chord among the nearest deck translates of q.
Vec exp_inverse(const MetricModel& model, const Vec& x, const Vec& q, double tol = 1e-10, int max_iter = 50);

/// d(p, q) = F(p, exp_p^{-1} q); not symmetric in general.
double distance(const MetricModel& model, const Vec& p, const Vec& q, double tol = 1e-10);

/// Deck translates of q - x (every periodic axis shifted by -1, 0, +1
/// periods) sorted by increasing F(x, .).
std::vector<Vec> chord_candidates(const MetricModel& model, const Vec& x, const Vec& q);

TransportFrame parallel_transport(const MetricModel& model, const GeodesicSegment& geodesic, const Vec& X0);

/// R(i, j, k, l) = R_j^i_kl at (x, y).
struct CurvatureTensor {
  int n = 0;
  alignas(16) std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> data{};
  double& operator()(int i, int j, int k, int l) { return data[((i * kMaxDim + j) * kMaxDim + k) * kMaxDim + l]; }
  double operator()(int i, int j, int k, int l) const {
    return data[((i * kMaxDim + j) * kMaxDim + k) * kMaxDim + l];
  }
};

/// delta_k Gamma^i_jl - delta_l Gamma^i_jk + Gamma^i_hk Gamma^h_jl - Gamma^i_hl Gamma^h_jk;
/// the horizontal derivatives are central differences along (e_k, -N e_k).
CurvatureTensor curvature_tensor(const MetricModel& model, const Vec& x, const Vec& y);

/// Matrix of V -> R_y(V)^i = y^j R_j^i_kl V^k y^l.
Mat curvature_matrix(const MetricModel& model, const Vec& x, const Vec& y);
Mat curvature_matrix(const CurvatureTensor& R, const Vec& y);

Vec curvature_operator(const MetricModel& model, const Vec& x, const Vec& y, const Vec& V);

/// g_y(R_y V, V) / (g_y(y,y) g_y(V,V) - g_y(y,V)^2). Throws DegenerateFlag
/// when the denominator is below eps * F(y)^2 * F(V)^2.
double flag_curvature(const MetricModel& model, const Vec& x, const Vec& y, const Vec& V, double eps = 1e-10);

/// g_y(v^j v^k (Gamma^i_jk(x, v) - Gamma^i_jk(x, y)), y) for y, v on S_xM.
double t_curvature(const MetricModel& model, const Vec& x, const Vec& y, const Vec& v);

JacobiSolution jacobi_field(const MetricModel& model, const GeodesicSegment& geodesic, const Vec& J0, const Vec& Jp0);

/// Columns k: J(t_end) for J(0) = 0, J'(0) = e_k along t -> exp_x(t v), t in [0, t_end].
/// This is the differential of v -> exp_x(t_end v) times t_end.
Mat jacobi_endpoint_matrix(const MetricModel& model, const Vec& x, const Vec& v, double t_end = 1.0, int steps = 0);

/// First grid time where det of the Jacobi endpoint matrix changes sign, or
/// +inf when none is found up to t_max.
double first_conjugate_time(const MetricModel& model, const Vec& x, const Vec& v, double t_max, int steps = 0);

/// g_T norm of X at T.
double norm_T(const MetricModel& model, const Vec& x, const Vec& T, const Vec& X);

}  // namespace finsler
