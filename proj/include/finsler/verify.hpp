#pragma once

// Sampled checks of the Jacobi-field, distance-comparison, curvature and
// Berwald holonomy inequalities. Violations are counted, never thrown.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

struct VerifyParams {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double k_used = 0.0;       // curvature bound |K| <= k_used assumed by the inequality
  double Lambda_used = 1.0;  // uniformity bound
  std::optional<double> tolerance;  // per-check default when unset
  double t_max = 1.5;               // longest geodesic time sampled
  double radius = 0.3;              // ball radius for the distance comparison
  std::vector<double> triangle_scales = {0.2, 0.1, 0.05};
  std::optional<double> holonomy_constant;  // default_holonomy_constant(n, k_used, Lambda_used)
  Exec exec = Exec::parallel;
};

struct VerifyReport {
  std::string check_name;
  std::string model;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // negative = violated
  double tolerance = 0.0;
  bool applicable = true;     // false when the model is outside the check's hypothesis
  std::vector<std::pair<std::string, double>> config;
  std::vector<std::pair<std::string, double>> stats;

  bool passed() const { return !applicable || violations == 0; }
  double stat(const std::string& name) const;
};

/// ||J(t)||_T / (t ||X||_y) in [s_k(t)/t, s_{-k}(t)/t]; relative margins.
VerifyReport check_rauch(const MetricModel& model, const VerifyParams& p);
/// s_k(R) F(Q-P)/(Lambda R) <= d(p, q) <= Lambda s_{-k}(R) F(Q-P)/R for p, q near x; relative margins.
VerifyReport check_distance_comparison(const MetricModel& model, const VerifyParams& p);
/// ||P^{-1} R_T P|| on y-perp, in the g_y norm, is at most k_used.
VerifyReport check_curvature_operator_norm(const MetricModel& model, const VerifyParams& p);
/// ||eta(s) - s eta'(0)||_y <= ||eta'(0)||_y (s_{-k}(s) - s) with eta = P^{-1} J.
VerifyReport check_eta_bound(const MetricModel& model, const VerifyParams& p);
/// Forward and inverse differential of exp against parallel transport.
VerifyReport check_transport_vs_exp(const MetricModel& model, const VerifyParams& p);
/// ||J - t J'||_T <= ||J||_T / (20 Lambda) for t up to jacobi_time(k_used, Lambda_used).
VerifyReport check_jacobi_derivative(const MetricModel& model, const VerifyParams& p);
/// |R_T(X, Y, T, W)| <= (2/3) Lambda^{3/2} k (1 + sqrt Lambda)^2 for unit X, Y, W, T,
/// with R_T(A, B, C, D) = g_T(R(C, D) A, B); the value is also assembled from the
/// four-term polarization identity.
VerifyReport check_polarized_curvature(const MetricModel& model, const VerifyParams& p);
/// d/dt ||Y|| <= ||D_T Y|| in the average Riemannian metric (Berwald models).
VerifyReport check_norm_derivative(const MetricModel& model, const VerifyParams& p);
/// Transport defect F(X_123 - X_13) over geodesic triangles; log-log slope in
/// [1.8, 2.2] and defect <= C F(X) R^2 (Berwald models).
VerifyReport check_holonomy_quadratic(const MetricModel& model, const VerifyParams& p);
/// Distortion log(sqrt(det g_T) / sigma(x)) constant along geodesics for the
/// Busemann-Hausdorff and Holmes-Thompson densities (Berwald models).
VerifyReport check_s_curvature_constancy(const MetricModel& model, const VerifyParams& p);

/// Transport defect for one triangle p1, p2 = exp(a), p3 = exp(b) and X at p1.
double holonomy_defect(const MetricModel& model, const Vec& p1, const Vec& a, const Vec& b, const Vec& X);

const std::vector<std::string>& check_names();
/// Named groups: "jacobi" (Rauch through Jacobi derivative), "berwald"
/// (polarized curvature through S-curvature) and "all".
std::vector<std::string> suite_checks(const std::string& suite);
VerifyReport run_check(const std::string& name, const MetricModel& model, const VerifyParams& p);

}  // namespace finsler
