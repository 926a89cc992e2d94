#pragma once

// Sampled estimates of the global constants of a metric. Every supremum is
// estimated from below: seeded random samples, then Nelder-Mead from the
// best few.

#include <cstdint>
#include <optional>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

struct RefineTrace {
  double start = 0.0;
  double end = 0.0;
  int iterations = 0;
};

/// Optimizer parameters: [x, d_1, ..., d_m], x omitted for x-independent models.
using Params = Eigen::VectorXd;

struct SupEstimate {
  double value = 0.0;
  double sampled = 0.0;  // best raw sample before refinement
  Params argmax;  // optimizer parameters at the reported value
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<RefineTrace> traces;
};

struct EstimateOptions {
  int refine_starts = 5;
  int refine_iterations = 200;
  Exec exec = Exec::parallel;
};

/// sup F(x, -y) / F(x, y).
SupEstimate reversibility_estimate(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                   const EstimateOptions& opt = {});
double reversibility(const MetricModel& model, std::size_t samples, std::uint64_t seed);

/// sup g_X(Y, Y) / g_Z(Y, Y). The inner sup over Y is the largest generalized
/// eigenvalue of (g_X, g_Z). The pair (-X*, X*) built from the reversibility
/// maximizer is always included, so the estimate is at least lambda_hat^2.
SupEstimate uniformity_estimate(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                const EstimateOptions& opt = {});
double uniformity(const MetricModel& model, std::size_t samples, std::uint64_t seed);

struct CurvatureRange {
  double K_min = 0.0;
  double K_max = 0.0;
  SupEstimate min_estimate;  // value holds -K_min
  SupEstimate max_estimate;
};

CurvatureRange curvature_bounds(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                const EstimateOptions& opt = {});

/// sup |T_y(v)| over y, v on the indicatrix.
SupEstimate t_curvature_estimate(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                 const EstimateOptions& opt = {});
double t_curvature_bound(const MetricModel& model, std::size_t samples, std::uint64_t seed);

/// Largest forward graph distance between grid points, edges to all 3^n - 1
/// neighbours weighted by F(p, q - p). Periodic axes wrap; other axes span
/// [lo, hi] including both ends. Requires a compact chart.
double diameter_estimate(const MetricModel& model, int grid_resolution, Exec exec = Exec::parallel);

struct ClosedGeodesic {
  std::vector<int> homotopy_class;
  double length = 0.0;
};

/// Shortest straight closed geodesic over primitive classes with entries in
/// [-class_range, class_range]. Requires every axis periodic and a vanishing
/// spray; throws InvalidArgument otherwise.
ClosedGeodesic shortest_closed_geodesic_torus(const MetricModel& model, int class_range = 3);

struct InjectivityDiagnostics {
  double conj_bound = 0.0;  // pi / (lambda sqrt(K_max+)), +inf when K_max <= 0
  double loop_bound = 0.0;  // shortest loop / (1 + lambda), +inf when no loop length is known
  double min_bound = 0.0;
  double sym_conj_bound = 0.0;  // (1 + 1/lambda) pi / (2 sqrt(K_max+))
  double sym_loop_bound = 0.0;  // shortest loop / 2
  double sym_min_bound = 0.0;
  std::optional<double> shortest_loop;
};

InjectivityDiagnostics injectivity_diagnostics(double K_max, double lambda, std::optional<double> shortest_loop);
InjectivityDiagnostics injectivity_diagnostics(const MetricModel& model, std::size_t samples, std::uint64_t seed = 1);

struct InvariantOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  int grid_resolution = 32;
  int volume_order = 32;
  int class_range = 3;
  EstimateOptions estimate;
};

struct InvariantReport {
  std::string model;
  int dim = 0;
  double lambda_hat = 1.0;
  double Lambda_hat = 1.0;
  double K_min = 0.0, K_max = 0.0;
  double T_bound = 0.0;
  std::optional<double> diam_hat;
  std::optional<double> vol_BH, vol_HT;
  std::optional<ClosedGeodesic> shortest_loop;
  InjectivityDiagnostics injectivity;
  InvariantOptions options;
  SupEstimate lambda_est, Lambda_est, K_min_est, K_max_est, T_est;
};

InvariantReport measure_invariants(const MetricModel& model, const InvariantOptions& opt = {});

}  // namespace finsler
