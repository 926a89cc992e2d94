#pragma once

// Closed-form comparison constants and radius bounds. +inf is an ordinary
// value here (k = 0 arms, degenerate suprema).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

/// Solution of s'' + k s = 0, s(0) = 0, s'(0) = 1.
double s_k(double k, double t);
double s_k_prime(double k, double t);

/// int_0^T s_k(t)^(n-1) dt by adaptive quadrature (closed form for n = 1, 2).
double s_k_integral(double k, int n, double T);

struct BoundArm {
  std::string name;
  double value = 0.0;
};

struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<BoundArm> arms;  // value == min over arms (a single arm is its own value)
  double value = 0.0;
  std::vector<std::pair<std::string, double>> extras;  // informational, not part of the min

  double arm(const std::string& arm_name) const;
};

/// Injectivity radius lower bound from curvature, T-curvature, uniformity,
/// diameter and volume. Both arms are already divided by (1 + sqrt(Lambda)).
BoundReport injectivity_bound(int n, double k, double tau, double Lambda, double D, double V);

/// Length lower bound for simple closed geodesics under K >= k (k may be <= 0).
BoundReport closed_geodesic_length_bound(int n, double k, double tau, double Lambda, double D, double V);

/// min{pi/(2 sqrt k), sigma/(lambda(1+lambda))}.
BoundReport convexity_bound(double k, double sigma, double lambda);

/// min{pi/(lambda sqrt k), shortest_loop/(1+lambda)}; the symmetrized
/// variant min{(1+1/lambda) pi/(2 sqrt k), shortest_loop/2} is reported as an extra.
BoundReport closed_geodesic_injectivity_bound(double k, double lambda, double shortest_loop);

/// First positive zero of s_k' - xi s_k, +inf when none exists.
double convexity_zero(double k, double xi);

/// Largest t in (0, pi/(2 sqrt k)) with (sqrt(k) t cosh(sqrt(k) t) - sinh(sqrt(k) t)) / (sqrt(k) s_k(t)) <= 1/(20 Lambda).
/// +inf for k = 0.
double jacobi_time(double k, double Lambda);

/// (1/(2 Lambda)) min{pi/(2 sqrt k), sigma/(1+sqrt Lambda), jacobi_time, 1/(40 Lambda^2)}; arms carry the 1/(2 Lambda) factor.
BoundReport mass_radius(int n, double k, double Lambda, double sigma);

/// Holonomy constant from the curvature-bound chain:
/// (16/3) n Lambda^{13/2} (1 + sqrt Lambda)^2 sqrt(k) sinh(pi/2).
double default_holonomy_constant(int n, double k, double Lambda);

struct ConditionDelta {
  double C0 = 0.0, C1 = 0.0, C2 = 0.0, C3 = 0.0;
  double mass_radius = 0.0;     // with the supplied sigma
  double radius_cap = 0.0;      // min{mass_radius/(40 Lambda^4), C0, C1, C2}
  double eps1_cap = 0.0;        // R/(12 Lambda^3)
  double frak_C = 0.0;          // holonomy constant used in C3
  double frak_C_required = 0.0; // largest holonomy constant for which condition (3) still holds
  bool cond1 = false, cond2 = false, cond3 = false;
  bool satisfied = false;
  double margin = 0.0;  // left side of condition (3)
};

/// C0, C1, C2 are the right ends of the initial interval on which their
/// defining inequality holds (first failure, located by scan + bisection);
/// +inf when it never fails.
ConditionDelta condition_delta(int n, double k, double Lambda, double R, double eps1, double eps2, double sigma,
                               std::optional<double> frak_C = std::nullopt);

double condition_C0(double k, double Lambda);
double condition_C1(int n, double k, double Lambda);
double condition_C2(double k, double Lambda);
double condition_C3(int n, double k, double Lambda, double R, double eps2, double frak_C);

/// Lambda^{2n} int_0^{Lambda R_big} s_{-k}^{n-1} / int_0^{R_small/(4 Lambda)} s_k^{n-1}.
double packing_count(int n, double k, double Lambda, double R_big, double R_small);

}  // namespace finsler
