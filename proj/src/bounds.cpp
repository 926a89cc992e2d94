#include "finsler/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "finsler/quadrature.hpp"

namespace finsler {

namespace {

constexpr double pi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

double min_arm(const std::vector<BoundArm>& arms) {
  double v = kInf;
  for (const auto& a : arms) v = std::min(v, a.value);
  return v;
}

// Shrink [lo, hi] (f(lo) true, f(hi) false) to width tol.
double bisect_bool(const std::function<bool(double)>& holds, double lo, double hi, double tol) {
  for (int it = 0; it < 500 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (holds(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Right end of the initial interval of (0, cap] where `holds` is true.
double first_failure(const std::function<bool(double)>& holds, double cap) {
  const int N = 4000;
  const double lo_exp = -9.0;
  double prev = 0.0;
  for (int i = 0; i <= N; ++i) {
    double t = cap * std::pow(10.0, lo_exp * (1.0 - static_cast<double>(i) / N));
    if (!holds(t)) {
      if (i == 0) return 0.0;
      return bisect_bool(holds, prev, t, 1e-13 * std::max(1.0, t));
    }
    prev = t;
  }
  return kInf;
}

}  // namespace

double s_k(double k, double t) {
  const double x = k * t * t;
  if (std::abs(x) < 1e-3) {
    // t (1 - x/6 + x^2/120 - x^3/5040)
    return t * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)));
  }
  if (k > 0.0) {
    const double r = std::sqrt(k);
    return std::sin(r * t) / r;
  }
  const double r = std::sqrt(-k);
  return std::sinh(r * t) / r;
}

double s_k_prime(double k, double t) {
  if (k == 0.0) return 1.0;
  if (k > 0.0) return std::cos(std::sqrt(k) * t);
  return std::cosh(std::sqrt(-k) * t);
}

double s_k_integral(double k, int n, double T) {
  require(n >= 1, "s_k_integral: n must be >= 1");
  if (n == 1) return T;
  if (n == 2 && std::abs(k * T * T) >= 1e-3) {
    // int s_k = (1 - s_k'(T)) / k
    return (1.0 - s_k_prime(k, T)) / k;
  }
  const int p = n - 1;
  return integrate([&](double t) { return std::pow(s_k(k, t), p); }, 0.0, T, 1e-12);
}

double BoundReport::arm(const std::string& arm_name) const {
  for (const auto& a : arms)
    if (a.name == arm_name) return a.value;
  throw InvalidArgument("no bound arm named '" + arm_name + "'");
}

BoundReport injectivity_bound(int n, double k, double tau, double Lambda, double D, double V) {
  require(n >= 2, "n must be >= 2");
  require(k >= 0.0, "k must be >= 0");
  require(tau >= 0.0, "tau must be >= 0");
  require(Lambda >= 1.0, "Lambda must be >= 1");
  require(D > 0.0, "D must be > 0");
  require(V > 0.0, "V must be > 0");
  const double sl = std::sqrt(Lambda);
  const double c = unit_sphere_area(n - 2);
  const double bracket = std::pow(s_k(-k, D), n - 1) / (n - 1) + sl * tau * s_k_integral(-k, n, D);
  const double volume_arm = V / (c * std::pow(Lambda, 1.5 * n) * bracket);
  const double curvature_arm = k == 0.0 ? kInf : (1.0 + 1.0 / sl) * pi / std::sqrt(k);
  BoundReport r;
  r.name = "injectivity";
  r.inputs = {{"n", n}, {"k", k}, {"tau", tau}, {"Lambda", Lambda}, {"D", D}, {"V", V}};
  r.arms = {{"curvature", curvature_arm / (1.0 + sl)}, {"volume", volume_arm / (1.0 + sl)}};
  r.value = min_arm(r.arms);
  r.extras = {{"sphere_area", c}, {"bracket", bracket}};
  return r;
}

BoundReport closed_geodesic_length_bound(int n, double k, double tau, double Lambda, double D, double V) {
  require(n >= 2, "n must be >= 2");
  require(tau >= 0.0, "tau must be >= 0");
  require(Lambda >= 1.0, "Lambda must be >= 1");
  require(D > 0.0, "D must be > 0");
  require(V > 0.0, "V must be > 0");
  const double cap = k > 0.0 ? pi / (2.0 * std::sqrt(k)) : kInf;
  const double c = unit_sphere_area(n - 2);
  const double bracket =
      std::pow(s_k(k, std::min(D, cap)), n - 1) / (n - 1) + std::sqrt(Lambda) * tau * s_k_integral(k, n, D);
  BoundReport r;
  r.name = "closed_geodesic_length";
  r.inputs = {{"n", n}, {"k", k}, {"tau", tau}, {"Lambda", Lambda}, {"D", D}, {"V", V}};
  r.arms = {{"volume", V / (c * std::pow(Lambda, 1.5 * n) * bracket)}};
  r.value = min_arm(r.arms);
  r.extras = {{"sphere_area", c}, {"bracket", bracket}};
  return r;
}

BoundReport convexity_bound(double k, double sigma, double lambda) {
  require(k >= 0.0, "k must be >= 0");
  require(sigma > 0.0, "sigma must be > 0");
  require(lambda >= 1.0, "lambda must be >= 1");
  BoundReport r;
  r.name = "convexity";
  r.inputs = {{"k", k}, {"sigma", sigma}, {"lambda", lambda}};
  r.arms = {{"curvature", k == 0.0 ? kInf : pi / (2.0 * std::sqrt(k))},
            {"injectivity", sigma / (lambda * (1.0 + lambda))}};
  r.value = min_arm(r.arms);
  return r;
}

BoundReport closed_geodesic_injectivity_bound(double k, double lambda, double shortest_loop) {
  require(lambda >= 1.0, "lambda must be >= 1");
  require(shortest_loop > 0.0, "shortest loop length must be > 0");
  BoundReport r;
  r.name = "closed_geodesic_injectivity";
  r.inputs = {{"k", k}, {"lambda", lambda}, {"shortest_loop", shortest_loop}};
  const double kp = std::max(k, 0.0);
  const bool flat = kp <= 1e-9;
  r.arms = {{"conjugate", flat ? kInf : pi / (lambda * std::sqrt(kp))}, {"loop", shortest_loop / (1.0 + lambda)}};
  r.value = min_arm(r.arms);
  const double sym_conj = flat ? kInf : (1.0 + 1.0 / lambda) * pi / (2.0 * std::sqrt(kp));
  r.extras = {{"symmetrized_conjugate", sym_conj},
              {"symmetrized_loop", shortest_loop / 2.0},
              {"symmetrized", std::min(sym_conj, shortest_loop / 2.0)}};
  return r;
}

double convexity_zero(double k, double xi) {
  auto f = [&](double t) { return s_k_prime(k, t) - xi * s_k(k, t); };
  double hi;
  if (k > 0.0) {
    hi = pi / std::sqrt(k);  // f(hi) = -1
  } else {
    const double c = std::sqrt(-k);
    if (!(xi > c)) return kInf;  // f stays positive
    hi = 1.0 / xi;
    for (int i = 0; i < 2000 && f(hi) > 0.0; ++i) hi *= 2.0;
    if (f(hi) > 0.0) return kInf;
  }
  double lo = 0.0;
  for (int it = 0; it < 500 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double jacobi_ratio(double u) {
  // (u cosh u - sinh u) / sin u
  double num;
  if (u < 1e-2) {
    const double u2 = u * u;
    num = u * u2 * (1.0 / 3.0 + u2 * (1.0 / 30.0 + u2 / 840.0));
  } else {
    num = u * std::cosh(u) - std::sinh(u);
  }
  return num / std::sin(u);
}

}  // namespace

double jacobi_time(double k, double Lambda) {
  require(k >= 0.0, "k must be >= 0");
  require(Lambda >= 1.0, "Lambda must be >= 1");
  if (k == 0.0) return kInf;
  const double r = std::sqrt(k);
  const double target = 1.0 / (20.0 * Lambda);
  double lo = 0.0, hi = pi / 2.0;  // in u = sqrt(k) t; ratio(pi/2) > 1/20
  for (int it = 0; it < 500 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (jacobi_ratio(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo / r;
}

BoundReport mass_radius(int n, double k, double Lambda, double sigma) {
  require(n >= 1, "n must be >= 1");
  require(k >= 0.0, "k must be >= 0");
  require(Lambda >= 1.0, "Lambda must be >= 1");
  require(sigma > 0.0, "sigma must be > 0");
  const double f = 1.0 / (2.0 * Lambda);
  BoundReport r;
  r.name = "mass_radius";
  r.inputs = {{"n", n}, {"k", k}, {"Lambda", Lambda}, {"sigma", sigma}};
  r.arms = {{"curvature", k == 0.0 ? kInf : f * pi / (2.0 * std::sqrt(k))},
            {"injectivity", f * sigma / (1.0 + std::sqrt(Lambda))},
            {"jacobi_time", f * jacobi_time(k, Lambda)},
            {"uniformity", f / (40.0 * Lambda * Lambda)}};
  r.value = min_arm(r.arms);
  return r;
}

double default_holonomy_constant(int n, double k, double Lambda) {
  require(n >= 1 && k >= 0.0 && Lambda >= 1.0, "invalid holonomy constant inputs");
  const double sl = std::sqrt(Lambda);
  return 16.0 / 3.0 * n * std::pow(Lambda, 6.5) * (1.0 + sl) * (1.0 + sl) * std::sqrt(k) * std::sinh(pi / 2.0);
}

double condition_C0(double k, double Lambda) {
  require(k >= 0.0 && Lambda >= 1.0, "invalid C0 inputs");
  if (k == 0.0) return kInf;
  const double a = 3.0 * std::pow(Lambda, 2.5);
  auto holds = [&](double t) { return s_k(-k, a * t) / (a * t) <= 2.0; };
  return first_failure(holds, 50.0 / std::sqrt(k));
}

double condition_C1(int n, double k, double Lambda) {
  require(n >= 2 && k >= 0.0 && Lambda >= 1.0, "invalid C1 inputs");
  if (k == 0.0) return kInf;
  const double bound = 2.0 * std::pow(4.0 * Lambda * Lambda, n);
  auto holds = [&](double t) {
    const double num = s_k_integral(-k, n, Lambda * t);
    const double den = s_k_integral(k, n, t / (4.0 * Lambda));
    return den > 0.0 && num / den <= bound;
  };
  return first_failure(holds, 50.0 / std::sqrt(k));
}

double condition_C2(double k, double Lambda) {
  require(k >= 0.0 && Lambda >= 1.0, "invalid C2 inputs");
  if (k == 0.0) return kInf;
  auto holds = [&](double t) {
    const double lhs = t / s_k(-k, t) * s_k(k, std::pow(Lambda, 1.5) * t) / s_k(-k, std::sqrt(Lambda) * t);
    return lhs >= 1.0 - k * t * t;
  };
  return first_failure(holds, 50.0 / std::sqrt(k));
}

double condition_C3(int n, double k, double Lambda, double R, double eps2, double frak_C) {
  (void)n;
  const double a = std::sqrt(Lambda) * R;
  const double sp = s_k(k, a), sm = s_k(-k, a);
  const double L3 = std::pow(Lambda, 3);
  return 6.0 * L3 * R / sp * (sm / a - 1.0) * sm / sp + 30.0 * L3 * frak_C * R * R + Lambda * eps2;
}

ConditionDelta condition_delta(int n, double k, double Lambda, double R, double eps1, double eps2, double sigma,
                               std::optional<double> frak_C) {
  require(n >= 2, "n must be >= 2");
  require(k >= 0.0, "k must be >= 0");
  require(Lambda >= 1.0, "Lambda must be >= 1");
  require(R > 0.0, "R must be > 0");
  require(eps1 > 0.0 && eps2 > 0.0, "eps1 and eps2 must be > 0");
  require(sigma > 0.0, "sigma must be > 0");
  ConditionDelta c;
  c.C0 = condition_C0(k, Lambda);
  c.C1 = condition_C1(n, k, Lambda);
  c.C2 = condition_C2(k, Lambda);
  c.frak_C = frak_C ? *frak_C : default_holonomy_constant(n, k, Lambda);
  require(c.frak_C >= 0.0, "holonomy constant must be >= 0");
  c.C3 = condition_C3(n, k, Lambda, R, eps2, c.frak_C);
  c.mass_radius = mass_radius(n, k, Lambda, sigma).value;
  c.radius_cap = std::min({c.mass_radius / (40.0 * std::pow(Lambda, 4)), c.C0, c.C1, c.C2});
  c.eps1_cap = R / (12.0 * std::pow(Lambda, 3));
  c.cond1 = R <= c.radius_cap;
  c.cond2 = eps1 <= c.eps1_cap;
  const double spR = s_k(k, std::sqrt(Lambda) * R);
  const double packing = std::pow(2.0, 2 * n + 6) * std::pow(Lambda, 4 * n + 6) / spR * eps1;
  c.margin = (1.0 - k * R * R) / std::pow(Lambda, 5) - c.C3 - packing;
  c.cond3 = c.margin > 0.0;
  c.satisfied = c.cond1 && c.cond2 && c.cond3;
  // margin is affine in frak_C with slope -30 Lambda^3 R^2
  c.frak_C_required = c.frak_C + c.margin / (30.0 * std::pow(Lambda, 3) * R * R);
  return c;
}

double packing_count(int n, double k, double Lambda, double R_big, double R_small) {
  require(n >= 2 && Lambda >= 1.0 && R_big > 0.0 && R_small > 0.0, "invalid packing inputs");
  const double r = R_small / (4.0 * Lambda);
  if (k > 0.0 && !(r < pi / std::sqrt(k))) throw InvalidArgument("packing: R_small/(4 Lambda) must be below pi/sqrt(k)");
  const double den = s_k_integral(k, n, r);
  if (!(den > 0.0)) throw NumericalFailure("packing: denominator integral is not positive");
  return std::pow(Lambda, 2 * n) * s_k_integral(-k, n, Lambda * R_big) / den;
}

}  // namespace finsler
