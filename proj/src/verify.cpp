#include "finsler/verify.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "finsler/bounds.hpp"
#include "finsler/connection.hpp"
#include "finsler/flows.hpp"
#include "finsler/sampling.hpp"
#include "finsler/tensors.hpp"

namespace finsler {

namespace {

enum class Agg { max, min };

struct StatSpec {
  std::string name;
  Agg agg;
};

struct SampleOut {
  double margin = kInf;
  std::vector<double> stats;
};

using SampleFn = std::function<SampleOut(std::mt19937_64&)>;

VerifyReport run_samples(const std::string& name, std::uint64_t stream, const MetricModel& model,
                         const VerifyParams& p, double tol, const std::vector<StatSpec>& specs, const SampleFn& fn) {
  if (p.samples < 1) throw InvalidArgument("verify: samples must be >= 1");
  struct Slot {
    bool ok = false;
    SampleOut out;
  };
  auto slots = map_indexed<Slot>(
      p.samples,
      [&](std::size_t i) {
        auto rng = sample_rng(p.seed, stream, i);
        try {
          return Slot{true, fn(rng)};
        } catch (const NumericalFailure&) {
          return Slot{false, {}};
        }
      },
      p.exec);
  VerifyReport r;
  r.check_name = name;
  r.model = model.name();
  r.samples = p.samples;
  r.tolerance = tol;
  r.worst_margin = kInf;
  std::vector<double> agg(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) agg[s] = specs[s].agg == Agg::max ? -kInf : kInf;
  std::size_t failures = 0;
  for (const Slot& sl : slots) {
    if (!sl.ok) {
      ++failures;
      continue;
    }
    r.worst_margin = std::min(r.worst_margin, sl.out.margin);
    if (sl.out.margin < -tol) ++r.violations;
    for (std::size_t s = 0; s < specs.size() && s < sl.out.stats.size(); ++s) {
      double v = sl.out.stats[s];
      if (std::isnan(v)) continue;
      agg[s] = specs[s].agg == Agg::max ? std::max(agg[s], v) : std::min(agg[s], v);
    }
  }
  r.violations += failures;
  r.config = {{"samples", static_cast<double>(p.samples)},
              {"seed", static_cast<double>(p.seed)},
              {"k_used", p.k_used},
              {"Lambda_used", p.Lambda_used},
              {"tolerance", tol},
              {"t_max", p.t_max}};
  r.stats.push_back({"numerical_failures", static_cast<double>(failures)});
  for (std::size_t s = 0; s < specs.size(); ++s) r.stats.push_back({specs[s].name, agg[s]});
  return r;
}

double tol_or(const VerifyParams& p, double d) { return p.tolerance ? *p.tolerance : d; }

// Longest time for which the s_k comparison is stated.
double comparison_cap(double k) { return k > 0.0 ? std::numbers::pi / (2.0 * std::sqrt(k)) : kInf; }

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

double norm_g(const Mat& g, const Vec& v) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

// P(t) with columns the transports of e_k, at every grid index.
std::vector<Mat> transport_matrices(const MetricModel& model, const GeodesicSegment& geo) {
  const int n = model.dim();
  std::vector<Mat> P(geo.t.size(), Mat(n, n));
  for (int k = 0; k < n; ++k) {
    auto tf = parallel_transport(model, geo, Vec::Unit(n, k));
    for (std::size_t i = 0; i < geo.t.size(); ++i) P[i].col(k) = tf.X[i];
  }
  return P;
}

// g-orthonormal basis (as columns) of the g-orthogonal complement of y.
Mat perp_basis(const Mat& g, const Vec& y) {
  const int n = static_cast<int>(y.size());
  std::vector<Vec> basis = {y / norm_g(g, y)};
  for (int k = 0; k < n && static_cast<int>(basis.size()) < n; ++k) {
    Vec v = Vec::Unit(n, k);
    for (const Vec& b : basis) v -= b.dot(g * v) * b;
    double nv = norm_g(g, v);
    if (nv > 1e-8) basis.push_back(v / nv);
  }
  Mat B(n, n - 1);
  for (int j = 1; j < n; ++j) B.col(j - 1) = basis[static_cast<std::size_t>(j)];
  return B;
}

Vec perp_part(const Mat& g, const Vec& y, const Vec& X) { return X - (y.dot(g * X) / y.dot(g * y)) * y; }

bool is_berwald(const MetricModel& model, std::uint64_t seed) {
  return berwald_sweep(model, 32, seed).numerically_berwald;
}

VerifyReport not_applicable(const std::string& name, const MetricModel& model, const VerifyParams& p, double tol) {
  VerifyReport r;
  r.check_name = name;
  r.model = model.name();
  r.samples = 0;
  r.tolerance = tol;
  r.applicable = false;
  r.worst_margin = kInf;
  r.config = {{"samples", static_cast<double>(p.samples)}, {"seed", static_cast<double>(p.seed)}};
  return r;
}

}  // namespace

double VerifyReport::stat(const std::string& name) const {
  for (const auto& [k, v] : stats)
    if (k == name) return v;
  throw InvalidArgument("report has no statistic '" + name + "'");
}

VerifyReport check_rauch(const MetricModel& model, const VerifyParams& p) {
  const double k = p.k_used;
  const double t_hi = std::min(comparison_cap(k), p.t_max);
  return run_samples(
      "rauch", 0xa1, model, p, tol_or(p, 1e-3), {{"perpendicular_lower_gap", Agg::max}, {"max_ratio", Agg::max}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        Vec X = random_direction(model.dim(), rng);
        const double t = uniform(rng, 0.02 * t_hi, t_hi);
        auto geo = integrate_geodesic(model, x, y, t);
        const Mat g0 = fundamental_tensor(model, x, y);
        const double lo = s_k(k, t) / t, hi = s_k(-k, t) / t;
        auto ratio = [&](const Vec& V) {
          auto J = jacobi_field(model, geo, Vec::Zero(model.dim()), V);
          return norm_T(model, geo.xs.back(), geo.vs.back(), J.J.back()) / (t * norm_g(g0, V));
        };
        double r = ratio(X);
        Vec Xp = perp_part(g0, y, X);
        double rp = ratio(Xp);
        double margin = std::min({r / lo - 1.0, 1.0 - r / hi, rp / lo - 1.0, 1.0 - rp / hi});
        return SampleOut{margin, {rp / lo - 1.0, r}};
      });
}

VerifyReport check_distance_comparison(const MetricModel& model, const VerifyParams& p) {
  const double k = p.k_used, L = p.Lambda_used, R = p.radius;
  if (!(R > 0.0) || !(R < comparison_cap(k))) throw InvalidArgument("distance comparison: radius must lie in (0, pi/(2 sqrt k))");
  // keeps the minimal geodesic p -> q inside B+_x(R): d(x, .) <= r + (lambda + 1) r with lambda <= sqrt(Lambda)
  const double r = 0.99 * R / (2.0 + std::sqrt(L));
  const double lower_c = s_k(k, R) / (L * R), upper_c = L * s_k(-k, R) / R;
  auto rep = run_samples(
      "distance_comparison", 0xa2, model, p, tol_or(p, 1e-8), {{"max_lower_ratio", Agg::max}, {"min_upper_ratio", Agg::min}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec P = random_unit(model, x, rng) * (r * uniform(rng, 0.1, 1.0));
        Vec Q = random_unit(model, x, rng) * (r * uniform(rng, 0.1, 1.0));
        Vec pp = exp_map(model, x, P), qq = exp_map(model, x, Q);
        const double fq = model.F(x, Vec(Q - P));
        const double d = distance(model, pp, qq);
        const double lower = lower_c * fq, upper = upper_c * fq;
        return SampleOut{std::min((d - lower) / d, (upper - d) / d), {lower / d, upper / d}};
      });
  rep.config.push_back({"radius", R});
  return rep;
}

VerifyReport check_curvature_operator_norm(const MetricModel& model, const VerifyParams& p) {
  if (model.dim() < 2) throw InvalidArgument("curvature operator needs dimension >= 2");
  return run_samples(
      "curvature_operator_norm", 0xa3, model, p, tol_or(p, 1e-4), {{"max_norm", Agg::max}, {"min_norm", Agg::min}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        const double t = uniform(rng, 0.0, p.t_max);
        Mat op;
        if (t < 1e-3) {
          op = curvature_matrix(model, x, y);
        } else {
          auto geo = integrate_geodesic(model, x, y, t);
          Mat P = transport_matrices(model, geo).back();
          op = P.fullPivLu().solve(curvature_matrix(model, geo.xs.back(), geo.vs.back()) * P);
        }
        const Mat g = fundamental_tensor(model, x, y);
        Mat Lt = Eigen::LLT<Mat>(g).matrixU();
        Eigen::MatrixXd A = Lt * op * perp_basis(g, y);
        const double nrm = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
        return SampleOut{p.k_used - nrm, {nrm, nrm}};
      });
}

VerifyReport check_eta_bound(const MetricModel& model, const VerifyParams& p) {
  const double k = p.k_used;
  return run_samples(
      "eta_bound", 0xa4, model, p, tol_or(p, 1e-6), {{"max_lhs", Agg::max}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        const Mat g0 = fundamental_tensor(model, x, y);
        Vec X = perp_part(g0, y, random_direction(model.dim(), rng));
        X /= norm_g(g0, X);
        auto geo = integrate_geodesic(model, x, y, p.t_max);
        auto J = jacobi_field(model, geo, Vec::Zero(model.dim()), X);
        auto P = transport_matrices(model, geo);
        double margin = kInf, lhs_max = 0.0;
        const int m = geo.steps();
        for (int q = 1; q <= 8; ++q) {
          const std::size_t i = static_cast<std::size_t>(q * m / 8);
          const double s = geo.t[i];
          Vec eta = P[i].fullPivLu().solve(J.J[i]);
          const double lhs = norm_g(g0, Vec(eta - s * X));
          margin = std::min(margin, (s_k(-k, s) - s) - lhs);
          lhs_max = std::max(lhs_max, lhs);
        }
        return SampleOut{margin, {lhs_max}};
      });
}

VerifyReport check_transport_vs_exp(const MetricModel& model, const VerifyParams& p) {
  const double k = p.k_used;
  const double t_hi = std::min(0.99 * comparison_cap(k), p.t_max);
  return run_samples(
      "transport_vs_exp", 0xa5, model, p, tol_or(p, 1e-6), {{"max_forward_lhs", Agg::max}, {"max_inverse_lhs", Agg::max}},
      [&](std::mt19937_64& rng) {
        const int n = model.dim();
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        Vec X = random_direction(n, rng);
        const double t = uniform(rng, 0.05 * t_hi, t_hi);
        auto geo = integrate_geodesic(model, x, y, t);
        const Mat g0 = fundamental_tensor(model, x, y);
        const Vec& xt = geo.xs.back();
        const Vec& T = geo.vs.back();
        const Mat gT = fundamental_tensor(model, xt, T);
        const Mat P = transport_matrices(model, geo).back();
        const Mat Jm = jacobi_endpoint_matrix(model, x, y, t, geo.steps());
        // forward: (exp)_* X = J_X(t) / t
        const double fwd = norm_g(gT, Vec(Jm * X / t - P * X));
        const double fwd_rhs = (s_k(-k, t) / t - 1.0) * norm_g(g0, X);
        // inverse, Y at gamma(t) with ||Y||_T = 1
        Vec Y = random_direction(n, rng);
        Y /= norm_g(gT, Y);
        Vec Xi = t * Jm.fullPivLu().solve(Y);
        const double inv = norm_g(g0, Vec(Xi - P.fullPivLu().solve(Y)));
        const double inv_rhs = t / s_k(k, t) * (s_k(-k, t) / t - 1.0);
        return SampleOut{std::min(fwd_rhs - fwd, inv_rhs - inv), {fwd, inv}};
      });
}

VerifyReport check_jacobi_derivative(const MetricModel& model, const VerifyParams& p) {
  const double L = p.Lambda_used;
  const double t_cap = jacobi_time(p.k_used, L);
  const double t_end = std::min(t_cap, p.t_max);
  auto rep = run_samples(
      "jacobi_derivative", 0xa6, model, p, tol_or(p, 1e-6), {{"max_lhs_over_J", Agg::max}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        const Mat g0 = fundamental_tensor(model, x, y);
        Vec X = random_direction(model.dim(), rng);
        X /= norm_g(g0, X);
        auto geo = integrate_geodesic(model, x, y, t_end);
        auto J = jacobi_field(model, geo, Vec::Zero(model.dim()), X);
        double margin = kInf, worst_ratio = 0.0;
        const int m = geo.steps();
        for (int q = 1; q <= 10; ++q) {
          const std::size_t i = static_cast<std::size_t>(q * m / 10);
          const double t = geo.t[i];
          const Mat gT = fundamental_tensor(model, geo.xs[i], geo.vs[i]);
          const double lhs = norm_g(gT, Vec(J.J[i] - t * J.Jp[i]));
          const double nJ = norm_g(gT, J.J[i]);
          margin = std::min(margin, nJ / (20.0 * L) - lhs);
          worst_ratio = std::max(worst_ratio, lhs / nJ);
        }
        return SampleOut{margin, {worst_ratio}};
      });
  rep.config.push_back({"t_end", t_end});
  rep.config.push_back({"jacobi_time", t_cap});
  return rep;
}

VerifyReport check_polarized_curvature(const MetricModel& model, const VerifyParams& p) {
  const double L = p.Lambda_used;
  const double bound = 2.0 / 3.0 * std::pow(L, 1.5) * p.k_used * std::pow(1.0 + std::sqrt(L), 2);
  auto rep = run_samples(
      "polarized_curvature", 0xb1, model, p, tol_or(p, 1e-6),
      {{"max_abs_value", Agg::max}, {"max_identity_gap", Agg::max}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec T = random_unit(model, x, rng), X = random_unit(model, x, rng), Y = random_unit(model, x, rng),
            W = random_unit(model, x, rng);
        const CurvatureTensor R = curvature_tensor(model, x, T);
        const Mat g = fundamental_tensor(model, x, T);
        const int n = model.dim();
        // R_T(A, B, C, D) = g_T(R(C, D) A, B)
        auto RT = [&](const Vec& A, const Vec& B, const Vec& C, const Vec& D) {
          Vec out = Vec::Zero(n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int kk = 0; kk < n; ++kk)
                for (int l = 0; l < n; ++l) out[i] += A[j] * R(i, j, kk, l) * C[kk] * D[l];
          return B.dot(g * out);
        };
        const double direct = RT(X, Y, T, W);
        const double ident = (-RT(W + X, Y, W + X, T) + RT(W - X, Y, W - X, T) - RT(T - X, Y, T - X, W) +
                              RT(T + X, Y, T + X, W)) /
                             6.0;
        const double v = std::max(std::abs(direct), std::abs(ident));
        return SampleOut{bound - v, {v, std::abs(direct - ident)}};
      });
  rep.config.push_back({"bound", bound});
  return rep;
}

VerifyReport check_norm_derivative(const MetricModel& model, const VerifyParams& p) {
  const double tol = tol_or(p, 1e-5);
  if (!is_berwald(model, p.seed)) return not_applicable("norm_derivative", model, p, tol);
  return run_samples(
      "norm_derivative", 0xb2, model, p, tol, {{"max_derivative", Agg::max}},
      [&](std::mt19937_64& rng) {
        const int n = model.dim();
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        Vec a = random_direction(n, rng), b = random_direction(n, rng), c = random_direction(n, rng) * 0.5;
        auto Yf = [&](double t) { return Vec(a + t * b + t * t * c); };
        auto dYf = [&](double t) { return Vec(b + 2.0 * t * c); };
        const int steps = 256;
        auto geo = integrate_geodesic(model, x, y, p.t_max, steps);
        const double h = p.t_max / steps;
        auto norm_at = [&](int i) {
          Mat gt = average_metric(model, geo.xs[static_cast<std::size_t>(i)]);
          return norm_g(gt, Yf(geo.t[static_cast<std::size_t>(i)]));
        };
        double margin = kInf, dmax = -kInf;
        for (int q = 1; q <= 6; ++q) {
          const int i = q * steps / 7;
          const double t = geo.t[static_cast<std::size_t>(i)];
          const double dnorm = (norm_at(i + 1) - norm_at(i - 1)) / (2.0 * h);
          const Vec& xi = geo.xs[static_cast<std::size_t>(i)];
          const Vec& Ti = geo.vs[static_cast<std::size_t>(i)];
          Vec DY = dYf(t) + chern_coefficients(model, xi, Ti).contract23(Yf(t), Ti);
          margin = std::min(margin, norm_g(average_metric(model, xi), DY) - dnorm);
          dmax = std::max(dmax, dnorm);
        }
        return SampleOut{margin, {dmax}};
      });
}

double holonomy_defect(const MetricModel& model, const Vec& p1, const Vec& a, const Vec& b, const Vec& X) {
  auto transport = [&](const Vec& from, const Vec& v, const Vec& V) {
    auto geo = integrate_geodesic(model, from, v, 1.0);
    return std::pair<Vec, Vec>{geo.xs.back(), parallel_transport(model, geo, V).X.back()};
  };
  auto [p2, X12] = transport(p1, a, X);
  auto [p3, X13] = transport(p1, b, X);
  Vec v23 = exp_inverse(model, p2, p3);
  auto [p3b, X123] = transport(p2, v23, X12);
  (void)p3b;
  Vec d = X123 - X13;
  return d.squaredNorm() == 0.0 ? 0.0 : model.F(p3, d);
}

VerifyReport check_holonomy_quadratic(const MetricModel& model, const VerifyParams& p) {
  const double tol = tol_or(p, 1e-8);
  if (model.dim() < 2) throw InvalidArgument("holonomy check needs dimension >= 2");
  if (p.triangle_scales.size() < 2) throw InvalidArgument("holonomy check needs at least two triangle scales");
  const double gate = p.k_used > 0.0 ? std::numbers::pi / (8.0 * std::sqrt(p.k_used * p.Lambda_used)) : kInf;
  for (double R : p.triangle_scales)
    if (!(R > 0.0) || !(R < gate)) throw InvalidArgument("triangle scale outside (0, pi/(8 sqrt(k Lambda)))");
  if (!is_berwald(model, p.seed)) return not_applicable("holonomy_quadratic", model, p, tol);
  const double C =
      p.holonomy_constant ? *p.holonomy_constant : default_holonomy_constant(model.dim(), p.k_used, p.Lambda_used);
  const std::size_t m = p.triangle_scales.size();
  auto rep = run_samples(
      "holonomy_quadratic", 0xb3, model, p, tol,
      {{"min_slope", Agg::min}, {"max_slope", Agg::max}, {"empirical_constant", Agg::max}, {"max_defect", Agg::max}},
      [&](std::mt19937_64& rng) {
        const int n = model.dim();
        Vec x = random_point(model, rng);
        Vec u = random_unit(model, x, rng), v;
        const Mat g = fundamental_tensor(model, x, u);
        do {
          v = random_unit(model, x, rng);
        } while (norm_g(g, perp_part(g, u, v)) < 0.3 * norm_g(g, v));
        Vec X = random_direction(n, rng);
        const double FX = model.F(x, X);
        std::vector<double> lr, ld;
        double margin = kInf, emp = 0.0, dmax = 0.0;
        for (double R : p.triangle_scales) {
          const double D = holonomy_defect(model, x, 0.5 * R * u, 0.5 * R * v, X);
          margin = std::min(margin, C * FX * R * R - D);
          emp = std::max(emp, D / (FX * R * R));
          dmax = std::max(dmax, D);
          lr.push_back(std::log(R));
          ld.push_back(std::log(std::max(D, 1e-300)));
        }
        double slope = std::numeric_limits<double>::quiet_NaN();
        if (dmax > 1e-8) {
          double mr = 0.0, md = 0.0;
          for (std::size_t i = 0; i < m; ++i) {
            mr += lr[i] / m;
            md += ld[i] / m;
          }
          double sxy = 0.0, sxx = 0.0;
          for (std::size_t i = 0; i < m; ++i) {
            sxy += (lr[i] - mr) * (ld[i] - md);
            sxx += (lr[i] - mr) * (lr[i] - mr);
          }
          slope = sxy / sxx;
          // the slope window is a hard pass/fail, independent of the additive tolerance
          if (slope < 1.8 || slope > 2.2) margin = std::min(margin, -kInf);
        }
        return SampleOut{margin, {slope, slope, emp, dmax}};
      });
  rep.config.push_back({"holonomy_constant", C});
  for (std::size_t i = 0; i < m; ++i) rep.config.push_back({"triangle_scale_" + std::to_string(i), p.triangle_scales[i]});
  return rep;
}

VerifyReport check_s_curvature_constancy(const MetricModel& model, const VerifyParams& p) {
  const double tol = tol_or(p, 1e-5);
  if (!is_berwald(model, p.seed)) return not_applicable("s_curvature_constancy", model, p, tol);
  return run_samples(
      "s_curvature_constancy", 0xb4, model, p, tol, {{"max_bh_drift", Agg::max}, {"max_ht_drift", Agg::max}},
      [&](std::mt19937_64& rng) {
        Vec x = random_point(model, rng);
        Vec y = random_unit(model, x, rng);
        auto geo = integrate_geodesic(model, x, y, p.t_max);
        auto distortion = [&](std::size_t i, Measure m) {
          const double dg = fundamental_tensor(model, geo.xs[i], geo.vs[i]).determinant();
          return 0.5 * std::log(dg) - std::log(volume_density(model, geo.xs[i], m));
        };
        const double bh0 = distortion(0, Measure::busemann_hausdorff), ht0 = distortion(0, Measure::holmes_thompson);
        double bh = 0.0, ht = 0.0;
        const int m = geo.steps();
        for (int q = 1; q <= 6; ++q) {
          const std::size_t i = static_cast<std::size_t>(q * m / 6);
          bh = std::max(bh, std::abs(distortion(i, Measure::busemann_hausdorff) - bh0));
          ht = std::max(ht, std::abs(distortion(i, Measure::holmes_thompson) - ht0));
        }
        return SampleOut{-std::max(bh, ht), {bh, ht}};
      });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "rauch",          "distance_comparison", "curvature_operator_norm", "eta_bound",          "transport_vs_exp",
      "jacobi_derivative", "polarized_curvature", "norm_derivative",     "holonomy_quadratic", "s_curvature_constancy"};
  return names;
}

std::vector<std::string> suite_checks(const std::string& suite) {
  const auto& all = check_names();
  if (suite == "all") return all;
  if (suite == "jacobi" || suite == "appendixA") return {all.begin(), all.begin() + 6};
  if (suite == "berwald" || suite == "appendixB") return {all.begin() + 6, all.end()};
  if (std::find(all.begin(), all.end(), suite) != all.end()) return {suite};
  throw InvalidArgument("unknown verify suite or check '" + suite + "'");
}

VerifyReport run_check(const std::string& name, const MetricModel& model, const VerifyParams& p) {
  using Fn = VerifyReport (*)(const MetricModel&, const VerifyParams&);
  static const std::vector<std::pair<std::string, Fn>> table = {
      {"rauch", &check_rauch},
      {"distance_comparison", &check_distance_comparison},
      {"curvature_operator_norm", &check_curvature_operator_norm},
      {"eta_bound", &check_eta_bound},
      {"transport_vs_exp", &check_transport_vs_exp},
      {"jacobi_derivative", &check_jacobi_derivative},
      {"polarized_curvature", &check_polarized_curvature},
      {"norm_derivative", &check_norm_derivative},
      {"holonomy_quadratic", &check_holonomy_quadratic},
      {"s_curvature_constancy", &check_s_curvature_constancy},
  };
  for (const auto& [n, fn] : table)
    if (n == name) return fn(model, p);
  throw InvalidArgument("unknown check '" + name + "'");
}

}  // namespace finsler
