// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "finsler/bounds.hpp"
#include "finsler/catalog.hpp"
#include "finsler/centermass.hpp"
#include "finsler/flows.hpp"
#include "finsler/invariants.hpp"
#include "finsler/sampling.hpp"
#include "finsler/tensors.hpp"
#include "finsler/verify.hpp"
#include "oracles.hpp"

using namespace finsler;
using oracle::pi;
using oracle::vec;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "  ok   " : "  FAIL ") + what);
  }
};

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VerifyParams vp(double k, double Lambda, std::size_t samples, std::uint64_t seed = 1) {
  VerifyParams p;
  p.k_used = k;
  p.Lambda_used = Lambda;
  p.samples = samples;
  p.seed = seed;
  return p;
}

std::string report_line(const VerifyReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s on %s: %zu samples, %zu violations, worst margin %.3g, tol %.1g%s",
                r.check_name.c_str(), r.model.c_str(), r.samples, r.violations, r.worst_margin, r.tolerance,
                r.applicable ? "" : " (not applicable)");
  return buf;
}

// ---------------------------------------------------------------------------

Criterion example_tori() {
  Criterion c{1, "Berwald torus family: flatness, volume, reversibility, loops, uniformity"};
  auto t0 = std::chrono::steady_clock::now();
  double prev_Lambda = 0.0, prev_loop_bound = kInf;
  for (int n : {2, 5, 10}) {
    auto m = catalog::berwald_torus(n);
    double kmax = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
      auto rng = sample_rng(11, 0xacc1, i);
      Vec x = random_point(*m, rng);
      Vec y = random_unit(*m, x, rng);
      Vec V = random_direction(2, rng);
      Mat g = fundamental_tensor(*m, x, y);
      V -= (y.dot(g * V)) * y;  // y is F-unit, so g(y, y) = 1
      kmax = std::max(kmax, std::abs(flag_curvature(*m, x, y, V)));
    }
    InvariantOptions opt;
    opt.volume_order = 64;
    auto rep = measure_invariants(*m, opt);
    const double lam_exact = 2.0 * n - 1.0;
    const std::string tag = "n=" + std::to_string(n) + ": ";
    c.expect(kmax < 1e-6, tag + fmt("max |K| over 100 flags = %.3g < 1e-6", kmax));
    c.expect(std::abs(*rep.vol_HT - 4 * pi * pi) <= 0.01 * 4 * pi * pi,
             tag + fmt("HT volume %.10g vs 4 pi^2 = %.10g (1%%)", *rep.vol_HT, 4 * pi * pi));
    c.expect(std::abs(rep.lambda_hat - lam_exact) <= 0.02 * lam_exact,
             tag + fmt("lambda_hat %.10g vs 2n-1 = %g (2%%)", rep.lambda_hat, lam_exact));
    c.expect(rep.shortest_loop && std::abs(rep.shortest_loop->length - 2 * pi / n) <= 1e-6,
             tag + fmt("shortest closed geodesic %.12g vs 2 pi/n = %.12g", rep.shortest_loop->length, 2 * pi / n));
    c.expect(rep.Lambda_hat >= rep.lambda_hat * rep.lambda_hat - 1e-3,
             tag + fmt("Lambda_hat %.10g >= lambda_hat^2 - 1e-3 = %.10g", rep.Lambda_hat,
                       rep.lambda_hat * rep.lambda_hat - 1e-3));
    c.expect(rep.Lambda_hat >= prev_Lambda, tag + fmt("Lambda_hat nondecreasing (%.6g >= %.6g)", rep.Lambda_hat, prev_Lambda));
    const double loop_bound = 2.0 * pi / n / (1.0 + rep.lambda_hat);
    c.notes.push_back("  info " + tag + fmt("loop injectivity bound 2 pi/n / (1 + lambda_hat) = %.6g", loop_bound));
    c.expect(loop_bound < prev_loop_bound, tag + "loop injectivity bound decreasing in n");
    prev_Lambda = rep.Lambda_hat;
    prev_loop_bound = loop_bound;
  }
  double secs = seconds_since(t0);
  c.expect(secs < 120.0, fmt("runtime %.2f s < 120 s", secs));
  return c;
}

Criterion rauch_suite() {
  Criterion c{2, "Rauch band on the sphere and berwald_torus(3)"};
  VerifyParams ps = vp(1.0, 1.0, 200);
  ps.tolerance = 1e-3;
  auto s = check_rauch(*catalog::sphere_stereographic(), ps);
  c.expect(s.violations == 0 && s.samples >= 200, report_line(s));
  const double gap = s.stat("perpendicular_lower_gap");
  c.expect(std::abs(gap) <= 1e-4, fmt("sphere perpendicular fields: max relative gap to sin t/t = %.3g <= 1e-4", gap));
  VerifyParams pb = vp(1e-6, 25.0, 200);
  pb.tolerance = 1e-3;
  auto b = check_rauch(*catalog::berwald_torus(3), pb);
  c.expect(b.violations == 0 && b.samples >= 200, report_line(b));
  return c;
}

Criterion inequality_suite() {
  Criterion c{3, "Jacobi and Berwald inequality checks on flat torus, sphere and berwald_torus(5)"};
  // independent bisection for the Jacobi time at k = Lambda = 1
  const double t_oracle = oracle::bisect(
      [](double t) { return (t * std::cosh(t) - std::sinh(t)) / std::sin(t) - 1.0 / 20.0; }, 1e-6, pi / 2 - 1e-9, 1e-14);
  const double t_frak = jacobi_time(1.0, 1.0);
  c.expect(std::abs(t_frak - t_oracle) <= 1e-10, fmt("t_frak(1,1) = %.15g, bisection oracle %.15g", t_frak, t_oracle));

  struct Case {
    ModelPtr model;
    double k;
    double Lambda;
  };
  auto b5 = catalog::berwald_torus(5);
  const double Lambda5 = uniformity(*b5, 200, 1) * (1.0 + 1e-6);
  std::vector<Case> cases = {
      {catalog::flat_torus(2), 0.0, 1.0}, {catalog::sphere_stereographic(), 1.0, 1.0}, {b5, 1e-6, Lambda5}};
  for (const auto& cs : cases) {
    for (const char* name : {"curvature_operator_norm", "eta_bound", "transport_vs_exp", "jacobi_derivative",
                             "polarized_curvature", "norm_derivative"}) {
      VerifyParams p = vp(cs.k, cs.Lambda, 100, 3);
      if (std::string(name) == "jacobi_derivative") p.t_max = t_frak;
      auto r = run_check(name, *cs.model, p);
      c.expect(r.applicable && r.violations == 0, report_line(r));
    }
  }
  auto op = check_curvature_operator_norm(*catalog::sphere_stereographic(), vp(1.0, 1.0, 100, 3));
  c.expect(std::abs(op.stat("max_norm") - 1.0) <= 1e-4 && std::abs(op.stat("min_norm") - 1.0) <= 1e-4,
           fmt("sphere curvature operator norm in [%.8g, %.8g], within 1e-4 of 1", op.stat("min_norm"), op.stat("max_norm")));
  return c;
}

Criterion holonomy_law() {
  Criterion c{4, "Quadratic holonomy defect"};
  auto s = catalog::sphere_stereographic();
  VerifyParams p = vp(1.0, 1.0, 24, 5);
  p.triangle_scales = {0.2, 0.1, 0.05};
  auto r = check_holonomy_quadratic(*s, p);
  c.expect(r.applicable && r.violations == 0, report_line(r));
  c.expect(r.stat("min_slope") >= 1.8 && r.stat("max_slope") <= 2.2,
           fmt("sphere log-log slopes in [%.4f, %.4f] within [1.8, 2.2]", r.stat("min_slope"), r.stat("max_slope")));

  // spherical excess: the loop rotates X by the enclosed area
  double worst = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    auto rng = sample_rng(17, 0xacc4, i);
    Vec p1 = random_point(*s, rng);
    Vec u = random_unit(*s, p1, rng), v = random_unit(*s, p1, rng);
    Eigen::Vector3d eu = oracle::stereo_push(p1, u), ev = oracle::stereo_push(p1, v);
    if (eu.cross(ev).norm() < 0.3) continue;
    Vec X = random_direction(2, rng);
    const double R = 0.1;
    const double D = holonomy_defect(*s, p1, Vec(0.5 * R * u), Vec(0.5 * R * v), X);
    Eigen::Vector3d A = oracle::stereo_to_sphere(p1);
    Eigen::Vector3d B = oracle::stereo_to_sphere(oracle::sphere_exp(p1, 0.5 * R * u));
    Eigen::Vector3d C = oracle::stereo_to_sphere(oracle::sphere_exp(p1, 0.5 * R * v));
    const double E = 2.0 * std::atan2(std::abs(A.dot(B.cross(C))), 1.0 + A.dot(B) + B.dot(C) + C.dot(A));
    const double expected = 2.0 * std::sin(0.5 * E) * s->F(p1, X);
    worst = std::max(worst, std::abs(D - expected) / expected);
  }
  c.expect(worst <= 0.05, fmt("R = 0.1 defect vs spherical-excess rotation: worst relative error %.3g <= 5%%", worst));

  auto f = check_holonomy_quadratic(*catalog::flat_torus(2), vp(0.0, 1.0, 24, 5));
  c.expect(f.violations == 0 && f.stat("max_defect") < 1e-8, fmt("flat torus max defect %.3g < 1e-8", f.stat("max_defect")));
  return c;
}

Criterion bound_values() {
  Criterion c{5, "Bound evaluators"};
  auto b = injectivity_bound(2, 1.0, 0.0, 1.0, pi, 4 * pi * pi);
  const long double PI = 3.141592653589793238462643383279502884L;
  const long double closed = 0.5L * std::min(2.0L * PI, 4.0L * PI * PI / (2.0L * std::sinh(PI)));
  c.expect(std::abs(b.value - static_cast<double>(closed)) <= 1e-10,
           fmt("injectivity bound %.15g vs closed form %.15g", b.value, static_cast<double>(closed)));
  const double c0_oracle =
      oracle::bisect([](double t) { return std::sinh(3 * t) / (3 * t) - 2.0; }, 1e-6, 2.0, 1e-14);
  const double c0 = condition_C0(1.0, 1.0);
  c.expect(std::abs(c0 - c0_oracle) <= 1e-8, fmt("C0(1,1) = %.15g vs bisection %.15g", c0, c0_oracle));
  const double v = convexity_zero(1.0, 1.0);
  c.expect(std::abs(v - pi / 4) <= 1e-12, fmt("first zero of s_1' - s_1 = %.15g vs pi/4", v));
  const double t11 = jacobi_time(1.0, 1.0), t12 = jacobi_time(1.0, 2.0);
  c.expect(t12 < t11, fmt("t_frak(1,2) = %.10g < t_frak(1,1) = %.10g", t12, t11));
  return c;
}

Criterion center_of_mass_suite() {
  Criterion c{6, "Center of mass"};
  auto e = catalog::euclidean(2);
  auto two = make_distribution({vec({0, 0}), vec({2, 0})}, {0.5, 0.5});
  auto mid = center_of_mass(*e, two, vec({0.3, 0.9}));
  c.expect((mid.point - vec({1, 0})).norm() <= 1e-10, fmt("euclidean midpoint error %.3g <= 1e-10", (mid.point - vec({1, 0})).norm()));

  // three points in a 0.1 cap of the unit sphere
  auto s = catalog::sphere_stereographic();
  Vec center = vec({0.2, -0.1});
  Eigen::Vector3d P = oracle::stereo_to_sphere(center);
  Eigen::Vector3d e1 = oracle::stereo_push(center, vec({1, 0})).normalized();
  Eigen::Vector3d e2 = P.cross(e1);
  std::vector<Vec> pts;
  for (auto [r, a] : {std::pair{0.09, 0.3}, std::pair{0.07, 2.4}, std::pair{0.095, 4.2}}) {
    Eigen::Vector3d w = std::cos(a) * e1 + std::sin(a) * e2;
    pts.push_back(oracle::sphere_to_stereo(std::cos(r) * P + std::sin(r) * w));
  }
  auto cap = make_distribution(pts, {0.5, 0.3, 0.2});
  CenterOptions opt;
  opt.tol = 1e-12;
  std::vector<Vec> found;
  for (Vec start : {center, Vec(center + vec({0.03, 0.0})), Vec(center + vec({-0.02, 0.04}))})
    found.push_back(center_of_mass(*s, cap, start, opt).point);
  const double spread = std::max((found[0] - found[1]).norm(), (found[0] - found[2]).norm());
  c.expect(spread <= 10 * opt.tol, fmt("three starts agree: spread %.3g <= 10 tol", spread));

  auto residual = [&](const Vec& u) {
    Eigen::Vector3d q = oracle::stereo_to_sphere(u), acc = Eigen::Vector3d::Zero();
    for (std::size_t a = 0; a < cap.size(); ++a)
      acc += cap.weights[a] * oracle::sphere_log3(q, oracle::stereo_to_sphere(cap.points[a]));
    return acc.norm();
  };
  const int N = 400;
  const double half = 0.1, h = 2 * half / (N - 1);
  double best = kInf;
  Vec arg = center;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Vec u = center + vec({-half + i * h, -half + j * h});
      double r = residual(u);
      if (r < best) {
        best = r;
        arg = u;
      }
    }
  const double dev = (arg - found[0]).cwiseAbs().maxCoeff();
  c.expect(dev <= h, fmt("grid-search zero within %.3g of the center (grid step %.3g)", dev, h));

  // contraction witness at admissible radii on Berwald models
  double worst = 0.0;
  for (int n : {2, 5, 10}) {
    auto b = catalog::berwald_torus(n);
    const double lam = reversibility(*b, 200, 1);
    const double Lam = uniformity(*b, 200, 1);
    const double sigma = 2 * pi / n / (1 + lam);
    const double r = mass_radius(2, 0.0, Lam, sigma).value;
    Vec p = vec({1.0, 2.0});
    std::vector<Vec> mp;
    for (int a = 0; a < 4; ++a) {
      double ang = 0.7 + a * 1.6;
      mp.push_back(exp_map(*b, p, Vec(normalize_F(*b, p, vec({std::cos(ang), std::sin(ang)})) * 0.5 * r)));
    }
    auto dist = make_distribution(mp, {0.1, 0.2, 0.3, 0.4});
    auto q = center_of_mass(*b, dist, p).point;
    for (int d = 0; d < 6; ++d) {
      Vec T = normalize_F(*b, q, vec({std::cos(0.4 + d), std::sin(0.4 + d)}));
      worst = std::max(worst, contraction_witness(*b, dist, q, T, 0.5 * r));
    }
  }
  {
    const double r = mass_radius(2, 1.0, 1.0, pi).value;
    std::vector<Vec> sp;
    for (auto [rr, a] : {std::pair{0.9, 0.3}, std::pair{0.7, 2.4}, std::pair{0.95, 4.2}}) {
      Eigen::Vector3d w = std::cos(a) * e1 + std::sin(a) * e2;
      sp.push_back(oracle::sphere_to_stereo(std::cos(rr * r) * P + std::sin(rr * r) * w));
    }
    auto sd = make_distribution(sp, {0.5, 0.3, 0.2});
    for (int d = 0; d < 6; ++d) {
      Vec T = normalize_F(*s, center, vec({std::cos(0.4 + d), std::sin(0.4 + d)}));
      worst = std::max(worst, contraction_witness(*s, sd, center, T, r));
    }
  }
  c.expect(worst <= 1.0 / 20 + 0.02, fmt("contraction witness max %.4g <= 1/20 + 0.02", worst));
  return c;
}

Criterion t_curvature_dichotomy() {
  Criterion c{7, "T-curvature dichotomy"};
  std::vector<ModelPtr> berwald = {catalog::euclidean(2),     catalog::flat_torus(2),     catalog::sphere_stereographic(),
                                   catalog::sphere_polar(),   catalog::berwald_torus(2),  catalog::berwald_torus(5),
                                   catalog::berwald_torus(10), catalog::berwald_torus(3, 3)};
  for (const auto& m : berwald) {
    const double T = t_curvature_bound(*m, 200, 1);
    c.expect(T < 1e-6, m->name() + fmt(": sup |T| = %.3g < 1e-6", T));
  }
  auto shear = catalog::randers_shear_torus();
  const double T = t_curvature_bound(*shear, 200, 1);
  c.expect(T > 1e-3, shear->name() + fmt(": sup |T| = %.4g > 1e-3", T));
  return c;
}

Criterion consistency_gate() {
  Criterion c{8, "Injectivity bound from measured invariants never exceeds the truth"};
  auto measured_bound = [](const InvariantReport& rep) {
    const double k = std::max(std::abs(rep.K_min), std::abs(rep.K_max));
    const double V = std::min(*rep.vol_BH, *rep.vol_HT);
    return injectivity_bound(rep.dim, k, rep.T_bound, std::max(1.0, rep.Lambda_hat), *rep.diam_hat, V).value;
  };
  {
    auto m = catalog::flat_torus(2);
    const double b = measured_bound(measure_invariants(*m));
    c.expect(b <= pi, m->name() + fmt(": bound %.6g <= injectivity radius pi", b));
  }
  for (int n : {2, 5, 10}) {
    auto m = catalog::berwald_torus(n);
    auto rep = measure_invariants(*m);
    const double b = measured_bound(rep);
    const double lam = rep.lambda_hat;
    const double gate = pi / n * (1.0 + lam);
    c.expect(b <= gate, m->name() + fmt(": bound %.6g <= pi/n (1 + lambda_hat) = %.6g", b, gate));
    // a forward geodesic loop of length L through p cannot minimize past lambda L / (1 + lambda)
    const double L = rep.shortest_loop->length;
    const double loop_cap = lam * L / (1.0 + lam);
    c.expect(b <= loop_cap, m->name() + fmt(": bound %.6g <= lambda L / (1 + lambda) = %.6g", b, loop_cap));
  }
  return c;
}

}  // namespace

int main() {
  set_thread_count(default_thread_count());
  std::vector<Criterion (*)()> suite = {example_tori,          rauch_suite,          inequality_suite,
                                        holonomy_law,          bound_values,         center_of_mass_suite,
                                        t_curvature_dichotomy, consistency_gate};
  int failed = 0;
  for (auto fn : suite) {
    auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("  FAIL exception: ") + e.what());
    }
    std::printf("criterion %d: %s  %s (%.1f s)\n", c.id, c.ok ? "PASS" : "FAIL", c.title.c_str(), seconds_since(t0));
    for (const auto& n : c.notes) std::printf("%s\n", n.c_str());
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(suite.size()) - failed, suite.size());
  return failed == 0 ? 0 : 1;
}
