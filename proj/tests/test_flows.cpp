#include "doctest.h"
#include "finsler/catalog.hpp"
#include "finsler/flows.hpp"
#include "finsler/sampling.hpp"
#include "oracles.hpp"

using namespace finsler;
using oracle::pi;
using oracle::vec;

namespace {

// Unit vector for the stereographic sphere at u along direction d.
Vec sphere_unit(const MetricModel& m, const Vec& u, const Vec& d) { return d / m.F(u, d); }

}  // namespace

TEST_CASE("geodesics of flat charts are straight lines") {
  auto bt = catalog::berwald_torus(3);
  Vec x0 = vec({6.0, 0.5}), y0 = vec({0.7, -0.3});
  auto g = integrate_geodesic(*bt, x0, y0, 5.0, 100);
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    Vec expect = bt->chart().reduce(x0 + g.t[i] * y0);
    Vec diff = g.xs[i] - expect;
    for (int k = 0; k < 2; ++k) diff[k] = std::remainder(diff[k], 2 * pi);
    CHECK(diff.norm() < 1e-9);
  }
  auto e = catalog::euclidean(3);
  auto ge = integrate_geodesic(*e, vec({0, 0, 0}), vec({1, 2, 3}), 2.0);
  CHECK((ge.xs.back() - vec({2, 4, 6})).norm() < 1e-12);
  CHECK_THROWS_AS(integrate_geodesic(*e, vec({0, 0, 0}), vec({0, 0, 0}), 1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate_geodesic(*e, vec({0, 0, 0}), vec({1, 0, 0}), 1.0, 4), InvalidArgument);
}

TEST_CASE("sphere meridians from the north pole") {
  auto s = catalog::sphere_stereographic();
  Vec north = vec({0, 0});
  Vec v = sphere_unit(*s, north, vec({1, 2}));
  auto g = integrate_geodesic(*s, north, v, 2.5);
  for (std::size_t i = 0; i < g.t.size(); i += 25) CHECK(oracle::sphere_distance(north, g.xs[i]) == doctest::Approx(g.t[i]).epsilon(1e-6));
  auto sp = catalog::sphere_polar();
  auto gp = integrate_geodesic(*sp, vec({0.3, 1.0}), vec({1, 0}), 2.0);
  CHECK(gp.xs.back()[0] == doctest::Approx(2.3).epsilon(1e-9));
  CHECK(gp.xs.back()[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("speed is conserved and integration is reproducible") {
  for (auto m : {catalog::sphere_stereographic(), catalog::randers_shear_torus(), catalog::randers_perturbed_torus()}) {
    CAPTURE(m->name());
    auto rng = sample_rng(4, 0, 0);
    Vec x = random_point(*m, rng), y = random_unit(*m, x, rng);
    auto g = integrate_geodesic(*m, x, y, 10.0);
    double worst = 0;
    for (std::size_t i = 0; i < g.t.size(); ++i) worst = std::max(worst, std::abs(m->F(g.lifted[i], g.vs[i]) - g.speed));
    CHECK(worst <= 1e-6 * g.speed);
    auto g2 = integrate_geodesic(*m, x, y, 10.0);
    CHECK((g.xs.back() - g2.xs.back()).norm() == 0.0);
  }
}

TEST_CASE("exp_inverse examples") {
  auto e = catalog::euclidean(2);
  CHECK((exp_inverse(*e, vec({0.1, 0.2}), vec({0.7, -0.4})) - vec({0.6, -0.6})).norm() < 1e-14);

  // Deck-translate oracle on berwald_torus(2).
  auto bt = catalog::berwald_torus(2);
  Vec x = vec({0.5, 0.5}), q = vec({5.5, 1.0});
  Vec best;
  double bestF = 1e300;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      Vec d = q - x + 2 * pi * vec({double(a), double(b)});
      if (bt->F(x, d) < bestF) bestF = bt->F(x, d), best = d;
    }
  CHECK((exp_inverse(*bt, x, q) - best).norm() < 1e-12);
  CHECK_THROWS_AS(exp_inverse(*catalog::flat_torus(2), vec({0, 0}), vec({pi, 0})), AmbiguousPreimage);

  auto s = catalog::sphere_stereographic();
  Vec v = exp_inverse(*s, vec({0, 0}), vec({std::cos(0.3), std::sin(0.3)}));
  CHECK(s->F(vec({0, 0}), v) == doctest::Approx(pi / 2).epsilon(1e-6));
}

TEST_CASE("exp_inverse inverts exp_map") {
  for (auto m : {catalog::sphere_stereographic(), catalog::randers_shear_torus(), catalog::randers_perturbed_torus()}) {
    CAPTURE(m->name());
    for (std::uint64_t s = 0; s < 8; ++s) {
      auto rng = sample_rng(21, 0, s);
      Vec x = random_point(*m, rng);
      Vec v = random_unit(*m, x, rng) * std::uniform_real_distribution<double>(0.05, 0.8)(rng);
      Vec q = exp_map(*m, x, v);
      Vec w = exp_inverse(*m, x, q);
      CHECK((w - v).norm() < 1e-7);
      CHECK((exp_map(*m, x, w) - q).norm() < 1e-9);
    }
  }
}

TEST_CASE("distance") {
  auto bt = catalog::berwald_torus(2);
  CHECK(distance(*bt, vec({0, 0}), vec({pi, 0})) == doctest::Approx(0.5 * pi).epsilon(1e-12));
  double d1 = distance(*bt, vec({0, 0}), vec({pi / 2, 0}));
  double d2 = distance(*bt, vec({pi / 2, 0}), vec({0, 0}));
  CHECK(d1 == doctest::Approx(0.75 * pi).epsilon(1e-12));
  CHECK(d2 == doctest::Approx(0.25 * pi).epsilon(1e-12));
  CHECK(d1 != doctest::Approx(d2));
  auto e = catalog::euclidean(2);
  CHECK(distance(*e, vec({0, 0}), vec({0.3, 0.4})) == doctest::Approx(0.5).epsilon(1e-14));
  auto s = catalog::sphere_stereographic();
  Vec p = vec({0.1, 0.2}), q = vec({-0.3, 0.25});
  CHECK(distance(*s, p, q) == doctest::Approx(oracle::sphere_distance(p, q)).epsilon(1e-8));
  // triangle inequality on sampled triples of an irreversible metric
  auto r = catalog::randers_perturbed_torus(0.1, 0.3);
  for (std::uint64_t k = 0; k < 5; ++k) {
    auto rng = sample_rng(9, 0, k);
    Vec a = random_point(*r, rng);
    Vec b = r->chart().reduce(a + 0.4 * random_direction(2, rng));
    Vec c = r->chart().reduce(a + 0.4 * random_direction(2, rng));
    CHECK(distance(*r, a, c) <= distance(*r, a, b) + distance(*r, b, c) + 1e-9);
  }
}

TEST_CASE("parallel transport") {
  auto bt = catalog::berwald_torus(4);
  auto g = integrate_geodesic(*bt, vec({1, 1}), vec({0.3, 0.9}), 3.0);
  auto f = parallel_transport(*bt, g, vec({0.2, -0.7}));
  for (auto& X : f.X) CHECK((X - vec({0.2, -0.7})).norm() == 0.0);

  // Great-circle oracle: tangential and binormal components stay constant.
  auto s = catalog::sphere_stereographic();
  Vec u0 = vec({0.2, -0.1});
  Vec T0 = sphere_unit(*s, u0, vec({1, 1}));
  Vec X0 = vec({0.3, -0.5});
  auto gs = integrate_geodesic(*s, u0, T0, pi / 2);
  auto fs = parallel_transport(*s, gs, X0);
  Eigen::Vector3d p0 = oracle::stereo_to_sphere(u0), t0 = oracle::stereo_push(u0, T0), b = p0.cross(t0);
  Eigen::Vector3d x3 = oracle::stereo_push(u0, X0);
  double alpha = x3.dot(t0), beta = x3.dot(b);
  for (std::size_t i = 0; i < gs.t.size(); i += 16) {
    double t = gs.t[i];
    Eigen::Vector3d tt = -std::sin(t) * p0 + std::cos(t) * t0;
    Eigen::Vector3d expect = alpha * tt + beta * b;
    CHECK((oracle::stereo_push(gs.lifted[i], fs.X[i]) - expect).norm() < 1e-6);
  }
  // g_T norm is preserved on a non-Berwald metric.
  auto r = catalog::randers_shear_torus();
  auto gr = integrate_geodesic(*r, vec({0.3, 0.2}), vec({0.4, 0.8}), 4.0);
  auto fr = parallel_transport(*r, gr, vec({1.0, -0.2}));
  double n0 = norm_T(*r, gr.lifted[0], gr.vs[0], fr.X[0]);
  for (std::size_t i = 0; i < gr.t.size(); ++i)
    CHECK(std::abs(norm_T(*r, gr.lifted[i], gr.vs[i], fr.X[i]) - n0) <= 1e-6 * n0);
}

TEST_CASE("curvature operator and flag curvature") {
  auto s = catalog::sphere_stereographic();
  Vec u = vec({0.3, -0.2});
  Vec T = sphere_unit(*s, u, vec({1, 0}));
  Mat g = fundamental_tensor(*s, u, T);
  Vec V = vec({0, 1});
  V /= std::sqrt(V.dot(g * V));
  CHECK((curvature_operator(*s, u, T, V) - V).norm() < 1e-5);
  CHECK(curvature_operator(*s, u, T, T).norm() < 1e-8);
  Vec V1 = vec({0.3, 0.8}), V2 = vec({-1.0, 0.4});
  CHECK((curvature_operator(*s, u, T, V1 + V2) - curvature_operator(*s, u, T, V1) - curvature_operator(*s, u, T, V2)).norm() < 1e-8);
  CHECK(flag_curvature(*s, u, T, V1) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(flag_curvature(*catalog::sphere_polar(), vec({1.0, 0.5}), vec({0.3, 1}), vec({1, -0.2})) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(flag_curvature(*s, u, 2.0 * T, 3.0 * V1) == doctest::Approx(flag_curvature(*s, u, T, V1)).epsilon(1e-9));
  CHECK_THROWS_AS(flag_curvature(*s, u, T, 2.0 * T), DegenerateFlag);
  for (auto m : {catalog::berwald_torus(2), catalog::flat_torus(3), catalog::euclidean(2)}) {
    for (std::uint64_t k = 0; k < 100; ++k) {
      auto rng = sample_rng(12, 0, k);
      Vec x = random_point(*m, rng), y = random_unit(*m, x, rng), w = random_direction(m->dim(), rng);
      try {
        CHECK(std::abs(flag_curvature(*m, x, y, w)) <= 1e-6);
      } catch (const DegenerateFlag&) {
      }
    }
  }
  // randers on a conformally flat a: y-dependent flag curvature is still scale invariant
  auto r = catalog::randers_perturbed_torus(0.2, 0.3);
  Vec xr = vec({0.4, 1.0}), yr = vec({0.5, 0.5}), Vr = vec({-0.3, 1.0});
  CHECK(flag_curvature(*r, xr, 2.5 * yr, 0.7 * Vr) == doctest::Approx(flag_curvature(*r, xr, yr, Vr)).epsilon(1e-9));
}

TEST_CASE("T-curvature dichotomy") {
  auto check_zero = [](const ModelPtr& m, double tol) {
    for (std::uint64_t k = 0; k < 30; ++k) {
      auto rng = sample_rng(13, 0, k);
      Vec x = random_point(*m, rng), y = random_unit(*m, x, rng), v = random_unit(*m, x, rng);
      CHECK(std::abs(t_curvature(*m, x, y, v)) < tol);
    }
  };
  check_zero(catalog::berwald_torus(2), 1e-6);
  check_zero(catalog::berwald_torus(10), 1e-6);
  check_zero(catalog::sphere_polar(), 1e-8);
  check_zero(catalog::randers_perturbed_torus(0.2, 0.0), 1e-8);
  auto r = catalog::randers_shear_torus();
  double worst = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    auto rng = sample_rng(14, 0, k);
    Vec x = random_point(*r, rng), y = random_unit(*r, x, rng), v = random_unit(*r, x, rng);
    worst = std::max(worst, std::abs(t_curvature(*r, x, y, v)));
  }
  CHECK(worst > 1e-3);
  CHECK_THROWS_AS(t_curvature(*r, vec({0, 0}), vec({2, 0}), vec({1, 0})), InvalidArgument);
}

TEST_CASE("Jacobi fields") {
  auto ft = catalog::flat_torus(2);
  auto g = integrate_geodesic(*ft, vec({1, 2}), vec({0.6, 0.8}), 2.0);
  auto js = jacobi_field(*ft, g, vec({0.1, 0.2}), vec({-0.3, 0.5}));
  for (std::size_t i = 0; i < g.t.size(); ++i)
    CHECK((js.J[i] - (vec({0.1, 0.2}) + g.t[i] * vec({-0.3, 0.5}))).norm() < 1e-12);

  auto s = catalog::sphere_stereographic();
  Vec u = vec({0.1, 0.1});
  Vec T = sphere_unit(*s, u, vec({1, -0.4}));
  Mat gm = fundamental_tensor(*s, u, T);
  Vec X = vec({0.4, 1.0});
  X -= (X.dot(gm * T)) * T;
  X /= std::sqrt(X.dot(gm * X));
  auto gs = integrate_geodesic(*s, u, T, 2.5);
  auto jj = jacobi_field(*s, gs, Vec::Zero(2), X);
  for (std::size_t i = 0; i < gs.t.size(); i += 10)
    CHECK(norm_T(*s, gs.lifted[i], gs.vs[i], jj.J[i]) == doctest::Approx(std::sin(gs.t[i])).epsilon(1e-5));

  // linearity
  auto r = catalog::randers_shear_torus();
  auto gr = integrate_geodesic(*r, vec({0.3, 0.2}), vec({0.4, 0.8}), 2.0);
  auto a = jacobi_field(*r, gr, vec({1, 0}), vec({0, 1}));
  auto b = jacobi_field(*r, gr, vec({0, 2}), vec({-1, 0}));
  auto ab = jacobi_field(*r, gr, vec({1, 2}), vec({-1, 1}));
  CHECK((ab.J.back() - a.J.back() - b.J.back()).norm() < 1e-8);

  // consistency with central differences of exp
  for (auto m : {r, s}) {
    Vec x = m == s ? u : vec({0.3, 0.2});
    Vec v = m == s ? T : vec({0.4, 0.8});
    Mat D = jacobi_endpoint_matrix(*m, x, v, 1.0);
    const double h = 1e-5;
    for (int k = 0; k < 2; ++k) {
      Vec vp = v, vm = v;
      vp[k] += h;
      vm[k] -= h;
      Vec col = (integrate_geodesic(*m, x, vp, 1.0, 200).lifted.back() - integrate_geodesic(*m, x, vm, 1.0, 200).lifted.back()) / (2 * h);
      CHECK((D.col(k) - col).norm() < 1e-4);
    }
  }
  CHECK(first_conjugate_time(*s, u, T, 4.0) == doctest::Approx(pi).epsilon(1e-3));
  CHECK(first_conjugate_time(*ft, vec({0, 0}), vec({1, 0}), 4.0) == kInf);
}
