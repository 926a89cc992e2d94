#include "doctest.h"
#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/sampling.hpp"
#include "oracles.hpp"

using namespace finsler;
using oracle::vec;

TEST_CASE("flat models have vanishing coefficients") {
  for (auto m : {catalog::euclidean(2), catalog::berwald_torus(2), catalog::berwald_torus(10), catalog::flat_torus(3)}) {
    CAPTURE(m->name());
    Vec x = Vec::Constant(m->dim(), 0.3), y = Vec::LinSpaced(m->dim(), 1.0, -0.5);
    auto c = connection(*m, x, y);
    CHECK(c.gamma.max_abs() == 0.0);
    CHECK(c.N.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.Gamma.max_abs() == 0.0);
    CHECK(geodesic_spray(*m, x, y).norm() == 0.0);
  }
}

TEST_CASE("round sphere Christoffel symbols in the polar chart") {
  auto sp = catalog::sphere_polar();
  for (double th : {0.4, 1.0, 2.2}) {
    Vec x = vec({th, 0.7}), y = vec({0.3, -1.1});
    auto c = connection(*sp, x, y);
    CHECK(c.gamma(0, 1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-10));
    CHECK(c.gamma(1, 0, 1) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-10));
    CHECK(c.gamma(1, 1, 0) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-10));
    CHECK(std::abs(c.gamma(0, 0, 0)) < 1e-12);
    CHECK(std::abs(c.gamma(1, 1, 1)) < 1e-12);
    CHECK((c.Gamma - c.gamma).max_abs() < 1e-10);
    Mat Ny = c.gamma.contract3(y);
    CHECK((c.N - Ny).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sprays agree with the Euler-Lagrange oracle") {
  for (auto m : {catalog::sphere_polar(), catalog::sphere_stereographic(), catalog::randers_shear_torus(),
                 catalog::randers_perturbed_torus(0.2, 0.3)}) {
    CAPTURE(m->name());
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto rng = sample_rng(3, 0, s);
      Vec x = random_point(*m, rng), y = random_unit(*m, x, rng);
      Vec G = geodesic_spray(*m, x, y);
      Vec ref = oracle::euler_lagrange_spray(*m, x, y);
      CHECK((G - ref).norm() < 1e-5);
    }
  }
}

TEST_CASE("nonlinear connection is the vertical derivative of the spray") {
  auto m = catalog::randers_shear_torus();
  Vec x = vec({0.4, 2.0}), y = vec({0.6, 0.9});
  Mat N = nonlinear_connection(*m, x, y);
  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    Vec yp = y, ym = y;
    yp[j] += h;
    ym[j] -= h;
    Vec col = (geodesic_spray(*m, x, yp) - geodesic_spray(*m, x, ym)) / (2 * h);
    for (int i = 0; i < 2; ++i) CHECK(N(i, j) == doctest::Approx(col[i]).epsilon(1e-7));
  }
}

TEST_CASE("homogeneity and symmetry properties") {
  for (auto m : {catalog::randers_shear_torus(), catalog::randers_perturbed_torus(), catalog::sphere_stereographic(3)}) {
    CAPTURE(m->name());
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto rng = sample_rng(8, 0, s);
      Vec x = random_point(*m, rng), y = random_direction(m->dim(), rng);
      auto c = connection(*m, x, y);
      const int n = m->dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) CHECK(c.Gamma(i, j, k) == c.Gamma(i, k, j));
      Mat N2 = nonlinear_connection(*m, x, 2.0 * y);
      CHECK((N2 - 2.0 * c.N).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, c.N.cwiseAbs().maxCoeff()));
      Vec G = geodesic_spray(*m, x, y);
      for (double lam : {0.5, 2.0, 3.0}) {
        Vec Gl = geodesic_spray(*m, x, lam * y);
        CHECK((Gl - lam * lam * G).norm() <= 1e-7 * std::max(1e-12, lam * lam * G.norm()) + 1e-15);
      }
      // Chern coefficients are degree-0 homogeneous
      CHECK((chern_coefficients(*m, x, 3.0 * y) - c.Gamma).max_abs() < 1e-9);
    }
  }
}

TEST_CASE("berwald defect separates Berwald from non-Berwald randers") {
  CHECK(berwald_sweep(*catalog::berwald_torus(3), 50, 1).max_defect < 1e-8);
  CHECK(berwald_sweep(*catalog::sphere_polar(), 50, 1).max_defect < 1e-8);
  CHECK(berwald_sweep(*catalog::randers_perturbed_torus(0.2, 0.0), 50, 1).max_defect < 1e-8);
  auto sweep = berwald_sweep(*catalog::randers_shear_torus(), 200, 1);
  CHECK(sweep.max_defect > 1e-3);
  CHECK_FALSE(sweep.numerically_berwald);
  CHECK(has_zero_spray(*catalog::berwald_torus(4)));
  CHECK_FALSE(has_zero_spray(*catalog::randers_shear_torus()));
}
