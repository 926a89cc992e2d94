#include <cmath>

#include "doctest.h"
#include "finsler/bounds.hpp"
#include "oracles.hpp"

using namespace finsler;
using oracle::pi;

TEST_CASE("comparison function") {
  for (double t : {0.1, 1.0, 7.0}) CHECK(s_k(0.0, t) == t);
  CHECK(s_k(1.0, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s_k(-4.0, 0.7) == doctest::Approx(std::sinh(1.4) / 2).epsilon(1e-14));
  CHECK(std::abs(s_k(1e-8, 1.3) - 1.3) < 1e-7);
  CHECK(std::abs(s_k(-1e-8, 1.3) - 1.3) < 1e-7);
  // series branch meets the closed form
  CHECK(s_k(1.0, 0.0316) == doctest::Approx(std::sin(0.0316)).epsilon(1e-15));
  CHECK(s_k(1.0, 0.0317) == doctest::Approx(std::sin(0.0317)).epsilon(1e-15));
  CHECK(s_k_integral(1.0, 2, pi) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(s_k_integral(0.0, 3, 2.0) == doctest::Approx(8.0 / 3).epsilon(1e-13));
  // int_0^T sinh^2 = (sinh 2T - 2T)/4
  CHECK(s_k_integral(-1.0, 3, 1.5) == doctest::Approx((std::sinh(3.0) - 3.0) / 4).epsilon(1e-12));
  // int_0^T sin^3 = 2/3 - cos T + cos^3 T / 3
  double T = 2.2;
  CHECK(s_k_integral(1.0, 4, T) == doctest::Approx(2.0 / 3 - std::cos(T) + std::pow(std::cos(T), 3) / 3).epsilon(1e-12));
}

TEST_CASE("injectivity bound on the round sphere data") {
  auto r = injectivity_bound(2, 1.0, 0.0, 1.0, pi, 4 * pi * pi);
  long double PI = 3.141592653589793238462643383279502884L;
  long double expect = 0.5L * std::min(2 * PI, 4 * PI * PI / (2 * std::sinh(PI)));
  CHECK(std::abs(r.value - static_cast<double>(expect)) < 1e-10);
  CHECK(r.value == doctest::Approx(0.8545).epsilon(1e-4));
  CHECK(r.value == std::min(r.arm("curvature"), r.arm("volume")));

  auto flat = injectivity_bound(2, 0.0, 0.0, 4.0, 1.0, 3.0);
  CHECK(std::isinf(flat.arm("curvature")));
  CHECK(flat.value == flat.arm("volume"));
  CHECK(flat.value == doctest::Approx(3.0 / (2 * std::pow(4.0, 3) * 1.0) / 3.0).epsilon(1e-14));

  auto big = injectivity_bound(2, 1.0, 0.0, 1.0, pi, 1e12);
  CHECK(big.value == doctest::Approx(pi).epsilon(1e-14));

  CHECK_THROWS_AS(injectivity_bound(1, 1, 0, 1, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(injectivity_bound(2, -1, 0, 1, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(injectivity_bound(2, 1, 0, 0.5, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(injectivity_bound(2, 1, 0, 1, 0, 1), InvalidArgument);
}

TEST_CASE("bounds are monotone in volume and T-curvature") {
  double prev_v = 0.0;
  for (double V : {0.5, 1.0, 4.0, 30.0}) {
    auto r = injectivity_bound(3, 0.5, 0.2, 2.0, 1.5, V);
    CHECK(r.arm("volume") >= prev_v);
    prev_v = r.arm("volume");
  }
  double prev_t = kInf;
  for (double tau : {0.0, 0.1, 1.0, 5.0}) {
    auto r = closed_geodesic_length_bound(3, 0.5, tau, 2.0, 1.5, 10.0);
    CHECK(r.value <= prev_t);
    prev_t = r.value;
  }
}

TEST_CASE("closed geodesic length bound") {
  auto r = closed_geodesic_length_bound(2, 0.0, 0.0, 1.0, pi, 4 * pi * pi);
  CHECK(r.value == doctest::Approx(2 * pi).epsilon(1e-14));
  auto a = closed_geodesic_length_bound(3, 1.0, 0.3, 1.5, 5.0, 2.0);
  auto b = closed_geodesic_length_bound(3, 1.0, 0.3, 1.5, 5.0, 4.0);
  CHECK(b.value == doctest::Approx(2 * a.value).epsilon(1e-14));
  // cap pi/(2 sqrt k) clips D in the first term only
  auto c = closed_geodesic_length_bound(2, 1.0, 0.0, 1.0, 3.0, 1.0);
  CHECK(c.value == doctest::Approx(1.0 / (2 * 1.0)).epsilon(1e-14));
  auto neg = closed_geodesic_length_bound(2, -1.0, 0.0, 1.0, 1.0, 1.0);
  CHECK(neg.value == doctest::Approx(1.0 / (2 * std::sinh(1.0))).epsilon(1e-14));
}

TEST_CASE("convexity bound") {
  CHECK(convexity_bound(1.0, pi, 1.0).value == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(convexity_bound(0.0, 3.0, 2.0).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(convexity_bound(1.0, 10.0, 2.0).value == doctest::Approx(pi / 2).epsilon(1e-15));
  auto r = closed_geodesic_injectivity_bound(1.0, 1.0, 2 * pi);
  CHECK(r.value == doctest::Approx(pi).epsilon(1e-15));
  CHECK(std::isinf(closed_geodesic_injectivity_bound(0.0, 2.0, 3.0).arm("conjugate")));
}

TEST_CASE("first zero of s' - xi s") {
  CHECK(std::abs(convexity_zero(1.0, 0.0) - pi / 2) < 1e-12);
  CHECK(std::abs(convexity_zero(1.0, 1.0) - pi / 4) < 1e-12);
  CHECK(std::abs(convexity_zero(4.0, 0.0) - pi / 4) < 1e-12);
  CHECK(std::abs(convexity_zero(0.0, 2.0) - 0.5) < 1e-12);
  CHECK(std::isinf(convexity_zero(0.0, 0.0)));
  CHECK(std::isinf(convexity_zero(-1.0, 0.5)));
  // cosh t = 2 sinh t  ->  tanh t = 1/2
  CHECK(std::abs(convexity_zero(-1.0, 2.0) - std::atanh(0.5)) < 1e-12);
}

TEST_CASE("jacobi time") {
  auto ratio = [](double t) { return (t * std::cosh(t) - std::sinh(t)) / std::sin(t); };
  double t11 = oracle::bisect([&](double t) { return ratio(t) - 1.0 / 20; }, 0.01, pi / 2, 1e-14);
  CHECK(std::abs(jacobi_time(1.0, 1.0) - t11) < 1e-10);
  CHECK(jacobi_time(1.0, 2.0) < jacobi_time(1.0, 1.0));
  CHECK(std::isinf(jacobi_time(0.0, 3.0)));
  // scaling: t(k) = t(1)/sqrt(k)
  CHECK(jacobi_time(4.0, 1.0) == doctest::Approx(t11 / 2).epsilon(1e-10));
  CHECK(t11 > 1.0 / 40);
}

TEST_CASE("mass radius") {
  CHECK(mass_radius(2, 0.0, 1.0, 1.0).value == doctest::Approx(1.0 / 80).epsilon(1e-15));
  CHECK(mass_radius(2, 1.0, 1.0, 100.0).value == doctest::Approx(1.0 / 80).epsilon(1e-15));
  double prev = kInf;
  for (double L : {1.0, 1.5, 2.0, 4.0}) {
    auto r = mass_radius(3, 0.7, L, 2.0);
    CHECK(r.value <= prev);
    prev = r.value;
  }
}

TEST_CASE("condition delta constants") {
  double t0 = oracle::bisect([](double t) { return std::sinh(3 * t) / (3 * t) - 2.0; }, 0.1, 2.0, 1e-15);
  CHECK(std::abs(condition_C0(1.0, 1.0) - t0) < 1e-8);
  CHECK(3 * t0 == doctest::Approx(2.1773).epsilon(1e-4));
  CHECK(std::isinf(condition_C2(0.0, 3.0)));
  CHECK(std::isinf(condition_C0(0.0, 3.0)));
  // C2 at k = 1, Lambda = 1: t sin t / sinh^2 t >= 1 - t^2 fails first near the oracle root
  double c2 = condition_C2(1.0, 1.0);
  auto g = [](double t) { return t * std::sin(t) / (std::sinh(t) * std::sinh(t)) - (1 - t * t); };
  if (std::isfinite(c2)) CHECK(std::abs(g(c2)) < 1e-9);
  double c1 = condition_C1(2, 1.0, 1.0);
  CHECK(c1 > 0.0);

  double R = 1e-6;
  auto d = condition_delta(2, 1.0, 1.0, R, R / 12.0, 1e-6, 100.0, 0.0);
  CHECK(d.cond2);
  CHECK(d.eps1_cap == R / 12.0);
  CHECK(d.cond1);
  CHECK(d.margin == doctest::Approx(1.0 - d.C3 - 1024.0 / s_k(1.0, R) * R / 12.0).epsilon(1e-12));
  auto d2 = condition_delta(2, 1.0, 1.0, R, R / 12.0 * 1.0000001, 1e-6, 100.0, 0.0);
  CHECK_FALSE(d2.cond2);
  // frak_C_required is the break-even holonomy constant
  auto edge = condition_delta(2, 1.0, 1.0, 1e-3, 1e-12, 1e-6, 100.0, 0.0);
  auto on = condition_delta(2, 1.0, 1.0, 1e-3, 1e-12, 1e-6, 100.0, edge.frak_C_required);
  CHECK(std::abs(on.margin) < 1e-9);
  CHECK(default_holonomy_constant(2, 0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(condition_delta(2, 1.0, 1.0, 0.0, 1, 1, 1), InvalidArgument);
}

TEST_CASE("packing count") {
  CHECK(packing_count(2, 0.0, 1.0, 0.3, 0.3) == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(packing_count(2, 0.0, 1.0, 7.0, 7.0) == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(packing_count(2, 1.0, 1.0, 1.0, 1.0) ==
        doctest::Approx((std::cosh(1.0) - 1) / (1 - std::cos(0.25))).epsilon(1e-12));
  CHECK_THROWS_AS(packing_count(2, 1.0, 1.0, 1.0, 4 * pi + 1), InvalidArgument);
}
