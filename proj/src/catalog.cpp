#include "finsler/catalog.hpp"

#include <numbers>

namespace finsler::catalog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Chart make_chart(int n, Vec periods, Vec lo, Vec hi, bool compact) {
  Chart c;
  c.dim = n;
  c.periods = std::move(periods);
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  c.compact = compact;
  return c;
}

Chart torus_chart(int n) {
  return make_chart(n, Vec::Constant(n, kTwoPi), Vec::Zero(n), Vec::Constant(n, kTwoPi), true);
}

}  // namespace

ModelPtr riemannian(MatrixFieldPtr a, Vec periods, Vec lo, Vec hi, bool compact, std::string name) {
  const int n = a->dim();
  auto m = std::make_shared<RandersMetric>(make_chart(n, std::move(periods), std::move(lo), std::move(hi), compact),
                                           std::move(name), std::move(a), nullptr);
  m->set_claims(true, true);
  return m;
}

ModelPtr randers(MatrixFieldPtr a, VectorFieldPtr b, Vec periods, Vec lo, Vec hi, bool compact, std::string name) {
  const int n = a->dim();
  auto m = std::make_shared<RandersMetric>(make_chart(n, std::move(periods), std::move(lo), std::move(hi), compact),
                                           std::move(name), std::move(a), std::move(b));
  m->set_claims(false, false);
  return m;
}

ModelPtr euclidean(int n) {
  return riemannian(std::make_shared<ConstantMatrixField>(Mat::Identity(n, n)), Vec::Zero(n), Vec::Zero(n),
                    Vec::Ones(n), true, "euclidean");
}

ModelPtr sphere_polar() {
  Vec periods(2), lo(2), hi(2);
  periods << 0.0, kTwoPi;
  lo << 0.2, 0.0;
  hi << std::numbers::pi - 0.2, kTwoPi;
  return riemannian(std::make_shared<SpherePolarField>(), periods, lo, hi, false, "sphere_polar");
}

ModelPtr sphere_stereographic(int n) {
  return riemannian(std::make_shared<SphereStereographicField>(n), Vec::Zero(n), Vec::Constant(n, -0.6),
                    Vec::Constant(n, 0.6), false, "sphere");
}

ModelPtr flat_torus(int n) {
  Chart c = torus_chart(n);
  return riemannian(std::make_shared<ConstantMatrixField>(Mat::Identity(n, n)), c.periods, c.lo, c.hi, true,
                    "flat_torus");
}

ModelPtr berwald_torus(int n_param, int dim) {
  if (n_param < 1) throw InvalidArgument("berwald_torus: n_param must be >= 1");
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("berwald_torus: unsupported dimension");
  Chart c = torus_chart(dim);
  Vec b = Vec::Zero(dim);
  b[0] = 1.0 - 1.0 / n_param;
  auto m = std::make_shared<RandersMetric>(c, "berwald_torus(" + std::to_string(n_param) + ")",
                                           std::make_shared<ConstantMatrixField>(Mat::Identity(dim, dim)),
                                           n_param == 1 ? nullptr : std::make_shared<ConstantVectorField>(b));
  m->set_claims(true, n_param == 1);
  return m;
}

ModelPtr randers_shear_torus(double eps) {
  Chart c = torus_chart(2);
  FourierMode mode{Vec::Zero(2), -0.5 * std::numbers::pi};
  mode.wavevector[1] = 1.0;
  Vec amp(2);
  amp << eps, 0.0;
  auto b = std::make_shared<FourierVectorField>(Vec::Zero(2), std::vector<FourierMode>{mode}, std::vector<Vec>{amp});
  return randers(std::make_shared<ConstantMatrixField>(Mat::Identity(2, 2)), b, c.periods, c.lo, c.hi, true,
                 "randers_shear_torus");
}

ModelPtr randers_perturbed_torus(double eps, double b1) {
  Chart c = torus_chart(2);
  FourierMode mode{Vec::Zero(2), 0.0};
  mode.wavevector[0] = 1.0;
  auto a = std::make_shared<FourierMatrixField>(Mat::Identity(2, 2), std::vector<FourierMode>{mode},
                                                std::vector<Mat>{eps * Mat::Identity(2, 2)});
  Vec b(2);
  b << b1, 0.0;
  return randers(a, std::make_shared<ConstantVectorField>(b), c.periods, c.lo, c.hi, true,
                 "randers_perturbed_torus");
}

}  // namespace finsler::catalog
