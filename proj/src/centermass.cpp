#include "finsler/centermass.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "finsler/connection.hpp"
#include "finsler/flows.hpp"

namespace finsler {

void validate(const MassDistribution& dist) {
  if (dist.points.empty()) throw InvalidArgument("mass distribution is empty");
  if (dist.points.size() != dist.weights.size()) throw InvalidArgument("mass distribution: points/weights size mismatch");
  const int n = dist.dim();
  double sum = 0.0;
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist.points[a].size() != n) throw InvalidArgument("mass distribution: inconsistent point dimension");
    if (!(dist.weights[a] > 0.0) || !std::isfinite(dist.weights[a]))
      throw InvalidArgument("mass distribution: weights must be positive");
    sum += dist.weights[a];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("mass distribution: weights must sum to 1");
}

MassDistribution make_distribution(std::vector<ChartPoint> points, std::vector<double> weights) {
  MassDistribution d{std::move(points), std::move(weights)};
  validate(d);
  return d;
}

MassDistribution parse_mass_text(const std::string& text, int dim) {
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("mass file: unsupported dimension");
  MassDistribution d;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> vals;
    std::string tok;
    while (row >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw InvalidArgument("mass file line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      vals.push_back(v);
    }
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != dim + 1)
      throw InvalidArgument("mass file line " + std::to_string(lineno) + ": expected " + std::to_string(dim + 1) +
                            " columns");
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = vals[static_cast<std::size_t>(i)];
    d.points.push_back(p);
    d.weights.push_back(vals.back());
  }
  if (d.points.empty()) throw InvalidArgument("mass file has no rows");
  double sum = 0.0;
  for (double w : d.weights) {
    if (!(w > 0.0)) throw InvalidArgument("mass file: weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw InvalidArgument("mass file: weights sum to " + std::to_string(sum) + ", not 1");
  for (double& w : d.weights) w /= sum;
  // the division can leave the sum a few ulps off 1
  sum = 0.0;
  for (double w : d.weights) sum += w;
  d.weights.back() += 1.0 - sum;
  validate(d);
  return d;
}

MassDistribution read_mass_file(const std::string& path, int dim) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open mass file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mass_text(ss.str(), dim);
}

Vec mass_field(const MetricModel& model, const MassDistribution& dist, const Vec& x, Exec exec) {
  validate(dist);
  if (dist.dim() != model.dim() || x.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  auto terms = map_indexed<Vec>(
      dist.size(),
      [&](std::size_t a) -> Vec {
        try {
          return dist.weights[a] * exp_inverse(model, x, dist.points[a]);
        } catch (const AmbiguousPreimage& e) {
          throw MassPointError(a, e.what(), true);
        } catch (const NumericalFailure& e) {
          throw MassPointError(a, e.what(), false);
        }
      },
      exec);
  Vec V = Vec::Zero(model.dim());
  for (const Vec& t : terms) V -= t;
  return V;
}

CenterOfMass center_of_mass(const MetricModel& model, const MassDistribution& dist, const Vec& x_init,
                            const CenterOptions& opt) {
  validate(dist);
  if (x_init.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  if (!(opt.tol > 0.0)) throw InvalidArgument("center_of_mass: tol must be > 0");
  auto residual = [&](const Vec& x, const Vec& V) { return V.squaredNorm() == 0.0 ? 0.0 : model.F(x, V); };

  Vec x = model.chart().reduce(x_init);
  Vec V = mass_field(model, dist, x, opt.exec);
  double r = residual(x, V);
  int it = 0;
  while (r >= opt.tol) {
    if (it >= opt.max_iter) throw MaxIterExceeded("center_of_mass: no convergence in " + std::to_string(opt.max_iter) + " iterations");
    ++it;
    bool accepted = false;
    for (double alpha = 1.0; alpha >= 1.0 / 1024; alpha *= 0.5) {
      Vec xn = exp_map(model, x, Vec(-alpha * V));
      Vec Vn;
      try {
        Vn = mass_field(model, dist, xn, opt.exec);
      } catch (const MassPointError&) {
        continue;
      }
      double rn = residual(xn, Vn);
      if (rn <= (1.0 - 1e-4 * alpha) * r) {
        x = xn;
        V = Vn;
        r = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NumericalFailure("center_of_mass: line search stalled at residual " + std::to_string(r));
  }
  CenterOfMass out;
  out.point = x;
  out.residual = r;
  out.iterations = it;
  if (opt.regime_radius) {
    // Any ball center p is admissible; try the result, the start and the mass points.
    std::vector<Vec> centers = {x, model.chart().reduce(x_init)};
    for (const auto& p : dist.points) centers.push_back(p);
    double best = kInf;
    for (const Vec& c : centers) {
      double far = 0.0;
      for (const auto& p : dist.points) far = std::max(far, distance(model, c, p));
      best = std::min(best, far);
    }
    out.support_radius = best;
    out.guaranteed = best < *opt.regime_radius;
  }
  return out;
}

Mat mass_field_jacobian(const MetricModel& model, const MassDistribution& dist, const Vec& x, double step, Exec exec) {
  const int n = model.dim();
  if (!(step > 0.0)) throw InvalidArgument("jacobian step must be > 0");
  Mat J(n, n);
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += step;
    xm[k] -= step;
    J.col(k) = (mass_field(model, dist, model.chart().reduce(xp), exec) -
                mass_field(model, dist, model.chart().reduce(xm), exec)) /
               (2.0 * step);
  }
  return J;
}

double smallest_singular_value(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().minCoeff();
}

double contraction_witness(const MetricModel& model, const MassDistribution& dist, const Vec& x, const Vec& T,
                           double length, int samples) {
  if (samples < 2) throw InvalidArgument("contraction_witness: samples must be >= 2");
  if (!(length > 0.0)) throw InvalidArgument("contraction_witness: length must be > 0");
  const int per = 8;  // RK4 steps between samples
  const int steps = std::max(2 * per * samples, 32);
  const double h = length / steps;
  auto geo = integrate_geodesic(model, x, T, length, steps);
  auto field = [&](int i) { return mass_field(model, dist, geo.xs[static_cast<std::size_t>(i)]); };
  double worst = 0.0;
  for (int s = 1; s <= samples; ++s) {
    const int i = s * steps / (samples + 1);
    const Vec& xi = geo.xs[static_cast<std::size_t>(i)];
    const Vec& Ti = geo.vs[static_cast<std::size_t>(i)];
    Vec V = field(i);
    Vec dV = (field(i + 1) - field(i - 1)) / (2.0 * h);
    Vec DV = dV + chern_coefficients(model, xi, Ti).contract23(V, Ti);
    worst = std::max(worst, norm_T(model, xi, Ti, Vec(Ti - DV)) / norm_T(model, xi, Ti, Ti));
  }
  return worst;
}

}  // namespace finsler
