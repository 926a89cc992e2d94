#include "finsler/invariants.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <queue>

#include "finsler/bounds.hpp"
#include "finsler/connection.hpp"
#include "finsler/flows.hpp"
#include "finsler/sampling.hpp"
#include "finsler/tensors.hpp"

namespace finsler {

namespace {

constexpr std::uint64_t kReversibilityStream = 0x4e01;
constexpr std::uint64_t kUniformityStream = 0x4e02;
constexpr std::uint64_t kCurvatureStream = 0x4e03;
constexpr std::uint64_t kTCurvatureStream = 0x4e04;

using Objective = std::function<double(const Params&)>;

// Parameter vector: [x (omitted for x-independent models), d_1, ..., d_m].
struct Packing {
  const MetricModel* model;
  bool with_x;
  int dirs;

  int n() const { return model->dim(); }
  int size() const { return (with_x ? n() : 0) + dirs * n(); }

  Vec point(const Params& p) const {
    const Chart& c = model->chart();
    if (!with_x) return c.reduce(c.lo);
    Vec x = p.head(n());
    for (int i = 0; i < n(); ++i)
      if (!c.periodic(i)) x[i] = std::clamp(x[i], c.lo[i], c.hi[i]);
    return c.reduce(x);
  }
  Vec dir(const Params& p, int k) const { return p.segment((with_x ? n() : 0) + k * n(), n()); }

  Params sample(std::mt19937_64& rng) const {
    Params p(size());
    int off = 0;
    if (with_x) {
      p.head(n()) = random_point(*model, rng);
      off = n();
    }
    for (int k = 0; k < dirs; ++k) p.segment(off + k * n(), n()) = random_direction(n(), rng);
    return p;
  }
};

Packing packing(const MetricModel& model, int dirs) { return Packing{&model, !model.x_independent(), dirs}; }

double guarded(const Objective& f, const Params& p) {
  try {
    double v = f(p);
    return std::isfinite(v) ? v : -kInf;
  } catch (const Error&) {
    return -kInf;
  }
}

struct NmContext {
  const Objective* f;
};

double nm_value(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<NmContext*>(params);
  Params p(static_cast<Eigen::Index>(v->size));
  for (std::size_t i = 0; i < v->size; ++i) p[static_cast<Eigen::Index>(i)] = gsl_vector_get(v, i);
  double val = guarded(*ctx->f, p);
  return std::isfinite(val) ? -val : 1e300;
}

// Nelder-Mead maximization of f from p0.
std::pair<Params, RefineTrace> refine(const Objective& f, const Params& p0, double start, int max_iter) {
  const std::size_t dim = static_cast<std::size_t>(p0.size());
  RefineTrace trace{start, start, 0};
  if (max_iter <= 0 || dim == 0) return {p0, trace};
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  NmContext ctx{&f};
  gsl_multimin_function fn{&nm_value, dim, &ctx};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* step = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x, i, p0[static_cast<Eigen::Index>(i)]);
  gsl_vector_set_all(step, 0.1);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) break;
  }
  Params best(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) best[static_cast<Eigen::Index>(i)] = gsl_vector_get(s->x, i);
  trace.iterations = it;
  double end = -s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  end = guarded(f, best);
  if (end > start) {
    trace.end = end;
    return {best, trace};
  }
  return {p0, trace};
}

SupEstimate estimate_sup(const Packing& pk, const Objective& f, std::size_t samples, std::uint64_t seed,
                         std::uint64_t stream, const EstimateOptions& opt, const std::vector<Params>& extra = {}) {
  if (samples < 10) throw InvalidArgument("at least 10 samples are required");
  struct Sample {
    Params p;
    double v = -kInf;
  };
  auto raw = map_indexed<Sample>(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, stream, i);
        Params p = pk.sample(rng);
        return Sample{p, guarded(f, p)};
      },
      opt.exec);
  for (const Params& p : extra) raw.push_back(Sample{p, guarded(f, p)});

  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a].v > raw[b].v; });
  if (!std::isfinite(raw[order[0]].v)) throw NumericalFailure("every sample failed to evaluate");

  SupEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.sampled = raw[order[0]].v;
  out.value = out.sampled;
  out.argmax = raw[order[0]].p;

  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.refine_starts, 0)), raw.size());
  auto refined = map_indexed<std::pair<Params, RefineTrace>>(
      starts,
      [&](std::size_t s) {
        const Sample& sm = raw[order[s]];
        if (!std::isfinite(sm.v)) return std::pair<Params, RefineTrace>{sm.p, RefineTrace{sm.v, sm.v, 0}};
        return refine(f, sm.p, sm.v, opt.refine_iterations);
      },
      opt.exec);
  for (auto& [p, tr] : refined) {
    out.traces.push_back(tr);
    if (tr.end > out.value) {
      out.value = tr.end;
      out.argmax = p;
    }
  }
  return out;
}

double reversal_ratio(const MetricModel& model, const Packing& pk, const Params& p) {
  Vec x = pk.point(p), y = pk.dir(p, 0);
  if (y.norm() < 1e-12) return -kInf;
  return model.F(x, Vec(-y)) / model.F(x, y);
}

int gcd_all(const std::vector<int>& c) {
  int g = 0;
  for (int v : c) g = std::gcd(g, std::abs(v));
  return g;
}

}  // namespace

SupEstimate reversibility_estimate(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                   const EstimateOptions& opt) {
  Packing pk = packing(model, 1);
  Objective f = [&](const Params& p) { return reversal_ratio(model, pk, p); };
  SupEstimate e = estimate_sup(pk, f, samples, seed, kReversibilityStream, opt);
  e.value = std::max(e.value, 1.0);
  return e;
}

double reversibility(const MetricModel& model, std::size_t samples, std::uint64_t seed) {
  return reversibility_estimate(model, samples, seed).value;
}

SupEstimate uniformity_estimate(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                const EstimateOptions& opt) {
  Packing pk = packing(model, 2);
  Objective f = [&](const Params& p) {
    Vec x = pk.point(p), X = pk.dir(p, 0), Z = pk.dir(p, 1);
    if (X.norm() < 1e-12 || Z.norm() < 1e-12) return -kInf;
    Mat gX = fundamental_tensor(model, x, X), gZ = fundamental_tensor(model, x, Z);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(gX, gZ, Eigen::EigenvaluesOnly);
    double lam = es.eigenvalues().maxCoeff();
    // Y = Z is always admissible; keeps the pencil's rounding out of the reversal bound
    double rq = Z.dot(gX * Z) / Z.dot(gZ * Z);
    return std::max(lam, rq);
  };
  // Reversal pair (X, Z) = (-X*, X*) from the reversibility maximizer.
  SupEstimate rev = reversibility_estimate(model, samples, seed, opt);
  Packing rpk = packing(model, 1);
  Params p(pk.size());
  const int off = pk.with_x ? pk.n() : 0;
  if (pk.with_x) p.head(pk.n()) = rev.argmax.head(pk.n());
  Vec Xs = rpk.dir(rev.argmax, 0);
  p.segment(off, pk.n()) = -Xs;
  p.segment(off + pk.n(), pk.n()) = Xs;
  SupEstimate e = estimate_sup(pk, f, samples, seed, kUniformityStream, opt, {p});
  e.value = std::max(e.value, 1.0);
  return e;
}

double uniformity(const MetricModel& model, std::size_t samples, std::uint64_t seed) {
  return uniformity_estimate(model, samples, seed).value;
}

CurvatureRange curvature_bounds(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                const EstimateOptions& opt) {
  CurvatureRange out;
  if (model.dim() < 2) throw InvalidArgument("flag curvature needs dimension >= 2");
  Packing pk = packing(model, 2);
  auto K = [&](const Params& p) { return flag_curvature(model, pk.point(p), pk.dir(p, 0), pk.dir(p, 1)); };
  out.max_estimate = estimate_sup(pk, K, samples, seed, kCurvatureStream, opt);
  out.min_estimate = estimate_sup(
      pk, [&](const Params& p) { return -K(p); }, samples, seed, kCurvatureStream, opt);
  out.K_max = out.max_estimate.value;
  out.K_min = -out.min_estimate.value;
  return out;
}

SupEstimate t_curvature_estimate(const MetricModel& model, std::size_t samples, std::uint64_t seed,
                                 const EstimateOptions& opt) {
  Packing pk = packing(model, 2);
  Objective f = [&](const Params& p) {
    Vec x = pk.point(p), y = pk.dir(p, 0), v = pk.dir(p, 1);
    if (y.norm() < 1e-12 || v.norm() < 1e-12) return -kInf;
    return std::abs(t_curvature(model, x, normalize_F(model, x, y), normalize_F(model, x, v)));
  };
  return estimate_sup(pk, f, samples, seed, kTCurvatureStream, opt);
}

double t_curvature_bound(const MetricModel& model, std::size_t samples, std::uint64_t seed) {
  return t_curvature_estimate(model, samples, seed).value;
}

double diameter_estimate(const MetricModel& model, int r, Exec exec) {
  const Chart& c = model.chart();
  if (!c.compact) throw InvalidArgument("diameter_estimate: chart is not compact");
  if (r < 3) throw InvalidArgument("diameter_estimate: grid resolution must be >= 3");
  const int n = c.dim;
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = c.periodic(i) ? c.periods[i] / r : (c.hi[i] - c.lo[i]) / (r - 1);

  std::size_t nodes = 1;
  for (int i = 0; i < n; ++i) nodes *= static_cast<std::size_t>(r);
  auto coords = [&](std::size_t id) {
    std::vector<int> k(n);
    for (int i = n - 1; i >= 0; --i) {
      k[i] = static_cast<int>(id % r);
      id /= r;
    }
    return k;
  };
  auto point = [&](const std::vector<int>& k) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = c.lo[i] + k[i] * h[i];
    return x;
  };

  std::vector<std::vector<int>> offsets;
  {
    std::vector<int> o(n, -1);
    while (true) {
      if (std::any_of(o.begin(), o.end(), [](int v) { return v != 0; })) offsets.push_back(o);
      int i = n - 1;
      while (i >= 0 && o[i] == 1) o[i--] = -1;
      if (i < 0) break;
      ++o[i];
    }
  }
  const std::size_t deg = offsets.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);

  // Edge tables: neighbour id and F(p, q - p).
  std::vector<std::size_t> nbr(nodes * deg, none);
  std::vector<double> wt(nodes * deg, kInf);
  auto rows = map_indexed<int>(
      nodes,
      [&](std::size_t id) {
        auto k = coords(id);
        Vec x = point(k);
        for (std::size_t e = 0; e < deg; ++e) {
          std::size_t q = 0;
          bool ok = true;
          Vec step(n);
          for (int i = 0; i < n; ++i) {
            int v = k[i] + offsets[e][i];
            if (c.periodic(i)) {
              v = (v + r) % r;
            } else if (v < 0 || v >= r) {
              ok = false;
              break;
            }
            q = q * r + static_cast<std::size_t>(v);
            step[i] = offsets[e][i] * h[i];
          }
          if (!ok) continue;
          nbr[id * deg + e] = q;
          wt[id * deg + e] = model.F(x, step);
        }
        return 0;
      },
      exec);
  (void)rows;

  auto eccentricity = [&](std::size_t src) {
    std::vector<double> dist(nodes, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (std::size_t e = 0; e < deg; ++e) {
        std::size_t v = nbr[u * deg + e];
        if (v == none) continue;
        double nd = d + wt[u * deg + e];
        if (nd < dist[v]) {
          dist[v] = nd;
          pq.push({nd, v});
        }
      }
    }
    return *std::max_element(dist.begin(), dist.end());
  };

  bool homogeneous = model.x_independent();
  for (int i = 0; i < n; ++i) homogeneous = homogeneous && c.periodic(i);
  if (homogeneous) return eccentricity(0);
  auto ecc = map_indexed<double>(nodes, eccentricity, exec);
  return *std::max_element(ecc.begin(), ecc.end());
}

ClosedGeodesic shortest_closed_geodesic_torus(const MetricModel& model, int class_range) {
  const Chart& c = model.chart();
  const int n = c.dim;
  for (int i = 0; i < n; ++i)
    if (!c.periodic(i)) throw InvalidArgument("shortest_closed_geodesic_torus: every axis must be periodic");
  if (class_range < 1) throw InvalidArgument("class_range must be >= 1");
  if (!has_zero_spray(model))
    throw InvalidArgument("shortest_closed_geodesic_torus: spray does not vanish; only locally Minkowski tori are supported");
  const Vec x0 = c.reduce(c.lo);
  ClosedGeodesic best;
  best.length = kInf;
  std::vector<int> k(n, -class_range);
  while (true) {
    if (gcd_all(k) == 1) {
      Vec y(n);
      for (int i = 0; i < n; ++i) y[i] = k[i] * c.periods[i];
      double L = model.F(x0, y);
      if (L < best.length) best = ClosedGeodesic{k, L};
    }
    int i = n - 1;
    while (i >= 0 && k[i] == class_range) k[i--] = -class_range;
    if (i < 0) break;
    ++k[i];
  }
  return best;
}

InjectivityDiagnostics injectivity_diagnostics(double K_max, double lambda, std::optional<double> shortest_loop) {
  InjectivityDiagnostics d;
  d.shortest_loop = shortest_loop;
  const double kp = K_max > 1e-9 ? K_max : 0.0;
  d.conj_bound = kp > 0.0 ? std::numbers::pi / (lambda * std::sqrt(kp)) : kInf;
  d.sym_conj_bound = kp > 0.0 ? (1.0 + 1.0 / lambda) * std::numbers::pi / (2.0 * std::sqrt(kp)) : kInf;
  d.loop_bound = shortest_loop ? *shortest_loop / (1.0 + lambda) : kInf;
  d.sym_loop_bound = shortest_loop ? *shortest_loop / 2.0 : kInf;
  d.min_bound = std::min(d.conj_bound, d.loop_bound);
  d.sym_min_bound = std::min(d.sym_conj_bound, d.sym_loop_bound);
  return d;
}

namespace {

std::optional<ClosedGeodesic> try_shortest_loop(const MetricModel& model, int class_range) {
  const Chart& c = model.chart();
  for (int i = 0; i < c.dim; ++i)
    if (!c.periodic(i)) return std::nullopt;
  if (!has_zero_spray(model)) return std::nullopt;
  return shortest_closed_geodesic_torus(model, class_range);
}

}  // namespace

InjectivityDiagnostics injectivity_diagnostics(const MetricModel& model, std::size_t samples, std::uint64_t seed) {
  auto K = curvature_bounds(model, samples, seed);
  double lam = reversibility(model, samples, seed);
  auto loop = try_shortest_loop(model, 3);
  return injectivity_diagnostics(K.K_max, lam, loop ? std::optional<double>(loop->length) : std::nullopt);
}

InvariantReport measure_invariants(const MetricModel& model, const InvariantOptions& opt) {
  InvariantReport r;
  r.model = model.name();
  r.dim = model.dim();
  r.options = opt;
  r.lambda_est = reversibility_estimate(model, opt.samples, opt.seed, opt.estimate);
  r.Lambda_est = uniformity_estimate(model, opt.samples, opt.seed, opt.estimate);
  r.lambda_hat = r.lambda_est.value;
  r.Lambda_hat = r.Lambda_est.value;
  if (model.dim() >= 2) {
    auto K = curvature_bounds(model, opt.samples, opt.seed, opt.estimate);
    r.K_min = K.K_min;
    r.K_max = K.K_max;
    r.K_min_est = K.min_estimate;
    r.K_max_est = K.max_estimate;
  }
  r.T_est = t_curvature_estimate(model, opt.samples, opt.seed, opt.estimate);
  r.T_bound = r.T_est.value;
  if (model.chart().compact) {
    r.diam_hat = diameter_estimate(model, opt.grid_resolution, opt.estimate.exec);
    r.vol_BH = volume(model, Measure::busemann_hausdorff, opt.volume_order, opt.estimate.exec);
    r.vol_HT = volume(model, Measure::holmes_thompson, opt.volume_order, opt.estimate.exec);
  }
  r.shortest_loop = try_shortest_loop(model, opt.class_range);
  r.injectivity = injectivity_diagnostics(
      r.K_max, r.lambda_hat, r.shortest_loop ? std::optional<double>(r.shortest_loop->length) : std::nullopt);
  return r;
}

}  // namespace finsler
