#include "finsler/flows.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace finsler {

namespace {

constexpr double kHorizontalStep = 1e-4;

// State layout: [x, v, X_1 .. X_a, (J_1, P_1) .. (J_b, P_b)], P = D_T J.
struct Layout {
  int n = 0;
  int transports = 0;
  int jacobis = 0;
  int size() const { return n * (2 + transports + 2 * jacobis); }
};

using State = Eigen::VectorXd;

CurvatureTensor curvature_from(const MetricModel& model, const Vec& x, const Vec& y, const ConnectionCoeffs& c) {
  const int n = model.dim();
  CurvatureTensor R;
  R.n = n;
  std::array<Tensor3, kMaxDim> dG;
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += kHorizontalStep;
    xm[k] -= kHorizontalStep;
    Vec Nk = c.N.col(k);
    Vec yp = y - kHorizontalStep * Nk, ym = y + kHorizontalStep * Nk;
    Tensor3 d = chern_coefficients(model, xp, yp);
    d -= chern_coefficients(model, xm, ym);
    dG[k] = Tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) dG[k](i, j, l) = d(i, j, l) / (2.0 * kHorizontalStep);
  }
  const Tensor3& G = c.Gamma;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = dG[k](i, j, l) - dG[l](i, j, k);
          for (int h = 0; h < n; ++h) v += G(i, h, k) * G(h, j, l) - G(i, h, l) * G(h, j, k);
          R(i, j, k, l) = v;
        }
  return R;
}

State rhs(const MetricModel& model, const Layout& L, const State& s) {
  const int n = L.n;
  State out(L.size());
  Vec x = s.segment(0, n);
  Vec v = s.segment(n, n);
  out.segment(0, n) = v;
  if (model.x_independent()) {
    // Locally Minkowski chart: Gamma and R vanish identically.
    out.segment(n, n).setZero();
    int off = 2 * n;
    for (int a = 0; a < L.transports; ++a, off += n) out.segment(off, n).setZero();
    for (int b = 0; b < L.jacobis; ++b, off += 2 * n) {
      out.segment(off, n) = s.segment(off + n, n);
      out.segment(off + n, n).setZero();
    }
    return out;
  }
  if (v.squaredNorm() == 0.0) throw IntegrationFailure("geodesic velocity vanished");
  ConnectionCoeffs c = connection(local_tensors(model, x, v, TensorLevel::full), x, v);
  out.segment(n, n) = -c.Gamma.contract23(v, v);
  int off = 2 * n;
  for (int a = 0; a < L.transports; ++a, off += n) {
    Vec X = s.segment(off, n);
    out.segment(off, n) = -c.Gamma.contract23(X, v);
  }
  if (L.jacobis > 0) {
    Mat M = curvature_matrix(curvature_from(model, x, v, c), v);
    for (int b = 0; b < L.jacobis; ++b, off += 2 * n) {
      Vec J = s.segment(off, n);
      Vec P = s.segment(off + n, n);
      out.segment(off, n) = P - c.Gamma.contract23(J, v);
      out.segment(off + n, n) = -M * J - c.Gamma.contract23(P, v);
    }
  }
  return out;
}

std::vector<State> integrate(const MetricModel& model, const Layout& L, State s, double t_end, int steps) {
  std::vector<State> out;
  out.reserve(steps + 1);
  out.push_back(s);
  const double h = t_end / steps;
  for (int i = 0; i < steps; ++i) {
    State k1 = rhs(model, L, s);
    State k2 = rhs(model, L, s + 0.5 * h * k1);
    State k3 = rhs(model, L, s + 0.5 * h * k2);
    State k4 = rhs(model, L, s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!s.allFinite()) throw IntegrationFailure("geodesic integration produced a non-finite state");
    out.push_back(s);
  }
  return out;
}

GeodesicSegment to_segment(const MetricModel& model, const std::vector<State>& states, double t_end, double speed) {
  const int n = model.dim();
  GeodesicSegment g;
  g.speed = speed;
  const int steps = static_cast<int>(states.size()) - 1;
  for (int i = 0; i <= steps; ++i) {
    g.t.push_back(t_end * i / steps);
    Vec x = states[i].segment(0, n);
    g.lifted.push_back(x);
    g.xs.push_back(model.chart().reduce(x));
    g.vs.push_back(states[i].segment(n, n));
  }
  return g;
}

int resolve_steps(int steps, double length) {
  if (steps <= 0) return default_steps(length);
  if (steps < 8) throw InvalidArgument("integration needs at least 8 steps");
  return steps;
}

State initial_state(const Layout& L, const Vec& x0, const Vec& v0) {
  State s = State::Zero(L.size());
  s.segment(0, L.n) = x0;
  s.segment(L.n, L.n) = v0;
  return s;
}

void check_segment(const MetricModel& model, const GeodesicSegment& g) {
  if (g.t.size() < 2 || g.lifted.empty() || g.lifted[0].size() != model.dim())
    throw InvalidArgument("geodesic segment does not match the model");
  if (!(g.speed > 0.0)) throw InvalidArgument("geodesic speed must be positive");
}

}  // namespace

int default_steps(double length) {
  return std::max(16, static_cast<int>(std::ceil(std::abs(length) / 0.01)));
}

GeodesicSegment integrate_geodesic(const MetricModel& model, const Vec& x0, const Vec& y0, double t_end, int steps) {
  const int n = model.dim();
  if (x0.size() != n || y0.size() != n) throw InvalidArgument("dimension mismatch");
  if (y0.squaredNorm() == 0.0) throw InvalidArgument("initial velocity must be nonzero");
  const double speed = model.F(x0, y0);
  steps = resolve_steps(steps, speed * t_end);
  Layout L{n, 0, 0};
  return to_segment(model, integrate(model, L, initial_state(L, x0, y0), t_end, steps), t_end, speed);
}

ChartPoint exp_map(const MetricModel& model, const Vec& x, const Vec& v, int steps) {
  if (v.size() != model.dim() || x.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  if (v.squaredNorm() == 0.0) return model.chart().reduce(x);
  return integrate_geodesic(model, x, v, 1.0, steps).xs.back();
}

std::vector<Vec> chord_candidates(const MetricModel& model, const Vec& x, const Vec& q) {
  const Chart& c = model.chart();
  const int n = model.dim();
  if (x.size() != n || q.size() != n) throw InvalidArgument("dimension mismatch");
  Vec d0 = q - x;
  std::vector<int> axes;
  for (int i = 0; i < n; ++i) {
    if (!c.periodic(i)) continue;
    axes.push_back(i);
    const double P = c.periods[i];
    d0[i] -= P * std::floor(d0[i] / P + 0.5);
  }
  std::vector<Vec> out;
  int combos = 1;
  for (std::size_t a = 0; a < axes.size(); ++a) combos *= 3;
  for (int m = 0; m < combos; ++m) {
    Vec d = d0;
    int r = m;
    for (int i : axes) {
      d[i] += c.periods[i] * ((r % 3) - 1);
      r /= 3;
    }
    out.push_back(d);
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](const Vec& a, const Vec& b) { return model.F(x, a) < model.F(x, b); });
  return out;
}

namespace {

// Damped Newton on the initial velocity, started from the lifted chord.
Vec shoot(const MetricModel& model, const Vec& x, const Vec& chord, double tol, int max_iter) {
  const int n = model.dim();
  if (chord.squaredNorm() == 0.0) return Vec::Zero(n);
  if (model.x_independent()) return chord;  // straight lines are the geodesics
  const Vec target = x + chord;
  Vec v = chord;
  Layout geo{n, 0, 0};
  auto endpoint = [&](const Vec& w) {
    const int steps = default_steps(model.F(x, w));
    return integrate(model, geo, initial_state(geo, x, w), 1.0, steps).back().segment(0, n).eval();
  };
  Vec r = endpoint(v) - target;
  for (int it = 0; it < max_iter; ++it) {
    if (r.norm() <= tol) return v;
    Mat D = jacobi_endpoint_matrix(model, x, v, 1.0);
    Eigen::FullPivLU<Mat> lu(D);
    if (lu.rank() < n) throw ShootingDiverged("exp_inverse: endpoint map is singular (conjugate point)");
    Vec delta = -lu.solve(r);
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1.0 / 256.0) {
      Vec trial = v + alpha * delta;
      if (trial.squaredNorm() > 0.0) {
        Vec rt = endpoint(trial) - target;
        if (rt.norm() < r.norm()) {
          v = trial;
          r = rt;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (r.norm() <= 10.0 * tol) return v;
      throw ShootingDiverged("exp_inverse: damped Newton step failed to reduce the residual");
    }
  }
  if (r.norm() <= tol) return v;
  throw ShootingDiverged("exp_inverse: no convergence within the iteration budget");
}

bool tied(const MetricModel& model, const Vec& x, const Vec& a, const Vec& b) {
  const double fa = model.F(x, a), fb = model.F(x, b);
  return fb - fa <= 1e-9 * fb;
}

}  // namespace

Vec exp_inverse(const MetricModel& model, const Vec& x, const Vec& q, double tol, int max_iter) {
  auto cands = chord_candidates(model, x, q);
  if (cands.front().squaredNorm() == 0.0) return Vec::Zero(model.dim());
  if (cands.size() > 1 && tied(model, x, cands[0], cands[1]))
    throw AmbiguousPreimage("exp_inverse: two deck translates of the target are equally close");
  return shoot(model, x, cands.front(), tol, max_iter);
}

double distance(const MetricModel& model, const Vec& p, const Vec& q, double tol) {
  // Tied translates give distinct preimages but may share the distance, so
  // every tied candidate is shot and the shortest kept.
  auto cands = chord_candidates(model, p, q);
  if (cands.front().squaredNorm() == 0.0) return 0.0;
  double best = kInf;
  for (const Vec& c : cands) {
    if (!tied(model, p, cands.front(), c)) break;
    best = std::min(best, model.F(p, shoot(model, p, c, tol, 50)));
  }
  return best;
}

TransportFrame parallel_transport(const MetricModel& model, const GeodesicSegment& geodesic, const Vec& X0) {
  check_segment(model, geodesic);
  const int n = model.dim();
  if (X0.size() != n) throw InvalidArgument("dimension mismatch");
  Layout L{n, 1, 0};
  State s = initial_state(L, geodesic.lifted[0], geodesic.vs[0]);
  s.segment(2 * n, n) = X0;
  auto states = integrate(model, L, s, geodesic.t.back(), geodesic.steps());
  TransportFrame f;
  f.geodesic = to_segment(model, states, geodesic.t.back(), geodesic.speed);
  for (const State& st : states) f.X.push_back(st.segment(2 * n, n));
  return f;
}

CurvatureTensor curvature_tensor(const MetricModel& model, const Vec& x, const Vec& y) {
  if (y.size() != model.dim() || x.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  if (y.squaredNorm() == 0.0) throw InvalidArgument("curvature needs a nonzero reference vector");
  if (model.x_independent()) {
    CurvatureTensor R;
    R.n = model.dim();
    return R;
  }
  return curvature_from(model, x, y, connection(model, x, y));
}

Mat curvature_matrix(const CurvatureTensor& R, const Vec& y) {
  const int n = R.n;
  Mat M = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) v += y[j] * R(i, j, k, l) * y[l];
      M(i, k) = v;
    }
  return M;
}

Mat curvature_matrix(const MetricModel& model, const Vec& x, const Vec& y) {
  return curvature_matrix(curvature_tensor(model, x, y), y);
}

Vec curvature_operator(const MetricModel& model, const Vec& x, const Vec& y, const Vec& V) {
  if (V.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  return curvature_matrix(model, x, y) * V;
}

double flag_curvature(const MetricModel& model, const Vec& x, const Vec& y, const Vec& V, double eps) {
  if (V.size() != model.dim()) throw InvalidArgument("dimension mismatch");
  Mat g = fundamental_tensor(model, x, y);
  const double gyy = y.dot(g * y), gvv = V.dot(g * V), gyv = y.dot(g * V);
  const double den = gyy * gvv - gyv * gyv;
  const double fy = model.F(x, y);
  const double fv = V.squaredNorm() == 0.0 ? 0.0 : model.F(x, V);
  if (!(den > eps * fy * fy * fv * fv)) throw DegenerateFlag("flag curvature: V is (nearly) parallel to y");
  // Same value for exact R (R_y y = 0, g_y(R_y V, y) = 0); the projected form
  // keeps discretization noise in those terms out of nearly degenerate flags.
  Vec W = V - (gyv / gyy) * y;
  Vec RW = curvature_operator(model, x, y, W);
  return W.dot(g * RW) / (gyy * W.dot(g * W));
}

double t_curvature(const MetricModel& model, const Vec& x, const Vec& y, const Vec& v) {
  if (y.size() != model.dim() || v.size() != model.dim() || x.size() != model.dim())
    throw InvalidArgument("dimension mismatch");
  if (y.squaredNorm() == 0.0 || v.squaredNorm() == 0.0) throw InvalidArgument("t_curvature: zero vector");
  if (std::abs(model.F(x, y) - 1.0) > 1e-10 || std::abs(model.F(x, v) - 1.0) > 1e-10)
    throw InvalidArgument("t_curvature: y and v must lie on the indicatrix");
  if (model.x_independent()) return 0.0;
  Tensor3 d = chern_coefficients(model, x, v);
  d -= chern_coefficients(model, x, y);
  Vec w = d.contract23(v, v);
  return w.dot(fundamental_tensor(model, x, y) * y);
}

JacobiSolution jacobi_field(const MetricModel& model, const GeodesicSegment& geodesic, const Vec& J0,
                            const Vec& Jp0) {
  check_segment(model, geodesic);
  const int n = model.dim();
  if (J0.size() != n || Jp0.size() != n) throw InvalidArgument("dimension mismatch");
  Layout L{n, 0, 1};
  State s = initial_state(L, geodesic.lifted[0], geodesic.vs[0]);
  s.segment(2 * n, n) = J0;
  s.segment(3 * n, n) = Jp0;
  auto states = integrate(model, L, s, geodesic.t.back(), geodesic.steps());
  JacobiSolution out;
  out.geodesic = to_segment(model, states, geodesic.t.back(), geodesic.speed);
  for (const State& st : states) {
    out.J.push_back(st.segment(2 * n, n));
    out.Jp.push_back(st.segment(3 * n, n));
  }
  return out;
}

namespace {

std::vector<State> jacobi_matrix_states(const MetricModel& model, const Vec& x, const Vec& v, double t_end,
                                        int steps) {
  const int n = model.dim();
  if (x.size() != n || v.size() != n) throw InvalidArgument("dimension mismatch");
  if (v.squaredNorm() == 0.0) throw InvalidArgument("initial velocity must be nonzero");
  steps = resolve_steps(steps, model.F(x, v) * t_end);
  Layout L{n, 0, n};
  State s = initial_state(L, x, v);
  for (int k = 0; k < n; ++k) s[2 * n + 2 * n * k + n + k] = 1.0;
  return integrate(model, L, s, t_end, steps);
}

Mat jacobi_matrix_of(const State& st, int n) {
  Mat D(n, n);
  for (int k = 0; k < n; ++k) D.col(k) = st.segment(2 * n + 2 * n * k, n);
  return D;
}

}  // namespace

Mat jacobi_endpoint_matrix(const MetricModel& model, const Vec& x, const Vec& v, double t_end, int steps) {
  auto states = jacobi_matrix_states(model, x, v, t_end, steps);
  return jacobi_matrix_of(states.back(), model.dim());
}

double first_conjugate_time(const MetricModel& model, const Vec& x, const Vec& v, double t_max, int steps) {
  auto states = jacobi_matrix_states(model, x, v, t_max, steps);
  const int n = model.dim();
  const int m = static_cast<int>(states.size()) - 1;
  double prev = jacobi_matrix_of(states[1], n).determinant();
  for (int i = 2; i <= m; ++i) {
    double cur = jacobi_matrix_of(states[i], n).determinant();
    if ((cur > 0.0) != (prev > 0.0)) {
      const double h = t_max / m;
      return h * (i - 1) + h * prev / (prev - cur);
    }
    prev = cur;
  }
  return kInf;
}

double norm_T(const MetricModel& model, const Vec& x, const Vec& T, const Vec& X) {
  return std::sqrt(std::max(0.0, X.dot(fundamental_tensor(model, x, T) * X)));
}

}  // namespace finsler
