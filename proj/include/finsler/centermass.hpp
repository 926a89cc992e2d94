#pragma once

// Mass distributions, the field V(x) = -sum_a w_a exp_x^{-1}(p_a) and its
// zero, the center of mass.

#include <optional>
#include <string>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

struct MassDistribution {
  std::vector<ChartPoint> points;
  std::vector<double> weights;

  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  std::size_t size() const { return points.size(); }
};

/// Throws InvalidArgument unless m >= 1, dimensions agree, weights > 0 and
/// sum to 1 within 1e-12.
void validate(const MassDistribution& dist);
MassDistribution make_distribution(std::vector<ChartPoint> points, std::vector<double> weights);

/// Rows of `coords... weight`, separated by whitespace or commas; '#' starts a
/// comment. Weights summing within 1e-6 of 1 are renormalized, others rejected.
MassDistribution read_mass_file(const std::string& path, int dim);
MassDistribution parse_mass_text(const std::string& text, int dim);

/// Thrown when exp_x^{-1} fails for one mass point; `index` is that point.
class MassPointError : public NumericalFailure {
 public:
  MassPointError(std::size_t index, const std::string& what, bool ambiguous)
      : NumericalFailure("mass point " + std::to_string(index) + ": " + what), index(index), ambiguous(ambiguous) {}
  std::size_t index;
  bool ambiguous;
};

Vec mass_field(const MetricModel& model, const MassDistribution& dist, const Vec& x, Exec exec = Exec::parallel);

struct CenterOptions {
  double tol = 1e-10;
  int max_iter = 100;
  /// When set, the result is flagged as inside the guaranteed regime iff the
  /// support fits in a forward ball of this radius centered at the result,
  /// the start or one of the mass points.
  std::optional<double> regime_radius;
  Exec exec = Exec::parallel;
};

struct CenterOfMass {
  ChartPoint point;
  double residual = 0.0;  // F(q, V(q))
  int iterations = 0;
  std::optional<bool> guaranteed;
  double support_radius = 0.0;  // smallest forward radius found, filled when regime_radius is set
};

/// x <- exp_x(-alpha V(x)) with Armijo backtracking on F(x, V(x)).
/// Throws MaxIterExceeded, MassPointError or NumericalFailure when a step stalls.
CenterOfMass center_of_mass(const MetricModel& model, const MassDistribution& dist, const Vec& x_init,
                            const CenterOptions& opt = {});

/// Central-difference Jacobian dV^i/dx^j.
Mat mass_field_jacobian(const MetricModel& model, const MassDistribution& dist, const Vec& x, double step = 1e-5,
                        Exec exec = Exec::parallel);

double smallest_singular_value(const Mat& m);

/// max over interior samples of ||T - D_T V||_T / ||T||_T along s -> exp_x(s T),
/// s in [0, length], with D_T V = dV/ds + Gamma(x, T)(V, T).
double contraction_witness(const MetricModel& model, const MassDistribution& dist, const Vec& x, const Vec& T,
                           double length, int samples = 16);

}  // namespace finsler
