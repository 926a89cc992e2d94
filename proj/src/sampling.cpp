#include "finsler/sampling.hpp"

namespace finsler {

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Vec random_point(const MetricModel& model, std::mt19937_64& rng) {
  const Chart& c = model.chart();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(c.dim);
  for (int i = 0; i < c.dim; ++i) x[i] = c.lo[i] + (c.hi[i] - c.lo[i]) * u(rng);
  return c.reduce(x);
}

Vec random_direction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

Vec normalize_F(const MetricModel& model, const Vec& x, const Vec& y) {
  Vec out = y / model.F(x, y);
  // second pass removes the last ulp-level drift
  return out / model.F(x, out);
}

Vec random_unit(const MetricModel& model, const Vec& x, std::mt19937_64& rng) {
  return normalize_F(model, x, random_direction(model.dim(), rng));
}

}  // namespace finsler
