#pragma once

// Seeded sampling helpers. Each sample index gets its own generator derived
// from (seed, stream, index), so results do not depend on loop order.

#include <cstdint>
#include <random>

#include "finsler/metric.hpp"

namespace finsler {

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform point of the chart's sampling box.
Vec random_point(const MetricModel& model, std::mt19937_64& rng);

/// Uniform direction on the Euclidean unit sphere of R^n.
Vec random_direction(int n, std::mt19937_64& rng);

/// y / F(x, y): a point of the indicatrix S_xM.
Vec normalize_F(const MetricModel& model, const Vec& x, const Vec& y);

/// Random point of S_xM (Euclidean-uniform direction, radially normalized).
Vec random_unit(const MetricModel& model, const Vec& x, std::mt19937_64& rng);

}  // namespace finsler
