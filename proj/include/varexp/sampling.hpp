#pragma once

#include <cstdint>
#include <random>

#include "varexp/grid.hpp"

namespace varexp {

using Rng = std::mt19937_64;

/// Uniform draw in [a, b) built directly from the engine bits, so sequences do
/// not depend on the standard library's distribution implementation.
double uniform(Rng& rng, double a, double b);

/// Piecewise-constant function: blocks of `block` cells per axis take seeded
/// values in [-1, 1]. Cells whose midpoints fall outside [lo, hi] are zero.
GridFunction random_piecewise(const Grid& grid, std::size_t block, Rng& rng, const Point& lo,
                              const Point& hi);
GridFunction random_piecewise(const Grid& grid, std::size_t block, Rng& rng);

/// Deterministic per-trial seed derived from a base seed and trial index.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

}  // namespace varexp
