#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/report.hpp"

namespace varexp {

struct ModularValue {
  double value = 0.0;
  double h = 0.0;
};

/// Midpoint-rule value of the integral of |f|^{p(x)}, with p taken at cell midpoints.
ModularValue modular(const GridFunction& f, const ExponentField& p);

/// Luxemburg norm inf{lambda > 0 : modular(f/lambda) <= 1} by bisection.
///
/// The returned lambda is the upper end of a bracket of relative width <= 1e-10,
/// so modular(f/lambda) <= 1 holds on the discrete level.
double luxemburg_norm(const GridFunction& f, const ExponentField& p);

/// Same, with p given per cell of f's grid.
double luxemburg_norm(const GridFunction& f, std::span<const double> p_cells);

/// r_p = 1 + 1/p^- - 1/p^+.
double holder_constant(const ExponentField& p);

/// LHS = integral |fg|, RHS = r_p ||f||_p ||g||_{p'}.
InequalityReport holder_pair_check(const GridFunction& f, const GridFunction& g,
                                   const ExponentField& p);

/// The analytic dual witness sign(f)|f/||f|| |^{p-1}, normalised in L^{p'}.
GridFunction duality_witness(const GridFunction& f, const ExponentField& p);

/// LHS = max |integral f g| over `trials` random g plus the witness, each with
/// ||g||_{p'} = 1; RHS = r_p ||f||_p. config carries the norm and the witness value.
InequalityReport duality_lower_bound(const GridFunction& f, const ExponentField& p,
                                     std::size_t trials, std::uint64_t seed,
                                     std::size_t block = 4);

/// ||prod f_i||_p / prod ||f_i||_{p_i} with 1/p = sum 1/p_i.
InequalityReport generalized_holder_check(std::span<const GridFunction> fs,
                                          std::span<const ExponentField> ps);

/// Dyadic subcubes of the grid box with sides L/2^k down to `min_cells` cells,
/// where L is the shortest box extent. Sides must stay whole numbers of cells.
std::vector<Cube> dyadic_family(const Grid& grid, std::size_t min_cells = 4);

/// max over Q in family of the mean oscillation of b on Q (cells of b's grid in Q).
double bmo_norm(const GridFunction& b, std::span<const Cube> family);
double bmo_norm(const GridFunction& b);

}  // namespace varexp
