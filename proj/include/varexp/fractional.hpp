#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "varexp/atoms.hpp"
#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/quadrature.hpp"
#include "varexp/report.hpp"

namespace varexp {

struct KernelParams {
  std::size_t m = 1;
  std::size_t n = 1;
  double alpha = 0.5;

  /// Requires m, n >= 1 and 0 < alpha < mn.
  void validate() const;
  KernelShape shape(KernelForm form = KernelForm::euclidean) const;
};

/// |(y_1, ..., y_m)|^{alpha - mn} for the concatenated vector y (length mn).
double kernel(std::span<const double> y, const KernelParams& params,
              KernelForm form = KernelForm::euclidean);
double kernel(const std::vector<Point>& ys, const KernelParams& params,
              KernelForm form = KernelForm::euclidean);

enum class SingularPolicy {
  /// Exact kernel integrals on product cells within the near-field radius.
  product_integration,
  /// Midpoint rule everywhere, skipping the product cell that contains x.
  skip_cell,
};

struct QuadratureOptions {
  SingularPolicy policy = SingularPolicy::product_integration;
  KernelForm form = KernelForm::euclidean;
};

/// I_alpha(f_1..f_m) at the given points. All f_i must share the cell size h;
/// evaluation points are snapped to the 2^-24 sub-lattice of each factor grid.
std::vector<double> apply_Ialpha(std::span<const GridFunction> fs, const KernelParams& params,
                                 std::span<const Point> xs, const QuadratureOptions& opt = {});
GridFunction apply_Ialpha(std::span<const GridFunction> fs, const KernelParams& params,
                          const Grid& xs, const QuadratureOptions& opt = {});
double apply_Ialpha_at(std::span<const GridFunction> fs, const KernelParams& params,
                       const Point& x, const QuadratureOptions& opt = {});

/// [b, I_alpha]_j in integral form with the sum-of-norms kernel; j is 0-based.
/// b is read cell-wise (piecewise constant) at x and at the cells of f_j.
std::vector<double> apply_commutator(const GridFunction& b, std::span<const GridFunction> fs,
                                     std::size_t j, const KernelParams& params,
                                     std::span<const Point> xs,
                                     SingularPolicy policy = SingularPolicy::product_integration);
GridFunction apply_commutator(const GridFunction& b, std::span<const GridFunction> fs,
                              std::size_t j, const KernelParams& params, const Grid& xs,
                              SingularPolicy policy = SingularPolicy::product_integration);

/// b(x) T(f)(x) - T(f_1, .., b f_j, .., f_m)(x) with T the sum-of-norms operator.
std::vector<double> commutator_by_definition(const GridFunction& b,
                                             std::span<const GridFunction> fs, std::size_t j,
                                             const KernelParams& params,
                                             std::span<const Point> xs,
                                             SingularPolicy policy =
                                                 SingularPolicy::product_integration);

struct DerivativeSample {
  Point x;
  std::vector<Point> ys;
};

/// max over samples of |d^beta_y K(x, y)| / |(x - y_1, .., x - y_m)|^{alpha - mn - |beta|}
/// with central finite differences. beta has one entry per coordinate of (y_1..y_m).
InequalityReport kernel_derivative_check(const KernelParams& params, std::span<const int> beta,
                                         std::span<const DerivativeSample> samples);

/// Finite-difference step used for order |beta| at distance `dist` from the singularity.
double fd_step(double dist, int order);

struct DecayCheckConfig {
  std::vector<std::size_t> subset;  // A, 0-based indices
  int d = 0;
  double kappa = 2.0;

  /// theta = (n + (d+1)/|A|) / n.
  double theta(std::size_t n) const;
};

/// s_j with 1/s_j = 1/p_j - alpha/(n|A|) for j in A.
std::vector<ExponentField> decay_exponents(const DecayCheckConfig& cfg,
                                           std::span<const ExponentField> ps,
                                           const KernelParams& params);

/// max over x of |I_alpha(a)(x)| / (decay product). Plain atoms use the bound with
/// unit size, b-weighted atoms divide each factor by ||chi_Q||_{p_j} (ps required).
InequalityReport decay_bound_check(std::span<const Atom> atoms, const DecayCheckConfig& cfg,
                                   const KernelParams& params, std::span<const Point> xs,
                                   std::span<const ExponentField> ps = {});

/// The decay product at a single x.
double decay_bound(std::span<const Atom> atoms, const DecayCheckConfig& cfg,
                   const KernelParams& params, const Point& x,
                   std::span<const ExponentField> ps = {});

struct CommutatorArgs {
  const GridFunction* b = nullptr;
  std::size_t j = 0;
};

/// ||I_alpha(f)||_{q} (or the commutator) on `eval` against the product of
/// sequence norms (times ||b||_BMO for the commutator).
InequalityReport theorem_ratio(std::span<const AtomicSum> sums, std::span<const ExponentField> ps,
                               const KernelParams& params, const Grid& eval,
                               std::optional<CommutatorArgs> commutator = std::nullopt);

/// Same, reusing an operator output already computed on `eval`.
InequalityReport theorem_ratio_from_output(const GridFunction& output,
                                           std::span<const AtomicSum> sums,
                                           std::span<const ExponentField> ps,
                                           const KernelParams& params,
                                           std::optional<CommutatorArgs> commutator =
                                               std::nullopt);

}  // namespace varexp
