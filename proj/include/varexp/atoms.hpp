#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"

namespace varexp {

enum class Flavor { plain, b_weighted };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

/// Moment residuals are normalised: |int a x^beta| / (sup|a| |Q| l(Q)^{|beta|}),
/// b-moments additionally divided by sup|b| on Q.
struct AtomCertificate {
  std::vector<double> moment_residuals;
  std::vector<double> centered_residuals;  // same with (x - z)^beta
  std::vector<double> b_moment_residuals;
  double size_slack = 0.0;                 // size_bound - sup|a|
  std::size_t dropped = 0;                 // constraint directions removed as dependent
  double gram_condition = 1.0;
  bool ill_conditioned = false;
  std::uint64_t seed_used = 0;

  double max_moment_residual() const;
  double max_b_moment_residual() const;
  bool ok(double tol = 1e-9) const;
};

struct Atom {
  Cube cube;
  GridFunction values;  // lives on the cells of the parent grid whose midpoints lie in cube
  int degree = 0;
  Flavor flavor = Flavor::plain;
  double size_bound = 1.0;
  AtomCertificate certificate;
};

/// All multi-indices beta with |beta| <= d in graded order.
std::vector<std::vector<int>> monomial_exponents(std::size_t n, int d);

/// Seeded random atom on Q with vanishing moments up to degree d and sup|a| = 1.
Atom make_atom(const Grid& grid, const Cube& q, int d, std::uint64_t seed);

/// Atom with vanishing moments against x^beta and b x^beta, |beta| <= d, and
/// sup|a| = 1 / ||chi_Q||_{p(.)}.
Atom make_b_atom(const Grid& grid, const Cube& q, int d, const GridFunction& b,
                 const ExponentField& p, std::uint64_t seed);

/// Wraps explicit values as an atom and certifies them.
Atom atom_from_values(const Cube& q, GridFunction values, int d, Flavor flavor,
                      double size_bound, const GridFunction* b = nullptr);

/// Recomputes the moment and size certificate of an atom (b required for b_weighted).
AtomCertificate certify(const Atom& a, const GridFunction* b = nullptr);

/// ||chi_Q||_{p(.)} with chi_Q discretised on `grid`.
double indicator_norm(const Grid& grid, const Cube& q, const ExponentField& p);

struct AtomicTerm {
  double lambda = 0.0;
  Atom atom;
};

struct AtomicSum {
  Grid grid;
  Flavor flavor = Flavor::plain;
  std::vector<AtomicTerm> terms;

  void add(double lambda, Atom atom);
};

/// Pointwise sum of lambda_j a_j on the sum's grid.
GridFunction assemble(const AtomicSum& sum);

/// Luxemburg norm of (sum_j (|lambda_j| chi_{Q_j} w_j)^s)^{1/s}, with
/// w_j = 1/||chi_{Q_j}||_{p(.)} when normalised and 1 otherwise.
double sequence_norm(const AtomicSum& sum, const ExponentField& p, double s, bool normalized);

/// The b-atom form: normalised weights and s = p^-.
double sequence_norm_normalized(const AtomicSum& sum, const ExponentField& p);

/// The plain form with s = min(p^-, 1).
double sequence_norm_plain(const AtomicSum& sum, const ExponentField& p);

}  // namespace varexp
