#include "varexp/atoms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "varexp/error.hpp"
#include "varexp/norms.hpp"
#include "varexp/sampling.hpp"

namespace varexp {

std::string to_string(Flavor f) { return f == Flavor::plain ? "plain" : "b_weighted"; }

Flavor flavor_from_string(const std::string& s) {
  if (s == "plain") return Flavor::plain;
  if (s == "b_weighted") return Flavor::b_weighted;
  throw Error("unknown atom flavor '" + s + "'");
}

double AtomCertificate::max_moment_residual() const {
  double m = 0.0;
  for (double v : moment_residuals) m = std::max(m, v);
  return m;
}

double AtomCertificate::max_b_moment_residual() const {
  double m = 0.0;
  for (double v : b_moment_residuals) m = std::max(m, v);
  return m;
}

bool AtomCertificate::ok(double tol) const {
  return max_moment_residual() <= tol && max_b_moment_residual() <= tol && size_slack >= 0.0;
}

std::vector<std::vector<int>> monomial_exponents(std::size_t n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  for (int deg = 0; deg <= d; ++deg) {
    auto rec = [&](auto&& self, std::size_t axis, int left) -> void {
      if (axis + 1 == n) {
        cur[axis] = left;
        out.push_back(cur);
        return;
      }
      for (int v = left; v >= 0; --v) {
        cur[axis] = v;
        self(self, axis + 1, left - v);
      }
    };
    rec(rec, 0, deg);
  }
  return out;
}

namespace {

double monomial(std::span<const double> x, const std::vector<int>& beta) {
  double v = 1.0;
  for (std::size_t d = 0; d < beta.size(); ++d) {
    for (int k = 0; k < beta[d]; ++k) v *= x[d];
  }
  return v;
}

int degree_of(const std::vector<int>& beta) {
  int s = 0;
  for (int b : beta) s += b;
  return s;
}

struct Projection {
  std::size_t rank = 0;
  std::size_t dropped = 0;
  double condition = 1.0;
};

// Removes from r its component in the column span of `cols`, keeping singular
// directions above 1e-10 of the largest one.
Projection project_out(Eigen::MatrixXd cols, Eigen::VectorXd& r) {
  Projection info;
  if (cols.cols() == 0) return info;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    const double nrm = cols.col(c).norm();
    if (nrm > 0.0) cols.col(c) /= nrm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  info.condition = smin > 0.0 ? (smax / smin) * (smax / smin) : std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * smax) ++info.rank;
  }
  info.dropped = static_cast<std::size_t>(sv.size()) - info.rank;
  const Eigen::MatrixXd u = svd.matrixU().leftCols(static_cast<Eigen::Index>(info.rank));
  for (int pass = 0; pass < 2; ++pass) r -= u * (u.transpose() * r);
  return info;
}

std::vector<double> b_on_cells(const Grid& sub, const GridFunction& b) {
  std::vector<double> out(sub.size());
  for (std::size_t i = 0; i < sub.size(); ++i) out[i] = b.at(sub.midpoint(i));
  return out;
}

Atom build_atom(const Grid& grid, const Cube& q, int d, const GridFunction* b,
                const ExponentField* p, std::uint64_t seed) {
  if (d < -1) throw Error("make_atom: degree must be >= -1");
  if (q.dim() != grid.dim()) throw Error("make_atom: cube dimension mismatch");
  const Grid sub = cells_within(grid, q);
  for (std::size_t axis = 0; axis < sub.dim(); ++axis) {
    if (static_cast<int>(sub.shape()[axis]) < d + 2) {
      throw Error("insufficient resolution for degree " + std::to_string(d));
    }
  }
  const std::size_t n = grid.dim();
  const auto betas = monomial_exponents(n, d);
  const auto rows = static_cast<Eigen::Index>(sub.size());
  const std::size_t families = b ? 2 : 1;
  Eigen::MatrixXd cols(rows, static_cast<Eigen::Index>(betas.size() * families));
  std::vector<double> bvals;
  if (b) bvals = b_on_cells(sub, *b);
  Point u(n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      u[a] = (sub.midpoint(static_cast<std::size_t>(i), a) - q.center()[a]) / q.side();
    }
    for (std::size_t k = 0; k < betas.size(); ++k) {
      const double m = monomial(u, betas[k]);
      cols(i, static_cast<Eigen::Index>(k)) = m;
      if (b) cols(i, static_cast<Eigen::Index>(betas.size() + k)) = m * bvals[static_cast<std::size_t>(i)];
    }
  }
  const double bound = p ? 1.0 / indicator_norm(grid, q, *p) : 1.0;

  for (std::uint64_t attempt = 0; attempt <= 8; ++attempt) {
    const std::uint64_t s = seed + attempt;
    Rng rng(s);
    Eigen::VectorXd r(rows);
    for (Eigen::Index i = 0; i < rows; ++i) r(i) = uniform(rng, -1.0, 1.0);
    const double before = r.cwiseAbs().maxCoeff();
    const Projection info = project_out(cols, r);
    const double after = r.cwiseAbs().maxCoeff();
    if (!(after > 1e-6 * before)) continue;
    std::vector<double> vals(static_cast<std::size_t>(rows));
    for (Eigen::Index i = 0; i < rows; ++i) vals[static_cast<std::size_t>(i)] = r(i) / after * bound;
    Atom atom;
    atom.cube = q;
    atom.values = GridFunction(sub, std::move(vals));
    atom.degree = d;
    atom.flavor = b ? Flavor::b_weighted : Flavor::plain;
    atom.size_bound = bound;
    atom.certificate = certify(atom, b);
    atom.certificate.dropped = info.dropped;
    atom.certificate.gram_condition = info.condition;
    atom.certificate.ill_conditioned = info.condition > 1e12;
    atom.certificate.seed_used = s;
    return atom;
  }
  throw Error("make_atom: projection annihilated the random values for 9 consecutive seeds");
}

}  // namespace

Atom make_atom(const Grid& grid, const Cube& q, int d, std::uint64_t seed) {
  return build_atom(grid, q, d, nullptr, nullptr, seed);
}

Atom make_b_atom(const Grid& grid, const Cube& q, int d, const GridFunction& b,
                 const ExponentField& p, std::uint64_t seed) {
  return build_atom(grid, q, d, &b, &p, seed);
}

Atom atom_from_values(const Cube& q, GridFunction values, int d, Flavor flavor,
                      double size_bound, const GridFunction* b) {
  Atom a;
  a.cube = q;
  a.values = std::move(values);
  a.degree = d;
  a.flavor = flavor;
  a.size_bound = size_bound;
  a.certificate = certify(a, b);
  return a;
}

AtomCertificate certify(const Atom& a, const GridFunction* b) {
  if (a.flavor == Flavor::b_weighted && !b) throw Error("certify: b-weighted atom needs b");
  const Grid& g = a.values.grid();
  const std::size_t n = g.dim();
  const auto betas = monomial_exponents(n, a.degree);
  AtomCertificate c;
  const double sup = a.values.sup_abs();
  const double cell = g.cell_volume();
  const double qvol = a.cube.volume();
  std::vector<double> bvals;
  double bsup = 0.0;
  if (a.flavor == Flavor::b_weighted) {
    bvals = b_on_cells(g, *b);
    for (double v : bvals) bsup = std::max(bsup, std::abs(v));
    if (bsup == 0.0) bsup = 1.0;
  }
  Point x(n), xc(n);
  for (const auto& beta : betas) {
    double raw = 0.0, cen = 0.0, bm = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = a.values[i];
      if (v == 0.0) continue;
      for (std::size_t d = 0; d < n; ++d) {
        x[d] = g.midpoint(i, d);
        xc[d] = x[d] - a.cube.center()[d];
      }
      const double m = monomial(x, beta);
      raw += v * m;
      cen += v * monomial(xc, beta);
      if (!bvals.empty()) bm += v * bvals[i] * m;
    }
    const double scale = (sup > 0.0 ? sup : 1.0) * qvol * std::pow(a.cube.side(), degree_of(beta));
    c.moment_residuals.push_back(std::abs(raw * cell) / scale);
    c.centered_residuals.push_back(std::abs(cen * cell) / scale);
    if (!bvals.empty()) c.b_moment_residuals.push_back(std::abs(bm * cell) / (scale * bsup));
  }
  c.size_slack = a.size_bound - sup;
  // Support check: the value grid must sit inside the cube.
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (a.values[i] != 0.0 && !a.cube.contains(g.midpoint(i))) {
      c.size_slack = -std::abs(a.values[i]);
      break;
    }
  }
  return c;
}

double indicator_norm(const Grid& grid, const Cube& q, const ExponentField& p) {
  const Grid sub = cells_within(grid, q);
  const GridFunction chi(sub, std::vector<double>(sub.size(), 1.0));
  return luxemburg_norm(chi, p);
}

void AtomicSum::add(double lambda, Atom atom) {
  if (!terms.empty() && atom.flavor != flavor) throw Error("atomic sum: mixed atom flavors");
  if (terms.empty()) flavor = atom.flavor;
  if (!atom.values.grid().aligned_with(grid)) throw Error("atomic sum: atom grid not aligned");
  terms.push_back({lambda, std::move(atom)});
}

GridFunction assemble(const AtomicSum& sum) {
  GridFunction out(sum.grid);
  const std::size_t n = sum.grid.dim();
  std::vector<std::size_t> idx(n);
  for (const auto& t : sum.terms) {
    const Grid& g = t.atom.values.grid();
    const auto off = g.offset_in(sum.grid);
    if (!off) throw Error("assemble: atom grid not aligned with the sum grid");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto local = g.unflatten(i);
      bool inside = true;
      for (std::size_t d = 0; d < n; ++d) {
        const std::int64_t k = static_cast<std::int64_t>(local[d]) + (*off)[d];
        if (k < 0 || k >= static_cast<std::int64_t>(sum.grid.shape()[d])) inside = false;
        idx[d] = static_cast<std::size_t>(k);
      }
      if (!inside) throw Error("assemble: atom cube leaves the sum grid");
      out[sum.grid.flatten(idx)] += t.lambda * t.atom.values[i];
    }
  }
  return out;
}

double sequence_norm(const AtomicSum& sum, const ExponentField& p, double s, bool normalized) {
  if (!(s > 0.0)) throw Error("sequence_norm: s must be positive");
  GridFunction acc(sum.grid);
  for (const auto& t : sum.terms) {
    double w = std::abs(t.lambda);
    if (normalized) w /= indicator_norm(sum.grid, t.atom.cube, p);
    const double ws = std::pow(w, s);
    const GridFunction chi = indicator(sum.grid, t.atom.cube);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (chi[i] != 0.0) acc[i] += ws;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::pow(acc[i], 1.0 / s);
  return luxemburg_norm(acc, p);
}

double sequence_norm_normalized(const AtomicSum& sum, const ExponentField& p) {
  return sequence_norm(sum, p, p.p_minus(), true);
}

double sequence_norm_plain(const AtomicSum& sum, const ExponentField& p) {
  return sequence_norm(sum, p, std::min(p.p_minus(), 1.0), false);
}

}  // namespace varexp
