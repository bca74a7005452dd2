#include "varexp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varexp/error.hpp"
#include "varexp/sampling.hpp"

namespace varexp {

InequalityReport make_report(std::string name, double lhs, double rhs, nlohmann::json config,
                             std::uint64_t seed) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.config = std::move(config);
  r.seed = seed;
  if (rhs > 0.0) {
    r.ratio = lhs / rhs;
  } else if (lhs == 0.0) {
    r.ratio = 0.0;
    r.degenerate = true;
  } else {
    r.ratio = std::numeric_limits<double>::infinity();
    r.degenerate = true;
  }
  return r;
}

namespace {

// Nonzero cells of f as (log|f|, p) pairs; modular(f/lambda) = h^n sum exp(p (log|f| - log lambda)).
struct ModularTerms {
  std::vector<double> log_abs;
  std::vector<double> p;
  double cell = 0.0;
  double sup = 0.0;
  double p_lo = std::numeric_limits<double>::infinity();
  double p_hi = 0.0;

  ModularTerms(const GridFunction& f, std::span<const double> p_cells) {
    if (p_cells.size() != f.size()) throw Error("modular: exponent samples do not match grid");
    cell = f.grid().cell_volume();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = std::abs(f[i]);
      if (a == 0.0) continue;
      log_abs.push_back(std::log(a));
      p.push_back(p_cells[i]);
      sup = std::max(sup, a);
      p_lo = std::min(p_lo, p_cells[i]);
      p_hi = std::max(p_hi, p_cells[i]);
    }
  }

  double at(double lambda) const {
    const double ll = std::log(lambda);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::exp(p[i] * (log_abs[i] - ll));
    return s * cell;
  }
};

}  // namespace

ModularValue modular(const GridFunction& f, const ExponentField& p) {
  const auto pc = p.sample_cells(f.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    if (a != 0.0) s += std::pow(a, pc[i]);
  }
  return {s * f.grid().cell_volume(), f.grid().h()};
}

double luxemburg_norm(const GridFunction& f, std::span<const double> p_cells) {
  const ModularTerms terms(f, p_cells);
  if (terms.p.empty()) return 0.0;
  const double vol = f.grid().volume();
  double lo = terms.sup *
              std::min({1.0, std::pow(vol, 1.0 / terms.p_hi), std::pow(vol, 1.0 / terms.p_lo)}) /
              2.0;
  double hi = terms.sup * std::max(1.0, std::pow(vol, 1.0 / terms.p_lo)) * 2.0;
  for (int k = 0; terms.at(lo) <= 1.0; ++k) {
    if (k > 2000) throw Error("luxemburg_norm: lower bracket expansion failed");
    lo *= 0.5;
  }
  for (int k = 0; terms.at(hi) > 1.0; ++k) {
    if (k > 2000) throw Error("luxemburg_norm: upper bracket expansion failed");
    hi *= 2.0;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (terms.at(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double luxemburg_norm(const GridFunction& f, const ExponentField& p) {
  return luxemburg_norm(f, p.sample_cells(f.grid()));
}

double holder_constant(const ExponentField& p) {
  return 1.0 + 1.0 / p.p_minus() - 1.0 / p.p_plus();
}

InequalityReport holder_pair_check(const GridFunction& f, const GridFunction& g,
                                   const ExponentField& p) {
  if (!(f.grid() == g.grid())) throw Error("holder_pair_check: f and g must share a grid");
  const ExponentField pc = conjugate(p);
  double lhs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) lhs += std::abs(f[i] * g[i]);
  lhs *= f.grid().cell_volume();
  const double rp = holder_constant(p);
  const double nf = luxemburg_norm(f, p);
  const double ng = luxemburg_norm(g, pc);
  nlohmann::json cfg = {{"r_p", rp}, {"norm_f", nf}, {"norm_g", ng}};
  return make_report("holder", lhs, rp * nf * ng, std::move(cfg));
}

GridFunction duality_witness(const GridFunction& f, const ExponentField& p) {
  const double nf = luxemburg_norm(f, p);
  GridFunction w(f.grid());
  if (nf == 0.0) return w;
  const auto pc = p.sample_cells(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double u = f[i] / nf;
    if (u != 0.0) w[i] = std::copysign(std::pow(std::abs(u), pc[i] - 1.0), u);
  }
  const double nw = luxemburg_norm(w, conjugate(p));
  if (nw > 0.0) w *= 1.0 / nw;
  return w;
}

InequalityReport duality_lower_bound(const GridFunction& f, const ExponentField& p,
                                     std::size_t trials, std::uint64_t seed, std::size_t block) {
  const ExponentField pc = conjugate(p);
  const auto pc_cells = pc.sample_cells(f.grid());
  const double nf = luxemburg_norm(f, p);
  const double rp = holder_constant(p);
  auto pairing = [&](const GridFunction& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return std::abs(s * f.grid().cell_volume());
  };
  double best = 0.0;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    GridFunction g = random_piecewise(f.grid(), block, rng);
    const double ng = luxemburg_norm(g, pc_cells);
    if (ng == 0.0) continue;
    g *= 1.0 / ng;
    best = std::max(best, pairing(g));
  }
  double witness = 0.0;
  if (nf > 0.0) {
    witness = pairing(duality_witness(f, p));
    best = std::max(best, witness);
  }
  nlohmann::json cfg = {{"norm_f", nf}, {"r_p", rp}, {"witness", witness}, {"trials", trials}};
  return make_report("duality", best, rp * nf, std::move(cfg), seed);
}

InequalityReport generalized_holder_check(std::span<const GridFunction> fs,
                                          std::span<const ExponentField> ps) {
  if (fs.empty() || fs.size() != ps.size()) {
    throw Error("generalized_holder_check: need one exponent per function");
  }
  const ExponentField p = holder_scale(ps, 0.0, ps[0].dim());
  GridFunction prod = fs[0];
  double rhs = luxemburg_norm(fs[0], ps[0]);
  for (std::size_t i = 1; i < fs.size(); ++i) {
    prod = pointwise_product(prod, fs[i]);
    rhs *= luxemburg_norm(fs[i], ps[i]);
  }
  const double lhs = luxemburg_norm(prod, p);
  return make_report("generalized_holder", lhs, rhs, {{"m", fs.size()}});
}

std::vector<Cube> dyadic_family(const Grid& grid, std::size_t min_cells) {
  const std::size_t n = grid.dim();
  std::size_t cells = *std::min_element(grid.shape().begin(), grid.shape().end());
  std::vector<Cube> out;
  while (cells >= min_cells) {
    const double side = static_cast<double>(cells) * grid.h();
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) {
      counts[d] = grid.shape()[d] / cells;
      total *= counts[d];
    }
    for (std::size_t k = 0; k < total; ++k) {
      Point c(n);
      std::size_t rem = k;
      for (std::size_t d = n; d-- > 0;) {
        const std::size_t j = rem % counts[d];
        rem /= counts[d];
        c[d] = grid.lo()[d] + (static_cast<double>(j) + 0.5) * side;
      }
      out.emplace_back(std::move(c), side);
    }
    if (cells % 2 != 0) break;
    cells /= 2;
  }
  if (out.empty()) throw Error("dyadic_family: grid too coarse for the minimum cube size");
  return out;
}

double bmo_norm(const GridFunction& b, std::span<const Cube> family) {
  if (family.empty()) throw Error("bmo_norm: empty cube family");
  const Grid& g = b.grid();
  double best = 0.0;
  for (const Cube& q : family) {
    const Grid sub = cells_within(g, q);
    const auto off = *sub.offset_in(g);
    std::vector<double> vals;
    vals.reserve(sub.size());
    std::vector<std::size_t> idx(g.dim());
    for (std::size_t i = 0; i < sub.size(); ++i) {
      const auto local = sub.unflatten(i);
      for (std::size_t d = 0; d < g.dim(); ++d) {
        idx[d] = static_cast<std::size_t>(static_cast<std::int64_t>(local[d]) + off[d]);
      }
      vals.push_back(b[g.flatten(idx)]);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double osc = 0.0;
    for (double v : vals) osc += std::abs(v - mean);
    best = std::max(best, osc / static_cast<double>(vals.size()));
  }
  return best;
}

double bmo_norm(const GridFunction& b) {
  const auto fam = dyadic_family(b.grid());
  return bmo_norm(b, fam);
}

}  // namespace varexp
