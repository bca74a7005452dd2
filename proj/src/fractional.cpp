#include "varexp/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "varexp/error.hpp"
#include "varexp/norms.hpp"

namespace varexp {

void KernelParams::validate() const {
  if (m < 1 || n < 1) throw Error("kernel parameters: m and n must be positive");
  const double mn = static_cast<double>(m * n);
  if (!(alpha > 0.0) || !(alpha < mn)) throw Error("kernel parameters: alpha must lie in (0, mn)");
}

KernelShape KernelParams::shape(KernelForm form) const { return {m, n, alpha, form}; }

double kernel(std::span<const double> y, const KernelParams& params, KernelForm form) {
  params.validate();
  if (y.size() != params.m * params.n) throw Error("kernel: expected m*n coordinates");
  bool all_zero = true;
  for (double v : y) all_zero = all_zero && v == 0.0;
  if (all_zero) throw Error("kernel singularity");
  return params.shape(form)(y);
}

double kernel(const std::vector<Point>& ys, const KernelParams& params, KernelForm form) {
  std::vector<double> flat;
  for (const auto& y : ys) flat.insert(flat.end(), y.begin(), y.end());
  return kernel(flat, params, form);
}

namespace {

constexpr double kSnap = 16777216.0;  // 2^24

struct Factor {
  Point lo;
  std::vector<std::int64_t> cells;  // lattice indices, n per nonzero cell
  std::vector<double> values;
  std::vector<double> bvals;        // b at the cells (commutator slot only)
};

// Tensor-product quadrature for the multilinear operator with optional
// commutator weight (b(x) - b(y_j)).
class ProductQuadrature {
 public:
  ProductQuadrature(std::span<const GridFunction> fs, const KernelParams& params,
                    KernelForm form, SingularPolicy policy, const GridFunction* b, std::size_t j)
      : params_(params), shape_(params.shape(form)), policy_(policy), b_(b), j_(j) {
    params.validate();
    if (fs.size() != params.m) throw Error("I_alpha: expected m functions");
    if (b && j >= params.m) throw Error("commutator: index j out of range");
    h_ = fs[0].grid().h();
    const std::size_t n = params.n;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Grid& g = fs[i].grid();
      if (g.dim() != n) throw Error("I_alpha: function dimension differs from n");
      if (std::abs(g.h() - h_) > 1e-12 * h_) throw Error("I_alpha: functions must share h");
      Factor f;
      f.lo = g.lo();
      for (std::size_t c = 0; c < g.size(); ++c) {
        if (fs[i][c] == 0.0) continue;
        const auto idx = g.unflatten(c);
        for (auto v : idx) f.cells.push_back(static_cast<std::int64_t>(v));
        f.values.push_back(fs[i][c]);
        if (b && i == j) {
          const Point mid = g.midpoint(c);
          if (!b->grid().locate(mid)) throw Error("commutator: b does not cover the support of f_j");
          f.bvals.push_back(b->at(mid));
        }
      }
      factors_.push_back(std::move(f));
    }
    radius_ = near_radius(shape_.dim());
    scale_ = std::pow(h_, params.alpha);
  }

  double eval(const Point& x) {
    const std::size_t n = params_.n, m = params_.m;
    if (x.size() != n) throw Error("I_alpha: evaluation point dimension mismatch");
    for (const auto& f : factors_) {
      if (f.values.empty()) return 0.0;
    }
    double bx = 0.0;
    if (b_) {
      if (!b_->grid().locate(x)) throw Error("commutator: b does not cover the evaluation point");
      bx = b_->at(x);
    }
    // Per-factor anchor I and fractional position phi of x in units of h.
    std::vector<std::int64_t> anchor(m * n);
    std::vector<double> phi(m * n);
    std::vector<std::int64_t> key(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        const double t = std::nearbyint((x[d] - factors_[i].lo[d]) / h_ * kSnap) / kSnap;
        const double fl = std::floor(t);
        anchor[i * n + d] = static_cast<std::int64_t>(fl);
        phi[i * n + d] = t - fl;
        key[i * n + d] = static_cast<std::int64_t>(std::nearbyint((t - fl) * kSnap));
      }
    }
    const std::vector<double>* table = nullptr;
    if (policy_ == SingularPolicy::product_integration) table = &table_for(key, phi);

    // Per-factor cell data: partial norm, near-field index, singular flag.
    const auto R = static_cast<std::int64_t>(radius_);
    const std::size_t boxes_block = [&] {
      std::size_t v = 1;
      for (std::size_t d = 0; d < n; ++d) v *= 2 * radius_;
      return v;
    }();
    blocks_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Factor& f = factors_[i];
      auto& blk = blocks_[i];
      const std::size_t count = f.values.size();
      blk.partial.resize(count);
      blk.near.resize(count);
      blk.singular.resize(count);
      for (std::size_t c = 0; c < count; ++c) {
        double s = 0.0;
        bool near = true, sing = true;
        std::size_t nidx = 0;
        for (std::size_t d = 0; d < n; ++d) {
          const std::int64_t k = anchor[i * n + d] - f.cells[c * n + d];
          const double u = static_cast<double>(k) + phi[i * n + d] - 0.5;
          s += u * u;
          if (k <= -R || k > R) near = false;
          if (!(std::abs(u) < 0.5)) sing = false;
          nidx = nidx * 2 * radius_ + static_cast<std::size_t>(near ? k + R - 1 : 0);
        }
        blk.partial[c] = shape_.form == KernelForm::euclidean ? s : std::sqrt(s);
        blk.near[c] = near ? static_cast<std::int64_t>(nidx) : -1;
        blk.singular[c] = sing;
      }
    }
    bx_ = bx;
    table_ = table;
    boxes_block_ = boxes_block;
    return scale_ * recurse(0, 1.0, 0.0, 0, true, true);
  }

 private:
  struct Block {
    std::vector<double> partial;
    std::vector<std::int64_t> near;
    std::vector<char> singular;
  };

  double recurse(std::size_t i, double prod, double acc, std::size_t tidx, bool near, bool sing) {
    const Factor& f = factors_[i];
    const Block& blk = blocks_[i];
    const bool last = i + 1 == factors_.size();
    double total = 0.0;
    for (std::size_t c = 0; c < f.values.size(); ++c) {
      double v = prod * f.values[c];
      if (b_ && i == j_) v *= bx_ - f.bvals[c];
      const double a = acc + blk.partial[c];
      const bool nr = near && blk.near[c] >= 0;
      const bool sg = sing && blk.singular[c];
      const std::size_t ti = nr ? tidx * boxes_block_ + static_cast<std::size_t>(blk.near[c]) : 0;
      if (!last) {
        total += recurse(i + 1, v, a, ti, nr, sg);
        continue;
      }
      double w;
      if (table_ && nr) {
        w = (*table_)[ti];
      } else if (!table_ && sg) {
        continue;
      } else {
        w = shape_.form == KernelForm::euclidean ? std::pow(a, -0.5 * shape_.gamma())
                                                 : std::pow(a, -shape_.gamma());
      }
      total += v * w;
    }
    return total;
  }

  const std::vector<double>& table_for(const std::vector<std::int64_t>& key,
                                       const std::vector<double>& phi) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, near_field_table(shape_, phi, radius_)).first->second;
  }

  KernelParams params_;
  KernelShape shape_;
  SingularPolicy policy_;
  const GridFunction* b_;
  std::size_t j_;
  double h_ = 0.0;
  double scale_ = 1.0;
  std::size_t radius_ = 1;
  std::vector<Factor> factors_;
  std::map<std::vector<std::int64_t>, std::vector<double>> cache_;
  // Per-evaluation scratch.
  std::vector<Block> blocks_;
  double bx_ = 0.0;
  const std::vector<double>* table_ = nullptr;
  std::size_t boxes_block_ = 1;
};

std::vector<Point> midpoints(const Grid& g) {
  std::vector<Point> xs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) xs[i] = g.midpoint(i);
  return xs;
}

}  // namespace

std::vector<double> apply_Ialpha(std::span<const GridFunction> fs, const KernelParams& params,
                                 std::span<const Point> xs, const QuadratureOptions& opt) {
  ProductQuadrature quad(fs, params, opt.form, opt.policy, nullptr, 0);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = quad.eval(xs[i]);
  return out;
}

GridFunction apply_Ialpha(std::span<const GridFunction> fs, const KernelParams& params,
                          const Grid& xs, const QuadratureOptions& opt) {
  const auto pts = midpoints(xs);
  return GridFunction(xs, apply_Ialpha(fs, params, pts, opt));
}

double apply_Ialpha_at(std::span<const GridFunction> fs, const KernelParams& params,
                       const Point& x, const QuadratureOptions& opt) {
  const Point pts[1] = {x};
  return apply_Ialpha(fs, params, pts, opt)[0];
}

std::vector<double> apply_commutator(const GridFunction& b, std::span<const GridFunction> fs,
                                     std::size_t j, const KernelParams& params,
                                     std::span<const Point> xs, SingularPolicy policy) {
  if (j >= params.m) throw Error("commutator: index j out of range");
  ProductQuadrature quad(fs, params, KernelForm::sum_of_norms, policy, &b, j);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = quad.eval(xs[i]);
  return out;
}

GridFunction apply_commutator(const GridFunction& b, std::span<const GridFunction> fs,
                              std::size_t j, const KernelParams& params, const Grid& xs,
                              SingularPolicy policy) {
  const auto pts = midpoints(xs);
  return GridFunction(xs, apply_commutator(b, fs, j, params, pts, policy));
}

std::vector<double> commutator_by_definition(const GridFunction& b,
                                             std::span<const GridFunction> fs, std::size_t j,
                                             const KernelParams& params,
                                             std::span<const Point> xs, SingularPolicy policy) {
  if (j >= params.m) throw Error("commutator: index j out of range");
  const QuadratureOptions opt{policy, KernelForm::sum_of_norms};
  std::vector<GridFunction> bf(fs.begin(), fs.end());
  const Grid& gj = fs[j].grid();
  for (std::size_t c = 0; c < gj.size(); ++c) {
    if (bf[j][c] != 0.0) bf[j][c] *= b.at(gj.midpoint(c));
  }
  const auto plain = apply_Ialpha(fs, params, xs, opt);
  const auto weighted = apply_Ialpha(bf, params, xs, opt);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = b.at(xs[i]) * plain[i] - weighted[i];
  return out;
}

double fd_step(double dist, int order) {
  const double eps = std::numeric_limits<double>::epsilon();
  return dist * std::max(1e-4, std::pow(eps, 1.0 / (order + 2)));
}

InequalityReport kernel_derivative_check(const KernelParams& params, std::span<const int> beta,
                                         std::span<const DerivativeSample> samples) {
  params.validate();
  const std::size_t D = params.m * params.n;
  if (beta.size() != D) throw Error("kernel_derivative_check: beta needs m*n entries");
  int order = 0;
  for (int b : beta) {
    if (b < 0) throw Error("kernel_derivative_check: negative multi-index entry");
    order += b;
  }
  if (order > 4) throw Error("kernel_derivative_check: |beta| must be at most 4");
  const KernelShape shape = params.shape();
  const double expo = params.alpha - static_cast<double>(D) - order;

  // Stencil: product over coordinates of the central difference weights.
  std::vector<std::size_t> active;
  for (std::size_t d = 0; d < D; ++d) {
    if (beta[d] > 0) active.push_back(d);
  }
  auto binom = [](int k, int i) {
    double r = 1.0;
    for (int t = 1; t <= i; ++t) r = r * (k - i + t) / t;
    return r;
  };

  double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0;
  std::size_t skipped = 0, used = 0;
  std::vector<double> z(D), zz(D);
  for (const auto& s : samples) {
    if (s.x.size() != params.n || s.ys.size() != params.m) {
      throw Error("kernel_derivative_check: sample shape mismatch");
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < params.m; ++i) {
      if (s.ys[i].size() != params.n) throw Error("kernel_derivative_check: sample shape mismatch");
      for (std::size_t a = 0; a < params.n; ++a) {
        z[i * params.n + a] = s.x[a] - s.ys[i][a];
        r2 += z[i * params.n + a] * z[i * params.n + a];
      }
    }
    const double dist = std::sqrt(r2);
    const double step = fd_step(dist, order);
    if (!(dist > 0.0) || dist < 10.0 * step * std::max(1, order)) {
      ++skipped;
      continue;
    }
    double deriv;
    if (order == 0) {
      deriv = shape(z);
    } else {
      // K depends on y through z = x - y; d/dy = -d/dz, sign dropped under |.|.
      std::vector<int> idx(active.size(), 0);
      double acc = 0.0;
      while (true) {
        double w = 1.0;
        zz = z;
        for (std::size_t a = 0; a < active.size(); ++a) {
          const int k = beta[active[a]];
          const int i = idx[a];
          w *= (i % 2 == 0 ? 1.0 : -1.0) * binom(k, i);
          zz[active[a]] += (0.5 * k - i) * step;
        }
        acc += w * shape(zz);
        std::size_t a = 0;
        while (a < active.size() && ++idx[a] > beta[active[a]]) {
          idx[a] = 0;
          ++a;
        }
        if (a == active.size()) break;
      }
      deriv = acc / std::pow(step, order);
    }
    const double lhs = std::abs(deriv);
    const double rhs = order == 0 ? shape(z) : std::pow(dist, expo);
    ++used;
    const double ratio = lhs / rhs;
    if (ratio > worst || used == 1) {
      worst = ratio;
      worst_lhs = lhs;
      worst_rhs = rhs;
    }
  }
  nlohmann::json cfg = {{"order", order}, {"samples", used}, {"skipped", skipped},
                        {"beta", std::vector<int>(beta.begin(), beta.end())}};
  return make_report("kernel_derivative", worst_lhs, worst_rhs, std::move(cfg));
}

double DecayCheckConfig::theta(std::size_t n) const {
  if (subset.empty()) throw Error("decay check: index set A must be nonempty");
  const double nd = static_cast<double>(n);
  return (nd + (d + 1.0) / static_cast<double>(subset.size())) / nd;
}

std::vector<ExponentField> decay_exponents(const DecayCheckConfig& cfg,
                                           std::span<const ExponentField> ps,
                                           const KernelParams& params) {
  const double a_size = static_cast<double>(cfg.subset.size());
  std::vector<ExponentField> out;
  for (std::size_t j : cfg.subset) {
    if (j >= ps.size()) throw Error("decay check: index outside the exponent list");
    const ExponentField one[1] = {ps[j]};
    out.push_back(holder_scale(one, params.alpha / a_size, params.n));
  }
  return out;
}

double decay_bound(std::span<const Atom> atoms, const DecayCheckConfig& cfg,
                   const KernelParams& params, const Point& x,
                   std::span<const ExponentField> ps) {
  const double nd = static_cast<double>(params.n);
  const double a_size = static_cast<double>(cfg.subset.size());
  const double lift = (cfg.d + 1.0) / a_size;
  std::vector<bool> in_a(atoms.size(), false);
  for (std::size_t j : cfg.subset) in_a[j] = true;
  double prod = 1.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const Cube& q = atoms[j].cube;
    double dist = 0.0;
    for (std::size_t a = 0; a < params.n; ++a) {
      dist += (x[a] - q.center()[a]) * (x[a] - q.center()[a]);
    }
    dist = std::sqrt(dist);
    const double num = std::pow(q.volume(), 1.0 + lift / nd);
    double expo = nd + lift;
    if (in_a[j]) expo -= params.alpha / a_size;
    double factor = num / std::pow(dist + q.side(), expo);
    if (atoms[j].flavor == Flavor::b_weighted) {
      if (ps.size() != atoms.size()) throw Error("decay check: b-weighted atoms need exponents");
      factor /= indicator_norm(atoms[j].values.grid(), q, ps[j]);
    }
    prod *= factor;
  }
  return prod;
}

InequalityReport decay_bound_check(std::span<const Atom> atoms, const DecayCheckConfig& cfg,
                                   const KernelParams& params, std::span<const Point> xs,
                                   std::span<const ExponentField> ps) {
  params.validate();
  if (atoms.size() != params.m) throw Error("decay check: expected m atoms");
  if (cfg.subset.empty()) throw Error("decay check: index set A must be nonempty");
  std::vector<Cube> cubes;
  std::vector<GridFunction> fs;
  for (const auto& a : atoms) {
    if (a.degree < cfg.d) throw Error("decay check: atom degree below the configured d");
    cubes.push_back(a.cube);
    fs.push_back(a.values);
  }
  const RegionEA region(cubes, cfg.subset, cfg.kappa);
  for (const auto& x : xs) {
    if (auto why = region.violation(x)) throw Error("decay check: x not in E_A: " + *why);
  }
  const auto values = apply_Ialpha(fs, params, xs);
  double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double rhs = decay_bound(atoms, cfg, params, xs[i], ps);
    const double lhs = std::abs(values[i]);
    if (i == 0 || lhs / rhs > worst) {
      worst = lhs / rhs;
      worst_lhs = lhs;
      worst_rhs = rhs;
    }
  }
  nlohmann::json c = {{"A", cfg.subset}, {"d", cfg.d}, {"kappa", cfg.kappa},
                      {"theta", cfg.theta(params.n)}, {"points", xs.size()},
                      {"flavor", to_string(atoms[0].flavor)}};
  return make_report("decay", worst_lhs, worst_rhs, std::move(c));
}

InequalityReport theorem_ratio_from_output(const GridFunction& output,
                                           std::span<const AtomicSum> sums,
                                           std::span<const ExponentField> ps,
                                           const KernelParams& params,
                                           std::optional<CommutatorArgs> commutator) {
  params.validate();
  if (!(params.alpha < static_cast<double>(params.n))) {
    throw Error("theorem_ratio: requires 0 < alpha < n");
  }
  if (sums.size() != params.m || ps.size() != params.m) {
    throw Error("theorem_ratio: expected m atomic sums and m exponents");
  }
  const ExponentField q = holder_scale(ps, params.alpha, params.n);
  const double lhs = luxemburg_norm(output, q);
  double rhs = 1.0;
  std::vector<double> factors;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    if (commutator && sums[j].flavor != Flavor::b_weighted && !sums[j].terms.empty()) {
      throw Error("theorem_ratio: commutator inputs must be b-weighted atomic sums");
    }
    const double a = sums[j].flavor == Flavor::b_weighted ? sequence_norm_normalized(sums[j], ps[j])
                                                          : sequence_norm_plain(sums[j], ps[j]);
    factors.push_back(a);
    rhs *= a;
  }
  double bmo = 0.0;
  if (commutator) {
    if (!commutator->b) throw Error("theorem_ratio: commutator needs b");
    bmo = bmo_norm(*commutator->b);
    rhs *= bmo;
  }
  if (rhs == 0.0 && lhs > 0.0) throw Error("norm proxy degenerate");
  nlohmann::json c = {{"m", params.m},       {"n", params.n},
                      {"alpha", params.alpha}, {"sequence_norms", factors},
                      {"q_minus", q.p_minus()}, {"q_plus", q.p_plus()}};
  if (commutator) {
    c["bmo"] = bmo;
    c["j"] = commutator->j;
  }
  return make_report(commutator ? "commutator_theorem" : "theorem", lhs, rhs, std::move(c));
}

InequalityReport theorem_ratio(std::span<const AtomicSum> sums, std::span<const ExponentField> ps,
                               const KernelParams& params, const Grid& eval,
                               std::optional<CommutatorArgs> commutator) {
  params.validate();
  if (sums.size() != params.m) throw Error("theorem_ratio: expected m atomic sums");
  bool empty = false;
  std::vector<GridFunction> fs;
  for (const auto& s : sums) {
    if (s.terms.empty()) empty = true;
    fs.push_back(assemble(s));
  }
  GridFunction out(eval);
  if (!empty) {
    if (commutator) {
      if (!commutator->b) throw Error("theorem_ratio: commutator needs b");
      out = apply_commutator(*commutator->b, fs, commutator->j, params, eval);
    } else {
      out = apply_Ialpha(fs, params, eval);
    }
  }
  return theorem_ratio_from_output(out, sums, ps, params, commutator);
}

}  // namespace varexp
