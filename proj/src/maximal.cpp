#include "varexp/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "varexp/error.hpp"
#include "varexp/norms.hpp"

namespace varexp {

namespace {

// Row-major n-dimensional array used for the separable window passes.
struct NdArray {
  std::vector<std::size_t> shape;
  std::vector<double> v;

  // Calls fn(base, stride, length) for every line along `axis`.
  template <class Fn>
  void for_lines(std::size_t axis, Fn&& fn) const {
    std::size_t outer = 1, inner = 1;
    for (std::size_t d = 0; d < axis; ++d) outer *= shape[d];
    for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
    const std::size_t len = shape[axis];
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t j = 0; j < inner; ++j) fn(o * len * inner + j, inner, len, o, j);
    }
  }
};

// out[p] = sum of in[j] over the k-window ending at p, p in [0, len + k - 1).
NdArray padded_window_sum(const NdArray& in, std::size_t axis, std::size_t k) {
  NdArray out;
  out.shape = in.shape;
  out.shape[axis] = in.shape[axis] + k - 1;
  std::size_t total = 1;
  for (auto s : out.shape) total *= s;
  out.v.assign(total, 0.0);
  const std::size_t out_len = out.shape[axis];
  in.for_lines(axis, [&](std::size_t base, std::size_t stride, std::size_t len, std::size_t o,
                         std::size_t j) {
    const std::size_t obase = o * out_len * stride + j;
    for (std::size_t p = 0; p < out_len; ++p) {
      const std::size_t first = p + 1 >= k ? p + 1 - k : 0;
      const std::size_t last = std::min(p, len - 1);
      double s = 0.0;
      for (std::size_t q = first; q <= last; ++q) s += in.v[base + q * stride];
      out.v[obase + p * stride] = s;
    }
  });
  return out;
}

// out[i] = sum of in over the centred window of odd length k, clipped to the line.
NdArray centered_window_sum(const NdArray& in, std::size_t axis, std::size_t k) {
  NdArray out{in.shape, std::vector<double>(in.v.size(), 0.0)};
  const std::size_t half = k / 2;
  in.for_lines(axis, [&](std::size_t base, std::size_t stride, std::size_t len, std::size_t,
                         std::size_t) {
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t first = i >= half ? i - half : 0;
      const std::size_t last = std::min(i + half, len - 1);
      double s = 0.0;
      for (std::size_t q = first; q <= last; ++q) s += in.v[base + q * stride];
      out.v[base + i * stride] = s;
    }
  });
  return out;
}

// out[i] = max in[i .. i + k - 1]; the line shrinks by k - 1.
NdArray window_max(const NdArray& in, std::size_t axis, std::size_t k) {
  NdArray out;
  out.shape = in.shape;
  out.shape[axis] = in.shape[axis] - (k - 1);
  std::size_t total = 1;
  for (auto s : out.shape) total *= s;
  out.v.assign(total, 0.0);
  const std::size_t out_len = out.shape[axis];
  in.for_lines(axis, [&](std::size_t base, std::size_t stride, std::size_t len, std::size_t o,
                         std::size_t j) {
    const std::size_t obase = o * out_len * stride + j;
    std::deque<std::size_t> dq;
    for (std::size_t p = 0; p < len; ++p) {
      const double x = in.v[base + p * stride];
      while (!dq.empty() && in.v[base + dq.back() * stride] <= x) dq.pop_back();
      dq.push_back(p);
      if (p + 1 >= k) {
        const std::size_t i = p + 1 - k;
        while (dq.front() < i) dq.pop_front();
        out.v[obase + i * stride] = in.v[base + dq.front() * stride];
      }
    }
  });
  return out;
}

double euclid_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

}  // namespace

MaximalConfig MaximalConfig::dyadic(const Grid& grid, double alpha, bool centered) {
  MaximalConfig cfg;
  cfg.alpha = alpha;
  cfg.centered = centered;
  const std::size_t biggest = *std::max_element(grid.shape().begin(), grid.shape().end());
  for (std::size_t k = 1;; k *= 2) {
    cfg.scales.push_back(static_cast<double>(k) * grid.h());
    if (k >= biggest) break;
  }
  return cfg;
}

void MaximalConfig::validate(std::size_t n) const {
  if (!(alpha >= 0.0) || !(alpha < static_cast<double>(n))) {
    throw Error("maximal: alpha must lie in [0, n)");
  }
  if (scales.empty()) throw Error("maximal: empty scale set");
  for (double s : scales) {
    if (!(s > 0.0)) throw Error("maximal: scales must be positive");
  }
}

GridFunction frac_maximal(const GridFunction& f, const MaximalConfig& cfg) {
  const Grid& g = f.grid();
  const std::size_t n = g.dim();
  cfg.validate(n);
  NdArray base{g.shape(), std::vector<double>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) base.v[i] = std::abs(f[i]);
  const double cellv = g.cell_volume();
  const double expo = static_cast<double>(n) - cfg.alpha;
  std::vector<double> best(f.size(), 0.0);
  std::vector<std::size_t> done;
  for (double l : cfg.scales) {
    std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(l / g.h())));
    if (cfg.centered && k % 2 == 0) ++k;
    if (std::find(done.begin(), done.end(), k) != done.end()) continue;
    done.push_back(k);
    NdArray acc = base;
    if (k > 1) {
      if (cfg.centered) {
        for (std::size_t d = 0; d < n; ++d) acc = centered_window_sum(acc, d, k);
      } else {
        for (std::size_t d = 0; d < n; ++d) acc = padded_window_sum(acc, d, k);
        for (std::size_t d = 0; d < n; ++d) acc = window_max(acc, d, k);
      }
    }
    const double scale = cellv / std::pow(static_cast<double>(k) * g.h(), expo);
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], acc.v[i] * scale);
  }
  return GridFunction(g, std::move(best));
}

InequalityReport claim_check(const Point& y, double r, double alpha, std::span<const Point> xs,
                             double h) {
  const std::size_t n = y.size();
  if (!(r > 0.0)) throw Error("claim_check: r must be positive");
  if (!(alpha >= 0.0 && alpha < static_cast<double>(n))) {
    throw Error("claim_check: alpha must lie in [0, n)");
  }
  if (!(h > 0.0)) throw Error("claim_check: h must be positive");
  const Cube q(y, r);
  // Lattice anchored on the lower face of Q so that Q is a union of cells when r/h is whole.
  Point lo(n), hi(n);
  for (std::size_t d = 0; d < n; ++d) {
    double a = q.lower(d) - r, b = q.upper(d) + r;
    for (const auto& x : xs) {
      if (x.size() != n) throw Error("claim_check: point dimension mismatch");
      a = std::min(a, x[d] - h);
      b = std::max(b, x[d] + h);
    }
    lo[d] = q.lower(d) - h * std::ceil((q.lower(d) - a) / h);
    hi[d] = lo[d] + h * std::ceil((b - lo[d]) / h);
  }
  const Grid grid = Grid::over_box(lo, hi, h);
  const GridFunction chi = indicator(grid, q);
  const GridFunction m = frac_maximal(chi, MaximalConfig::dyadic(grid, alpha));
  double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0;
  const double nd = static_cast<double>(n);
  for (const auto& x : xs) {
    const double lhs = std::pow(r, nd) / std::pow(r + euclid_dist(x, y), nd - alpha);
    const double rhs = m.at(x);
    const double ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    if (ratio > worst) {
      worst = ratio;
      worst_lhs = lhs;
      worst_rhs = rhs;
    }
  }
  nlohmann::json cfg = {{"r", r}, {"alpha", alpha}, {"h", h}, {"points", xs.size()}};
  return make_report("claim", worst_lhs, worst_rhs, std::move(cfg));
}

namespace {

GridFunction lq_aggregate(std::span<const GridFunction> fs, double lq) {
  GridFunction out(fs[0].grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const auto& f : fs) s += std::pow(std::abs(f[i]), lq);
    out[i] = std::pow(s, 1.0 / lq);
  }
  return out;
}

}  // namespace

InequalityReport vector_fs_check(std::span<const GridFunction> fs, const ExponentField& p,
                                 double lq, const MaximalConfig& cfg) {
  if (!(lq > 1.0)) throw Error("vector_fs_check: l^q exponent must exceed 1");
  if (fs.empty()) throw Error("vector_fs_check: empty family");
  for (const auto& f : fs) {
    if (!(f.grid() == fs[0].grid())) throw Error("vector_fs_check: functions must share a grid");
  }
  const ExponentField ps[1] = {p};
  const ExponentField q = holder_scale(ps, cfg.alpha, p.dim());
  std::vector<GridFunction> mf;
  mf.reserve(fs.size());
  for (const auto& f : fs) mf.push_back(frac_maximal(f, cfg));
  const double lhs = luxemburg_norm(lq_aggregate(mf, lq), q);
  const double rhs = luxemburg_norm(lq_aggregate(fs, lq), p);
  nlohmann::json c = {{"alpha", cfg.alpha}, {"lq", lq}, {"family", fs.size()},
                      {"h", fs[0].grid().h()}};
  return make_report("fefferman_stein", lhs, rhs, std::move(c));
}

InequalityReport vector_fs_check(std::span<const GridFunction> fs, const ExponentField& p,
                                 double alpha, double lq) {
  if (fs.empty()) throw Error("vector_fs_check: empty family");
  return vector_fs_check(fs, p, lq, MaximalConfig::dyadic(fs[0].grid(), alpha));
}

// ---------------------------------------------------------------------------
// Bump dictionary

namespace {

double binomial(int k, int i) {
  double r = 1.0;
  for (int j = 1; j <= i; ++j) r = r * static_cast<double>(k - i + j) / static_cast<double>(j);
  return r;
}

// j-th central difference quotient of g at z with step s.
template <class G>
double central_difference(const G& g, double z, int j, double s) {
  double acc = 0.0;
  for (int i = 0; i <= j; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(j, i) * g(z + (0.5 * j - i) * s);
  }
  return acc / std::pow(s, j);
}

// All multi-indices of length n with |beta| <= order.
void multi_indices(std::size_t n, int order, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, std::size_t d, int left) -> void {
    if (d == n) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[d] = v;
      self(self, d + 1, left - v);
    }
    cur[d] = 0;
  };
  rec(rec, 0, order);
}

}  // namespace

double BumpDictionary::factor(std::size_t k, double z) const {
  if (std::abs(z) >= 1.0) return 0.0;
  const auto& b = bumps_[k];
  return std::pow(b.normalizer, 1.0 / static_cast<double>(n_)) * std::pow(1.0 - z * z, b.power);
}

double BumpDictionary::psi(std::size_t k, std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t d = 0; d < n_; ++d) v *= factor(k, x[d]);
  return v;
}

BumpDictionary BumpDictionary::make(const Grid& grid, const Options& opt) {
  BumpDictionary dict;
  dict.n_ = grid.dim();
  if (opt.degree < -1) throw Error("bump dictionary: degree must be >= -1");
  dict.N_ = static_cast<int>(dict.n_) + opt.degree + 2;
  dict.cap_ = opt.seminorm_cap;
  const std::size_t n = dict.n_;
  const double nd = static_cast<double>(n);

  // Dyadic scales.
  const Point hi = grid.hi();
  double extent = 0.0;
  for (std::size_t d = 0; d < n; ++d) extent = std::max(extent, hi[d] - grid.lo()[d]);
  const double t_min = opt.t_min > 0.0 ? opt.t_min : 2.0 * grid.h();
  const double t_max = opt.t_max > 0.0 ? opt.t_max : extent;
  for (double t = t_min; t <= t_max * (1.0 + 1e-12); t *= 2.0) dict.scales_.push_back(t);
  if (dict.scales_.empty()) throw Error("bump dictionary: empty scale range");

  // Reference sampling for certification.
  constexpr std::size_t kQuadCells = 8192;
  const std::size_t sup_pts = std::max<std::size_t>(
      33, std::min<std::size_t>(401, static_cast<std::size_t>(std::pow(2.0e6, 1.0 / nd))));
  std::vector<double> zs(sup_pts);
  for (std::size_t i = 0; i < sup_pts; ++i) {
    zs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(sup_pts - 1);
  }
  std::vector<std::vector<int>> betas;
  multi_indices(n, dict.N_, betas);

  dict.certified_ = true;
  for (std::size_t k = 0; k < opt.count; ++k) {
    BumpCertificate c;
    c.power = dict.N_ + 1 + static_cast<int>(k);
    // Normalise with the midpoint rule on the reference cube (the product structure
    // makes the n-dimensional midpoint sum the n-th power of the 1-D sum).
    double s1 = 0.0;
    const double hz = 2.0 / static_cast<double>(kQuadCells);
    for (std::size_t i = 0; i < kQuadCells; ++i) {
      const double z = -1.0 + (static_cast<double>(i) + 0.5) * hz;
      s1 += std::pow(1.0 - z * z, c.power);
    }
    s1 *= hz;
    c.normalizer = 1.0 / std::pow(s1, nd);
    // Certify the integral against the closed form sqrt(pi) Gamma(k+1)/Gamma(k+3/2).
    const double exact1 = std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(c.power + 1.0) -
                                   std::lgamma(c.power + 1.5));
    c.integral_error = std::abs(c.normalizer * std::pow(exact1, nd) - 1.0);
    dict.bumps_.push_back(c);

    // One-dimensional derivative tables by central differences.
    const double cfac = std::pow(c.normalizer, 1.0 / nd);
    auto g = [&](double z) { return std::abs(z) >= 1.0 ? 0.0 : cfac * std::pow(1.0 - z * z, c.power); };
    std::vector<std::vector<double>> deriv(static_cast<std::size_t>(dict.N_) + 1,
                                           std::vector<double>(sup_pts));
    for (int j = 0; j <= dict.N_; ++j) {
      const double step = 1e-2;
      for (std::size_t i = 0; i < sup_pts; ++i) {
        deriv[j][i] = j == 0 ? g(zs[i]) : central_difference(g, zs[i], j, step);
      }
    }
    // Weighted sup over the tensor reference grid, summed over multi-indices.
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= sup_pts;
    double semi = 0.0;
    std::vector<std::size_t> idx(n);
    for (const auto& beta : betas) {
      double sup = 0.0;
      for (std::size_t t = 0; t < total; ++t) {
        std::size_t rem = t;
        double r2 = 0.0, v = 1.0;
        for (std::size_t d = n; d-- > 0;) {
          idx[d] = rem % sup_pts;
          rem /= sup_pts;
          r2 += zs[idx[d]] * zs[idx[d]];
          v *= deriv[beta[d]][idx[d]];
        }
        sup = std::max(sup, std::pow(1.0 + std::sqrt(r2), dict.N_) * std::abs(v));
      }
      semi += sup;
    }
    dict.bumps_.back().seminorm = semi;
    if (!(c.integral_error <= 1e-8) || !(semi <= dict.cap_)) dict.certified_ = false;
  }
  return dict;
}

GridFunction smooth_with(const GridFunction& f, const BumpDictionary& dict, std::size_t k,
                         double t) {
  const Grid& g = f.grid();
  if (g.dim() != dict.dim()) throw Error("grand maximal: dictionary dimension mismatch");
  const std::size_t n = g.dim();
  const double h = g.h();
  // psi_t is a tensor product, so psi_t * f is a sequence of 1-D convolutions
  // with weights h t^{-1} phi(o h / t) per axis.
  const auto reach = static_cast<std::int64_t>(std::ceil(t / h));
  std::vector<double> w(static_cast<std::size_t>(2 * reach + 1));
  for (std::int64_t o = -reach; o <= reach; ++o) {
    w[static_cast<std::size_t>(o + reach)] =
        h / t * dict.factor(k, static_cast<double>(o) * h / t);
  }
  NdArray cur{g.shape(), std::vector<double>(f.values().begin(), f.values().end())};
  for (std::size_t axis = 0; axis < n; ++axis) {
    NdArray next{cur.shape, std::vector<double>(cur.v.size(), 0.0)};
    cur.for_lines(axis, [&](std::size_t base, std::size_t stride, std::size_t len, std::size_t,
                            std::size_t) {
      const auto ilen = static_cast<std::int64_t>(len);
      for (std::int64_t i = 0; i < ilen; ++i) {
        double s = 0.0;
        const std::int64_t j0 = std::max<std::int64_t>(0, i - reach);
        const std::int64_t j1 = std::min<std::int64_t>(ilen - 1, i + reach);
        for (std::int64_t j = j0; j <= j1; ++j) {
          s += w[static_cast<std::size_t>(i - j + reach)] *
               cur.v[base + static_cast<std::size_t>(j) * stride];
        }
        next.v[base + static_cast<std::size_t>(i) * stride] = s;
      }
    });
    cur = std::move(next);
  }
  return GridFunction(g, std::move(cur.v));
}

GridFunction grand_maximal(const GridFunction& f, const BumpDictionary& dict) {
  if (!dict.certified()) throw Error("grand maximal: dictionary is not certified");
  GridFunction out(f.grid());
  for (std::size_t k = 0; k < dict.bumps().size(); ++k) {
    for (double t : dict.scales()) {
      const GridFunction s = smooth_with(f, dict, k, t);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(s[i]));
    }
  }
  return out;
}

double hardy_norm(const GridFunction& f, const ExponentField& p, const BumpDictionary& dict) {
  return luxemburg_norm(grand_maximal(f, dict), p);
}

}  // namespace varexp
