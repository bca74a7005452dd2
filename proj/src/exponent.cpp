#include "varexp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

namespace {

void check_exponent_value(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "exponent field: " << what << " must lie in (0, inf), got " << v;
    throw Error(os.str());
  }
}

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

ExponentField::ExponentField(Point lo, Point hi, std::vector<std::size_t> shape,
                             std::vector<double> samples, double p_inf)
    : lo_(std::move(lo)), hi_(std::move(hi)), shape_(std::move(shape)),
      samples_(std::move(samples)), p_inf_(p_inf) {
  if (lo_.empty() || lo_.size() != hi_.size() || lo_.size() != shape_.size()) {
    throw Error("exponent field: box and shape dimensions differ");
  }
  strides_.assign(shape_.size(), 1);
  std::size_t total = 1;
  for (std::size_t d = shape_.size(); d-- > 0;) {
    if (shape_[d] == 0) throw Error("exponent field: empty axis");
    if (shape_[d] > 1 && !(hi_[d] > lo_[d])) throw Error("exponent field: degenerate box");
    strides_[d] = total;
    total *= shape_[d];
  }
  if (samples_.size() != total) throw Error("exponent field: sample count does not match shape");
  for (double v : samples_) check_exponent_value(v, "sample");
  check_exponent_value(p_inf_, "tail value");
}

ExponentField ExponentField::constant(std::size_t n, double value) {
  return ExponentField(Point(n, 0.0), Point(n, 0.0), std::vector<std::size_t>(n, 1), {value},
                       value);
}

ExponentField ExponentField::constant_like(const ExponentField& layout, double value) {
  return ExponentField(layout.lo_, layout.hi_, layout.shape_,
                       std::vector<double>(layout.samples_.size(), value), value);
}

ExponentField ExponentField::from_function(
    const Point& lo, const Point& hi, std::vector<std::size_t> shape,
    const std::function<double(std::span<const double>)>& fn, double p_inf) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  const ExponentField layout(lo, hi, shape, std::vector<double>(total, p_inf), p_inf);
  std::vector<double> samples(layout.num_samples());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = fn(layout.node(i));
  return ExponentField(lo, hi, std::move(shape), std::move(samples), p_inf);
}

Point ExponentField::node(std::size_t flat) const {
  Point x(dim());
  for (std::size_t d = 0; d < dim(); ++d) {
    const std::size_t i = (flat / strides_[d]) % shape_[d];
    x[d] = shape_[d] == 1 ? lo_[d]
                          : lo_[d] + (hi_[d] - lo_[d]) * static_cast<double>(i) /
                                         static_cast<double>(shape_[d] - 1);
  }
  return x;
}

bool ExponentField::in_box(std::span<const double> x) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    if (x[d] < lo_[d] || x[d] > hi_[d]) return false;
  }
  return true;
}

double ExponentField::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw Error("exponent field: point dimension mismatch");
  if (!in_box(x)) return p_inf_;
  // Multilinear interpolation: accumulate over the 2^k corners of the active axes.
  std::size_t base = 0;
  std::vector<std::size_t> active;
  std::vector<double> frac;
  for (std::size_t d = 0; d < dim(); ++d) {
    if (shape_[d] == 1) continue;
    const double t = (x[d] - lo_[d]) / (hi_[d] - lo_[d]) * static_cast<double>(shape_[d] - 1);
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= shape_[d] - 1) i = shape_[d] - 2;
    base += i * strides_[d];
    active.push_back(d);
    frac.push_back(t - static_cast<double>(i));
  }
  const std::size_t corners = std::size_t{1} << active.size();
  double acc = 0.0;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t idx = base;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (c & (std::size_t{1} << k)) {
        w *= frac[k];
        idx += strides_[active[k]];
      } else {
        w *= 1.0 - frac[k];
      }
    }
    if (w != 0.0) acc += w * samples_[idx];
  }
  return acc;
}

std::vector<double> ExponentField::sample_cells(const Grid& grid) const {
  if (grid.dim() != dim()) throw Error("exponent field: grid dimension mismatch");
  std::vector<double> out(grid.size());
  Point x(dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t d = 0; d < dim(); ++d) x[d] = grid.midpoint(i, d);
    out[i] = (*this)(x);
  }
  return out;
}

double ExponentField::p_minus() const {
  return std::min(p_inf_, *std::min_element(samples_.begin(), samples_.end()));
}

double ExponentField::p_plus() const {
  return std::max(p_inf_, *std::max_element(samples_.begin(), samples_.end()));
}

bool ExponentField::same_layout(const ExponentField& other) const {
  return lo_ == other.lo_ && hi_ == other.hi_ && shape_ == other.shape_;
}

std::pair<double, double> inf_sup(const ExponentField& p, const Region& e) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  switch (e.kind) {
    case Region::Kind::whole:
      return {p.p_minus(), p.p_plus()};
    case Region::Kind::tail:
      take(p.p_inf());
      break;
    case Region::Kind::box: {
      if (e.lo.size() != p.dim() || e.hi.size() != p.dim()) {
        throw Error("inf_sup: region dimension mismatch");
      }
      bool meets_tail = false;
      bool empty_box = false;
      for (std::size_t d = 0; d < p.dim(); ++d) {
        if (e.hi[d] < e.lo[d]) empty_box = true;
        if (e.lo[d] < p.lo()[d] || e.hi[d] > p.hi()[d]) meets_tail = true;
      }
      if (empty_box) throw Error("empty region");
      for (std::size_t i = 0; i < p.num_samples(); ++i) {
        const Point x = p.node(i);
        bool inside = true;
        for (std::size_t d = 0; d < p.dim(); ++d) {
          if (x[d] < e.lo[d] || x[d] > e.hi[d]) inside = false;
        }
        if (inside) take(p.samples()[i]);
      }
      if (meets_tail) take(p.p_inf());
      break;
    }
  }
  if (!(lo <= hi)) throw Error("empty region");
  return {lo, hi};
}

LHReport check_log_holder(const ExponentField& p, double threshold) {
  const std::size_t count = p.num_samples();
  std::vector<Point> nodes(count);
  std::vector<double> radius(count);
  for (std::size_t i = 0; i < count; ++i) {
    nodes[i] = p.node(i);
    radius[i] = euclid(nodes[i]);
  }
  const auto& v = p.samples();
  const std::size_t n = p.dim();
  LHReport rep;
  rep.threshold = threshold;
  for (std::size_t i = 0; i < count; ++i) {
    // Tail points y with |y| >= |x_i| always exist.
    const double decay_i = std::log(radius[i]) + std::numbers::e;
    const double tail_diff = std::abs(v[i] - p.p_inf());
    if (tail_diff > 0.0 && decay_i > 0.0) rep.c_decay = std::max(rep.c_decay, tail_diff * decay_i);
    for (std::size_t j = i + 1; j < count; ++j) {
      const double diff = std::abs(v[i] - v[j]);
      if (diff == 0.0) continue;
      double dist2 = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const double t = nodes[i][d] - nodes[j][d];
        dist2 += t * t;
      }
      const double dist = std::sqrt(dist2);
      if (dist > 0.0 && dist <= 0.5) rep.c_local = std::max(rep.c_local, -diff * std::log(dist));
      // The pair (x, y) with |y| >= |x| uses the smaller radius in the weight.
      const double r = std::min(radius[i], radius[j]);
      const double w = std::log(r) + std::numbers::e;
      if (w > 0.0) rep.c_decay = std::max(rep.c_decay, diff * w);
    }
  }
  rep.pass = std::isfinite(rep.c_local) && std::isfinite(rep.c_decay) &&
             rep.c_local <= threshold && rep.c_decay <= threshold;
  return rep;
}

LHClassification classify_log_holder(std::span<const LHReport> refinements, double growth) {
  LHClassification out;
  bool all_pass = true;
  for (const auto& r : refinements) {
    out.c_local.push_back(r.c_local);
    all_pass = all_pass && r.pass;
  }
  if (refinements.size() >= 2) {
    out.diverging = true;
    for (std::size_t i = 1; i < refinements.size(); ++i) {
      const double prev = refinements[i - 1].c_local;
      const double cur = refinements[i].c_local;
      if (!(prev > 0.0) || cur < growth * prev) out.diverging = false;
    }
  }
  out.pass = all_pass && !out.diverging;
  return out;
}

ExponentField holder_scale(std::span<const ExponentField> ps, double alpha, std::size_t n) {
  if (ps.empty()) throw Error("holder_scale: no exponents given");
  if (n == 0) throw Error("holder_scale: dimension must be positive");
  for (const auto& p : ps) {
    if (!p.same_layout(ps[0])) throw Error("holder_scale: exponents must share grid and box");
  }
  const double shift = alpha / static_cast<double>(n);
  auto invert = [&](double recip, const std::string& where) {
    if (!(recip > 0.0)) {
      std::ostringstream os;
      os << "scaling violates P0 at " << where << " (1/q = " << recip << ")";
      throw Error(os.str());
    }
    return 1.0 / recip;
  };
  std::vector<double> samples(ps[0].num_samples());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double recip = -shift;
    for (const auto& p : ps) recip += 1.0 / p.samples()[i];
    std::ostringstream where;
    where << "sample " << i << " x=(";
    const Point x = ps[0].node(i);
    for (std::size_t d = 0; d < x.size(); ++d) where << (d ? "," : "") << x[d];
    where << ")";
    samples[i] = invert(recip, where.str());
  }
  double tail = -shift;
  for (const auto& p : ps) tail += 1.0 / p.p_inf();
  const double q_inf = invert(tail, "tail");
  return ExponentField(ps[0].lo(), ps[0].hi(), ps[0].shape(), std::move(samples), q_inf);
}

int atom_degree(double p_minus, std::size_t n) {
  const double pm = std::min(p_minus, 1.0);
  const double nd = static_cast<double>(n);
  const double v = std::floor(nd / pm - nd + 1e-12);
  return std::max(static_cast<int>(v), -1);
}

int atom_degree(const ExponentField& p, std::size_t n) { return atom_degree(p.p_minus(), n); }

ExponentField conjugate(const ExponentField& p) {
  if (!(p.p_minus() > 1.0)) throw Error("conjugate undefined outside P");
  std::vector<double> samples(p.num_samples());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = p.samples()[i];
    samples[i] = v / (v - 1.0);
  }
  const double t = p.p_inf();
  return ExponentField(p.lo(), p.hi(), p.shape(), std::move(samples), t / (t - 1.0));
}

}  // namespace varexp
