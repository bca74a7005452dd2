#include "varexp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "varexp/error.hpp"

namespace varexp {

namespace {

constexpr double kLatticeTol = 1e-9;

bool near_integer(double v, std::int64_t& out) {
  const double r = std::round(v);
  if (std::abs(v - r) > kLatticeTol * std::max(1.0, std::abs(v))) return false;
  out = static_cast<std::int64_t>(r);
  return true;
}

}  // namespace

Grid::Grid(Point lo, std::vector<std::size_t> shape, double h)
    : lo_(std::move(lo)), shape_(std::move(shape)), h_(h) {
  if (lo_.empty() || lo_.size() != shape_.size()) throw Error("grid: dimension mismatch");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error("grid: cell size must be positive");
  strides_.assign(shape_.size(), 1);
  size_ = 1;
  for (std::size_t d = shape_.size(); d-- > 0;) {
    if (shape_[d] == 0) throw Error("grid: empty axis");
    strides_[d] = size_;
    size_ *= shape_[d];
  }
}

Grid Grid::over_box(const Point& lo, const Point& hi, double h) {
  if (lo.size() != hi.size()) throw Error("grid: box corners differ in dimension");
  std::vector<std::size_t> shape(lo.size());
  for (std::size_t d = 0; d < lo.size(); ++d) {
    std::int64_t cells = 0;
    if (!(hi[d] > lo[d]) || !near_integer((hi[d] - lo[d]) / h, cells) || cells <= 0) {
      std::ostringstream os;
      os << "grid: extent of axis " << d << " is not a positive multiple of h=" << h;
      throw Error(os.str());
    }
    shape[d] = static_cast<std::size_t>(cells);
  }
  return Grid(lo, std::move(shape), h);
}

Point Grid::hi() const {
  Point out(lo_.size());
  for (std::size_t d = 0; d < lo_.size(); ++d) out[d] = lo_[d] + h_ * static_cast<double>(shape_[d]);
  return out;
}

double Grid::cell_volume() const { return std::pow(h_, static_cast<double>(dim())); }

Point Grid::midpoint(std::size_t flat) const {
  Point p(dim());
  for (std::size_t d = 0; d < dim(); ++d) p[d] = midpoint(flat, d);
  return p;
}

double Grid::midpoint(std::size_t flat, std::size_t axis) const {
  const std::size_t i = (flat / strides_[axis]) % shape_[axis];
  return lo_[axis] + (static_cast<double>(i) + 0.5) * h_;
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t d = 0; d < dim(); ++d) idx[d] = (flat / strides_[d]) % shape_[d];
  return idx;
}

std::size_t Grid::flatten(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < dim(); ++d) flat += idx[d] * strides_[d];
  return flat;
}

std::optional<std::size_t> Grid::locate(std::span<const double> x) const {
  if (x.size() != dim()) throw Error("grid: point dimension mismatch");
  std::size_t flat = 0;
  for (std::size_t d = 0; d < dim(); ++d) {
    const double t = (x[d] - lo_[d]) / h_;
    if (t < 0.0 || t > static_cast<double>(shape_[d])) return std::nullopt;
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i == shape_[d]) --i;
    flat += i * strides_[d];
  }
  return flat;
}

std::optional<std::vector<std::int64_t>> Grid::offset_in(const Grid& other) const {
  if (other.dim() != dim()) return std::nullopt;
  if (std::abs(other.h_ - h_) > kLatticeTol * h_) return std::nullopt;
  std::vector<std::int64_t> off(dim());
  for (std::size_t d = 0; d < dim(); ++d) {
    if (!near_integer((lo_[d] - other.lo_[d]) / h_, off[d])) return std::nullopt;
  }
  return off;
}

bool Grid::operator==(const Grid& other) const {
  return lo_ == other.lo_ && shape_ == other.shape_ && h_ == other.h_;
}

GridFunction::GridFunction(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("grid function: value count does not match grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("grid function: non-finite value");
  }
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> vals(grid.size());
  Point x(grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t d = 0; d < grid.dim(); ++d) x[d] = grid.midpoint(i, d);
    vals[i] = fn(x);
  }
  return GridFunction(grid, std::move(vals));
}

double GridFunction::at(std::span<const double> x) const {
  const auto cell = grid_.locate(x);
  return cell ? values_[*cell] : 0.0;
}

double GridFunction::sup_abs() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

GridFunction GridFunction::embedded_in(const Grid& target) const {
  const auto off = grid_.offset_in(target);
  if (!off) throw Error("grid function: target grid is not aligned");
  GridFunction out(target);
  const std::size_t n = grid_.dim();
  std::vector<std::size_t> tidx(n);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (values_[i] == 0.0) continue;
    const auto idx = grid_.unflatten(i);
    bool inside = true;
    for (std::size_t d = 0; d < n; ++d) {
      const std::int64_t t = static_cast<std::int64_t>(idx[d]) + (*off)[d];
      if (t < 0 || t >= static_cast<std::int64_t>(target.shape()[d])) {
        inside = false;
        break;
      }
      tidx[d] = static_cast<std::size_t>(t);
    }
    if (!inside) continue;
    out[target.flatten(tidx)] = values_[i];
  }
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(other.grid_ == grid_)) throw Error("grid function: adding functions on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }

GridFunction operator*(double c, GridFunction f) { return f *= c; }

GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw Error("grid function: product of functions on different grids");
  GridFunction out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double integrate(const GridFunction& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

Cube::Cube(Point center, double side) : center_(std::move(center)), side_(side) {
  if (center_.empty()) throw Error("cube: empty center");
  if (!(side_ > 0.0) || !std::isfinite(side_)) throw Error("cube: side length must be positive");
}

double Cube::volume() const { return std::pow(side_, static_cast<double>(dim())); }

bool Cube::contains(std::span<const double> x) const {
  if (x.size() != dim()) throw Error("cube: point dimension mismatch");
  for (std::size_t d = 0; d < dim(); ++d) {
    if (std::abs(x[d] - center_[d]) > 0.5 * side_) return false;
  }
  return true;
}

Cube dilate(const Cube& q, double kappa) {
  if (!(kappa > 0.0)) throw Error("dilate: factor must be positive");
  return Cube(q.center(), kappa * q.side());
}

double default_dilation(std::size_t n) { return 2.0 * std::sqrt(static_cast<double>(n)); }

Grid cells_within(const Grid& grid, const Cube& q) {
  if (q.dim() != grid.dim()) throw Error("cells_within: dimension mismatch");
  Point lo(grid.dim());
  std::vector<std::size_t> shape(grid.dim());
  for (std::size_t d = 0; d < grid.dim(); ++d) {
    // midpoint index i satisfies lower <= lo + (i + 1/2) h <= upper
    const double a = (q.lower(d) - grid.lo()[d]) / grid.h() - 0.5;
    const double b = (q.upper(d) - grid.lo()[d]) / grid.h() - 0.5;
    auto first = static_cast<std::int64_t>(std::ceil(a - kLatticeTol));
    auto last = static_cast<std::int64_t>(std::floor(b + kLatticeTol));
    first = std::max<std::int64_t>(first, 0);
    last = std::min<std::int64_t>(last, static_cast<std::int64_t>(grid.shape()[d]) - 1);
    if (last < first) throw Error("cells_within: cube contains no grid cells");
    lo[d] = grid.lo()[d] + static_cast<double>(first) * grid.h();
    shape[d] = static_cast<std::size_t>(last - first + 1);
  }
  return Grid(std::move(lo), std::move(shape), grid.h());
}

GridFunction indicator(const Grid& grid, const Cube& q) {
  const Grid sub = cells_within(grid, q);
  GridFunction local(sub, std::vector<double>(sub.size(), 1.0));
  return local.embedded_in(grid);
}

RegionEA::RegionEA(std::vector<Cube> cubes, std::vector<std::size_t> subset, double kappa)
    : cubes_(std::move(cubes)), subset_(std::move(subset)), kappa_(kappa) {
  if (subset_.empty()) throw Error("region_EA: index set A must be nonempty");
  in_subset_.assign(cubes_.size(), false);
  for (std::size_t j : subset_) {
    if (j >= cubes_.size()) throw Error("region_EA: index outside the cube family");
    in_subset_[j] = true;
  }
  std::sort(subset_.begin(), subset_.end());
  subset_.erase(std::unique(subset_.begin(), subset_.end()), subset_.end());
  dilated_.reserve(cubes_.size());
  for (const auto& q : cubes_) dilated_.push_back(dilate(q, kappa_));
}

bool RegionEA::contains(std::span<const double> x) const { return !violation(x).has_value(); }

std::optional<std::string> RegionEA::violation(std::span<const double> x) const {
  for (std::size_t j = 0; j < dilated_.size(); ++j) {
    const bool inside = dilated_[j].contains(x);
    if (in_subset_[j] && inside) {
      return "point lies inside Q*_" + std::to_string(j + 1) + " but " + std::to_string(j + 1) +
             " is in A";
    }
    if (!in_subset_[j] && !inside) {
      return "point lies outside Q*_" + std::to_string(j + 1) + " but " + std::to_string(j + 1) +
             " is not in A";
    }
  }
  return std::nullopt;
}

RegionEA region_EA(std::vector<Cube> cubes, std::vector<std::size_t> subset, double kappa) {
  return RegionEA(std::move(cubes), std::move(subset), kappa);
}

std::optional<std::vector<std::size_t>> classify_EA(std::span<const double> x,
                                                    std::span<const Cube> cubes,
                                                    double kappa) {
  std::vector<std::size_t> a;
  for (std::size_t j = 0; j < cubes.size(); ++j) {
    if (!dilate(cubes[j], kappa).contains(x)) a.push_back(j);
  }
  if (a.empty()) return std::nullopt;
  return a;
}

}  // namespace varexp
