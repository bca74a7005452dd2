#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varexp {

using Point = std::vector<double>;

/// Uniform cell-centred grid over an axis-aligned box.
///
/// Cells are cubes of side h. The flat index is row-major (last axis fastest).
/// Two grids are *aligned* when they share h and their lower corners differ by
/// an integer number of cells; aligned grids can exchange values cell by cell.
class Grid {
 public:
  Grid() = default;
  Grid(Point lo, std::vector<std::size_t> shape, double h);

  /// Grid covering [lo, hi] exactly; every extent must be a multiple of h.
  static Grid over_box(const Point& lo, const Point& hi, double h);

  std::size_t dim() const { return lo_.size(); }
  std::size_t size() const { return size_; }
  double h() const { return h_; }
  const Point& lo() const { return lo_; }
  Point hi() const;
  const std::vector<std::size_t>& shape() const { return shape_; }
  double cell_volume() const;
  double volume() const { return cell_volume() * static_cast<double>(size_); }

  Point midpoint(std::size_t flat) const;
  double midpoint(std::size_t flat, std::size_t axis) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> idx) const;
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  /// Cell containing x (half-open cells; the upper box face belongs to the last cell).
  std::optional<std::size_t> locate(std::span<const double> x) const;

  /// Integer cell offset of this grid's origin inside `other`'s lattice, if aligned.
  std::optional<std::vector<std::int64_t>> offset_in(const Grid& other) const;
  bool aligned_with(const Grid& other) const { return offset_in(other).has_value(); }

  bool operator==(const Grid& other) const;

 private:
  Point lo_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  double h_ = 0.0;
  std::size_t size_ = 0;
};

/// Real function sampled at cell midpoints of a Grid; zero outside the box.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(Grid grid);
  GridFunction(Grid grid, std::vector<double> values);

  static GridFunction sample(const Grid& grid,
                             const std::function<double(std::span<const double>)>& fn);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Piecewise-constant evaluation; 0 outside the grid box.
  double at(std::span<const double> x) const;
  double sup_abs() const;

  /// Copy onto an aligned grid; cells outside this function's box become 0.
  GridFunction embedded_in(const Grid& target) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator*=(double c);

 private:
  Grid grid_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator*(double c, GridFunction f);
/// Pointwise product of functions on the same grid.
GridFunction pointwise_product(const GridFunction& a, const GridFunction& b);

/// Midpoint-rule integral h^n * sum(values).
double integrate(const GridFunction& f);

/// Closed axis-aligned cube.
class Cube {
 public:
  Cube() = default;
  Cube(Point center, double side);

  std::size_t dim() const { return center_.size(); }
  const Point& center() const { return center_; }
  double side() const { return side_; }
  double lower(std::size_t axis) const { return center_[axis] - 0.5 * side_; }
  double upper(std::size_t axis) const { return center_[axis] + 0.5 * side_; }
  double volume() const;
  bool contains(std::span<const double> x) const;

  bool operator==(const Cube& other) const = default;

 private:
  Point center_;
  double side_ = 0.0;
};

Cube dilate(const Cube& q, double kappa);

/// Dilation factor for Q*: 2*sqrt(n).
double default_dilation(std::size_t n);

/// Aligned sub-grid made of the cells of `grid` whose midpoints lie in q.
Grid cells_within(const Grid& grid, const Cube& q);

/// chi_Q discretised on `grid` (cells whose midpoints lie in q).
GridFunction indicator(const Grid& grid, const Cube& q);

/// Membership predicate for E_A: outside Q*_j for j in A, inside Q*_j otherwise.
class RegionEA {
 public:
  RegionEA(std::vector<Cube> cubes, std::vector<std::size_t> subset, double kappa);

  bool contains(std::span<const double> x) const;
  /// Human-readable reason x is not in the region, or nullopt if it is.
  std::optional<std::string> violation(std::span<const double> x) const;

  const std::vector<Cube>& cubes() const { return cubes_; }
  const std::vector<std::size_t>& subset() const { return subset_; }
  double kappa() const { return kappa_; }

 private:
  std::vector<Cube> cubes_;
  std::vector<Cube> dilated_;
  std::vector<std::size_t> subset_;
  std::vector<bool> in_subset_;
  double kappa_;
};

RegionEA region_EA(std::vector<Cube> cubes, std::vector<std::size_t> subset, double kappa);

/// The unique A with x in E_A, or nullopt when x lies in every Q*_j.
std::optional<std::vector<std::size_t>> classify_EA(std::span<const double> x,
                                                    std::span<const Cube> cubes,
                                                    double kappa);

}  // namespace varexp
