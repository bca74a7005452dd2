#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "varexp/grid.hpp"

namespace varexp {

/// A variable exponent p(.) given by node samples on a box plus a constant tail.
///
/// Nodes form a uniform lattice over [lo, hi] with `shape[d]` nodes on axis d
/// (a single node means p is constant along that axis). Inside the box p is the
/// multilinear interpolant of the nodes; outside it equals p_inf.
class ExponentField {
 public:
  ExponentField() = default;
  ExponentField(Point lo, Point hi, std::vector<std::size_t> shape, std::vector<double> samples,
                double p_inf);

  static ExponentField constant(std::size_t n, double value);
  /// Constant field sharing the node layout of `layout`.
  static ExponentField constant_like(const ExponentField& layout, double value);
  static ExponentField from_function(const Point& lo, const Point& hi,
                                     std::vector<std::size_t> shape,
                                     const std::function<double(std::span<const double>)>& fn,
                                     double p_inf);

  std::size_t dim() const { return lo_.size(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& samples() const { return samples_; }
  double p_inf() const { return p_inf_; }
  std::size_t num_samples() const { return samples_.size(); }

  Point node(std::size_t flat) const;
  bool in_box(std::span<const double> x) const;
  double operator()(std::span<const double> x) const;

  /// p evaluated at every cell midpoint of `grid`.
  std::vector<double> sample_cells(const Grid& grid) const;

  /// Global inf/sup over samples and tail.
  double p_minus() const;
  double p_plus() const;

  bool same_layout(const ExponentField& other) const;

 private:
  Point lo_, hi_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::vector<double> samples_;
  double p_inf_ = 2.0;
};

struct Region {
  enum class Kind { whole, box, tail };
  Kind kind = Kind::whole;
  Point lo, hi;

  static Region whole_space() { return {Kind::whole, {}, {}}; }
  static Region tail_only() { return {Kind::tail, {}, {}}; }
  static Region box(Point lo, Point hi) { return {Kind::box, std::move(lo), std::move(hi)}; }
};

/// (p^-(E), p^+(E)) over samples in E, plus p_inf when E meets the tail.
std::pair<double, double> inf_sup(const ExponentField& p, const Region& e);

struct LHReport {
  double c_local = 0.0;
  double c_decay = 0.0;
  double threshold = 100.0;
  bool pass = true;
};

/// Exhaustive pair scan of both log-Hoelder inequalities over the samples.
LHReport check_log_holder(const ExponentField& p, double threshold = 100.0);

struct LHClassification {
  bool pass = true;       // every report passes and C_local does not diverge
  bool diverging = false; // C_local grows by at least `growth` at each refinement
  std::vector<double> c_local;
};

/// Classifies a sequence of reports computed at successive grid refinements.
LHClassification classify_log_holder(std::span<const LHReport> refinements, double growth = 2.0);

/// q with 1/q = sum 1/p_i - alpha/n at every sample and at the tail.
ExponentField holder_scale(std::span<const ExponentField> ps, double alpha, std::size_t n);

/// d_{p(.)} = max(floor(n/p_- - n), -1) with p_- = min(p^-, 1).
int atom_degree(const ExponentField& p, std::size_t n);
int atom_degree(double p_minus, std::size_t n);

/// p' with 1/p + 1/p' = 1.
ExponentField conjugate(const ExponentField& p);

}  // namespace varexp
