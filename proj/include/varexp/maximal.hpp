#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/report.hpp"

namespace varexp {

/// Window family for M_alpha: cube sidelengths (rounded to whole cells) and
/// whether cubes are centred at the evaluation cell or merely contain it.
struct MaximalConfig {
  double alpha = 0.0;
  std::vector<double> scales;
  bool centered = false;

  /// Sidelengths h, 2h, 4h, ... up to the first power of two covering the box.
  static MaximalConfig dyadic(const Grid& grid, double alpha, bool centered = false);
  void validate(std::size_t n) const;
};

/// M_alpha f at every cell: max over admissible cubes Q of |Q|^{alpha/n - 1} int_Q |f|.
/// Cubes may stick out of the grid box; f is zero there.
GridFunction frac_maximal(const GridFunction& f, const MaximalConfig& cfg);

/// max over x in xs of r^n (r + |x-y|)^{alpha-n} / M_alpha chi_{Q(y,r)}(x), where
/// Q(y,r) has centre y and side r and M_alpha is computed on a grid of cell size h.
InequalityReport claim_check(const Point& y, double r, double alpha, std::span<const Point> xs,
                             double h);

/// || ||{M_alpha f_i}||_{l^lq} ||_{q} against || ||{f_i}||_{l^lq} ||_{p}, 1/q = 1/p - alpha/n.
InequalityReport vector_fs_check(std::span<const GridFunction> fs, const ExponentField& p,
                                 double alpha, double lq);
InequalityReport vector_fs_check(std::span<const GridFunction> fs, const ExponentField& p,
                                 double lq, const MaximalConfig& cfg);

struct BumpCertificate {
  int power = 0;              // psi = c prod (1 - z_d^2)^power on [-1,1]^n
  double normalizer = 0.0;    // c
  double integral_error = 0.0;
  double seminorm = 0.0;      // sum_{|beta|<=N} sup (1+|x|)^N |d^beta psi|
};

/// A finite certified family of smooth compact bumps and dyadic scales t.
///
/// Each bump integrates to 1 within 1e-8. The weighted seminorm is evaluated by
/// finite differences and checked against `seminorm_cap` (integrating to 1 and a
/// seminorm at most 1 cannot hold together, so the cap is a configuration value).
class BumpDictionary {
 public:
  struct Options {
    int degree = 0;              // d; N = n + d + 2
    std::size_t count = 3;       // bumps with powers N+1 .. N+count
    double seminorm_cap = 1e6;
    double t_min = 0.0;          // 0: twice the grid cell
    double t_max = 0.0;          // 0: largest box extent
  };

  static BumpDictionary make(const Grid& grid, const Options& opt);
  static BumpDictionary make(const Grid& grid) { return make(grid, Options{}); }

  std::size_t dim() const { return n_; }
  int order() const { return N_; }
  double seminorm_cap() const { return cap_; }
  bool certified() const { return certified_; }
  const std::vector<BumpCertificate>& bumps() const { return bumps_; }
  const std::vector<double>& scales() const { return scales_; }

  /// psi_k at a point of the reference cube.
  double psi(std::size_t k, std::span<const double> x) const;
  /// One-dimensional factor c^{1/n} (1 - z^2)^power.
  double factor(std::size_t k, double z) const;

 private:
  std::size_t n_ = 1;
  int N_ = 3;
  double cap_ = 1e6;
  bool certified_ = false;
  std::vector<BumpCertificate> bumps_;
  std::vector<double> scales_;
};

/// psi_t * f on f's grid for one dictionary member and scale (grid summation).
GridFunction smooth_with(const GridFunction& f, const BumpDictionary& dict, std::size_t k,
                         double t);

/// max over dictionary members and scales of |psi_t * f|.
GridFunction grand_maximal(const GridFunction& f, const BumpDictionary& dict);

/// Luxemburg norm of grand_maximal(f); a lower-bound proxy for the Hardy norm.
double hardy_norm(const GridFunction& f, const ExponentField& p, const BumpDictionary& dict);

}  // namespace varexp
