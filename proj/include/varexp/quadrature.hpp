#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace varexp {

enum class KernelForm {
  euclidean,     // |(y_1, ..., y_m)|^{alpha - mn}
  sum_of_norms,  // (|y_1| + ... + |y_m|)^{alpha - mn}
};

/// Dimensionless kernel shape: m blocks of n coordinates, homogeneous of degree alpha - mn.
struct KernelShape {
  std::size_t m = 1;
  std::size_t n = 1;
  double alpha = 0.5;
  KernelForm form = KernelForm::euclidean;

  std::size_t dim() const { return m * n; }
  double gamma() const { return static_cast<double>(dim()) - alpha; }
  double operator()(std::span<const double> u) const;
};

/// Integral of the kernel over the box [lo, hi] in R^{mn}, exact up to the
/// Gauss-Legendre error of smooth face integrals.
///
/// Uses G(c) = integral over the signed box between 0 and c, assembled over the
/// box corners by inclusion-exclusion. For positive c, homogeneity gives
/// G(c) = (1/alpha) sum_d c_d * (integral of F over the face u_d = c_d).
double box_integral(const KernelShape& k, std::span<const double> lo, std::span<const double> hi);

/// Signed corner integral G(c).
double corner_integral(const KernelShape& k, std::span<const double> c);

/// Near-field radius (in cells) used by the product quadrature for dimension D.
std::size_t near_radius(std::size_t dim);

/// Box integrals over [k + phi - 1, k + phi] for all k in (-R, R]^D, row-major
/// with k_d + R - 1 as the index along axis d.
std::vector<double> near_field_table(const KernelShape& k, std::span<const double> phi,
                                     std::size_t radius);

}  // namespace varexp
