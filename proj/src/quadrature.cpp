#include "varexp/quadrature.hpp"

#include <array>
#include <cmath>

#include "varexp/error.hpp"

namespace varexp {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGLx = {-0.9602898564975363, -0.7966664774136267,
                                        -0.5255324099163290, -0.1834346424956498,
                                        0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLw = {0.1012285362903763, 0.2223810344533745,
                                        0.3137066375431224, 0.3626837833783620,
                                        0.3626837833783620, 0.3137066375431224,
                                        0.2223810344533745, 0.1012285362903763};

struct Nodes {
  std::vector<double> x, w;
};

// Nodes on [0, b] graded geometrically away from 0 with base scale s.
Nodes graded_nodes(double s, double b) {
  Nodes out;
  auto panel = [&](double a, double c) {
    const double mid = 0.5 * (a + c), half = 0.5 * (c - a);
    for (std::size_t i = 0; i < kGLx.size(); ++i) {
      out.x.push_back(mid + half * kGLx[i]);
      out.w.push_back(half * kGLw[i]);
    }
  };
  double a = 0.0, c = std::min(s, b);
  panel(a, c);
  while (c < b) {
    a = c;
    c = std::min(2.0 * c, b);
    panel(a, c);
  }
  return out;
}

// Integral of F over the face {u_d = c_d, 0 <= u_e <= c_e (e != d)}.
double face_integral(const KernelShape& k, std::span<const double> c, std::size_t d) {
  const std::size_t D = c.size();
  std::vector<Nodes> axes;
  std::vector<std::size_t> free;
  for (std::size_t e = 0; e < D; ++e) {
    if (e == d) continue;
    free.push_back(e);
    axes.push_back(graded_nodes(c[d], c[e]));
  }
  std::vector<double> u(D, 0.0);
  u[d] = c[d];
  if (free.empty()) return k(u);
  std::vector<std::size_t> idx(free.size(), 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < free.size(); ++a) {
      u[free[a]] = axes[a].x[idx[a]];
      w *= axes[a].w[idx[a]];
    }
    total += w * k(u);
    std::size_t a = 0;
    while (a < free.size() && ++idx[a] == axes[a].x.size()) {
      idx[a] = 0;
      ++a;
    }
    if (a == free.size()) break;
  }
  return total;
}

}  // namespace

double KernelShape::operator()(std::span<const double> u) const {
  const double g = gamma();
  if (form == KernelForm::euclidean) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::pow(s, -0.5 * g);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += u[i * n + a] * u[i * n + a];
    total += std::sqrt(s);
  }
  return std::pow(total, -g);
}

double corner_integral(const KernelShape& k, std::span<const double> c) {
  double sign = 1.0;
  std::vector<double> a(c.size());
  for (std::size_t d = 0; d < c.size(); ++d) {
    if (c[d] == 0.0) return 0.0;
    sign *= c[d] < 0.0 ? -1.0 : 1.0;
    a[d] = std::abs(c[d]);
  }
  double h = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) h += a[d] * face_integral(k, a, d);
  return sign * h / k.alpha;
}

double box_integral(const KernelShape& k, std::span<const double> lo, std::span<const double> hi) {
  const std::size_t D = lo.size();
  if (D != k.dim() || hi.size() != D) throw Error("box_integral: dimension mismatch");
  std::vector<double> c(D);
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << D); ++mask) {
    int lows = 0;
    for (std::size_t d = 0; d < D; ++d) {
      const bool upper = mask & (std::size_t{1} << d);
      c[d] = upper ? hi[d] : lo[d];
      if (!upper) ++lows;
    }
    total += (lows % 2 == 0 ? 1.0 : -1.0) * corner_integral(k, c);
  }
  return total;
}

std::size_t near_radius(std::size_t dim) {
  if (dim <= 2) return 3;
  if (dim == 3) return 2;
  return 1;
}

std::vector<double> near_field_table(const KernelShape& k, std::span<const double> phi,
                                     std::size_t radius) {
  const std::size_t D = phi.size();
  if (D != k.dim()) throw Error("near_field_table: dimension mismatch");
  const auto R = static_cast<std::int64_t>(radius);
  const std::size_t corners1 = 2 * radius + 1;  // corner values e + phi - 1, e in [-R+1, R+1]
  std::size_t ncorners = 1;
  for (std::size_t d = 0; d < D; ++d) ncorners *= corners1;
  std::vector<double> g(ncorners);
  std::vector<double> c(D);
  for (std::size_t t = 0; t < ncorners; ++t) {
    std::size_t rem = t;
    for (std::size_t d = D; d-- > 0;) {
      const auto e = static_cast<std::int64_t>(rem % corners1) - R + 1;
      rem /= corners1;
      c[d] = static_cast<double>(e) + phi[d] - 1.0;
    }
    g[t] = corner_integral(k, c);
  }
  const std::size_t boxes1 = 2 * radius;
  std::size_t nboxes = 1;
  for (std::size_t d = 0; d < D; ++d) nboxes *= boxes1;
  std::vector<double> table(nboxes);
  std::vector<std::size_t> kidx(D);
  for (std::size_t t = 0; t < nboxes; ++t) {
    std::size_t rem = t;
    for (std::size_t d = D; d-- > 0;) {
      kidx[d] = rem % boxes1;
      rem /= boxes1;
    }
    double total = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << D); ++mask) {
      std::size_t flat = 0;
      int lows = 0;
      for (std::size_t d = 0; d < D; ++d) {
        const bool upper = mask & (std::size_t{1} << d);
        if (!upper) ++lows;
        flat = flat * corners1 + kidx[d] + (upper ? 1 : 0);
      }
      total += (lows % 2 == 0 ? 1.0 : -1.0) * g[flat];
    }
    table[t] = total;
  }
  return table;
}

}  // namespace varexp
