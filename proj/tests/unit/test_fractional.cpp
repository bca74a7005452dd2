#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "varexp/error.hpp"
#include "varexp/fractional.hpp"
#include "varexp/norms.hpp"
#include "varexp/sampling.hpp"

using namespace varexp;

namespace {

GridFunction unit_indicator(double h) {
  const Grid g = Grid::over_box({0.0}, {1.0}, h);
  return GridFunction(g, std::vector<double>(g.size(), 1.0));
}

}  // namespace

TEST_SUITE("fractional") {

TEST_CASE("kernel values") {
  const KernelParams k1{1, 1, 0.5};
  const double y[1] = {2.0};
  CHECK(kernel(y, k1) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(kernel(y, KernelParams{1, 1, 1.0}), Error);
  CHECK_THROWS_AS(kernel(y, KernelParams{1, 1, 0.0}), Error);
}

TEST_CASE("kernel is rotation invariant and homogeneous") {
  const KernelParams k{2, 1, 0.7};
  Rng rng(71);
  for (int t = 0; t < 100; ++t) {
    const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
    const double th = uniform(rng, 0, 2 * std::numbers::pi);
    const double y[2] = {a, b};
    const double r[2] = {std::cos(th) * a - std::sin(th) * b, std::sin(th) * a + std::cos(th) * b};
    CHECK(kernel(r, k) == doctest::Approx(kernel(y, k)).epsilon(1e-12));
    const double s = uniform(rng, 0.1, 10.0);
    const double ys[2] = {s * a, s * b};
    CHECK(kernel(ys, k) == doctest::Approx(std::pow(s, k.alpha - 2.0) * kernel(y, k)).epsilon(1e-12));
  }
}

TEST_CASE("box integrals agree with closed forms in one dimension") {
  const KernelShape k{1, 1, 0.5, KernelForm::euclidean};
  for (auto [lo, hi] : {std::pair{0.5, 2.0}, std::pair{-1.0, 3.0}, std::pair{-2.0, -0.25}}) {
    const double l[1] = {lo}, h[1] = {hi};
    CHECK(box_integral(k, l, h) ==
          doctest::Approx(oracle::riesz_interval(0.0, 0.5, lo, hi)).epsilon(1e-10));
  }
}

TEST_CASE("I_alpha of zero is zero") {
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 64.0);
  const GridFunction f[1] = {GridFunction(g)};
  const std::vector<Point> xs = {{0.5}, {3.0}};
  for (double v : apply_Ialpha(f, KernelParams{1, 1, 0.5}, xs)) CHECK(v == 0.0);
}

TEST_CASE("Riesz potential of the unit interval at x = 1/2") {
  const GridFunction f[1] = {unit_indicator(1.0 / 512.0)};
  const double v = apply_Ialpha_at(f, KernelParams{1, 1, 0.5}, {0.5});
  CHECK(std::abs(v - 2.0 * std::sqrt(2.0)) <= 0.02 * 2.0 * std::sqrt(2.0));
  const double far = apply_Ialpha_at(f, KernelParams{1, 1, 0.5}, {3.0});
  CHECK(far == doctest::Approx(oracle::riesz_interval(3.0, 0.5, 0.0, 1.0)).epsilon(1e-3));
}

TEST_CASE("skip_cell converges more slowly than product integration") {
  const GridFunction f[1] = {unit_indicator(1.0 / 256.0)};
  const double exact = 2.0 * std::sqrt(2.0);
  QuadratureOptions skip;
  skip.policy = SingularPolicy::skip_cell;
  const double e_prod = std::abs(apply_Ialpha_at(f, KernelParams{1, 1, 0.5}, {0.5}) - exact);
  const double e_skip = std::abs(apply_Ialpha_at(f, KernelParams{1, 1, 0.5}, {0.5}, skip) - exact);
  CHECK(e_prod < e_skip);
}

TEST_CASE("bilinear potential of chi x chi against the polar oracle") {
  const double alpha = 1.0;
  const GridFunction f = unit_indicator(1.0 / 128.0);
  const GridFunction fs[2] = {f, f};
  const double v = apply_Ialpha_at(fs, KernelParams{2, 1, alpha}, {0.5});
  const double ref = oracle::bilinear_riesz_square(alpha, 0.5);
  CHECK(std::abs(v - ref) <= 0.02 * ref);
}

TEST_CASE("commutator with constant b vanishes") {
  const GridFunction f = unit_indicator(1.0 / 64.0);
  const Grid bg = Grid::over_box({-2.0}, {3.0}, 1.0 / 64.0);
  const GridFunction b(bg, std::vector<double>(bg.size(), 0.75));
  const GridFunction fs[2] = {f, f};
  const std::vector<Point> xs = {{0.5}, {1.7}, {-1.0}};
  for (double v : apply_commutator(b, fs, 0, KernelParams{2, 1, 0.8}, xs)) {
    CHECK(std::abs(v) <= 1e-12);
  }
}

TEST_CASE("commutator integral form matches its definition") {
  Rng rng(73);
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 64.0);
  const Grid bg = Grid::over_box({-1.0}, {2.0}, 1.0 / 64.0);
  const GridFunction b = random_piecewise(bg, 4, rng);
  const GridFunction fs[2] = {random_piecewise(g, 4, rng), random_piecewise(g, 4, rng)};
  const std::vector<Point> xs = {{0.3}, {1.5}, {-0.5}};
  for (std::size_t j = 0; j < 2; ++j) {
    const auto a = apply_commutator(b, fs, j, KernelParams{2, 1, 0.9}, xs);
    const auto d = commutator_by_definition(b, fs, j, KernelParams{2, 1, 0.9}, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(std::abs(a[i] - d[i]) <= 1e-10 * std::max(1.0, std::abs(d[i])));
    }
  }
}

TEST_CASE("commutator with b = x against the closed form") {
  const double alpha = 0.5;
  const double h = 1.0 / 1024.0;
  const GridFunction f[1] = {unit_indicator(h)};
  const GridFunction b =
      GridFunction::sample(Grid::over_box({-1.0}, {3.0}, h), [](std::span<const double> x) { return x[0]; });
  const std::vector<Point> xs = {{2.0 + 0.5 * h}};
  const double v = apply_commutator(b, f, 0, KernelParams{1, 1, alpha}, xs)[0];
  const double ref = (std::pow(2.0, alpha + 1.0) - 1.0) / (alpha + 1.0);
  CHECK(std::abs(std::abs(v) - ref) <= 0.02 * ref);
}

TEST_CASE("I_alpha is multilinear") {
  Rng rng(79);
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 32.0);
  const GridFunction f1 = random_piecewise(g, 2, rng), f2 = random_piecewise(g, 2, rng),
                     f3 = random_piecewise(g, 2, rng);
  const KernelParams k{2, 1, 0.6};
  const std::vector<Point> xs = {{0.4}, {2.5}};
  const GridFunction base[2] = {f1, f2};
  const GridFunction scaled[2] = {4.0 * f1, f2};
  const GridFunction other[2] = {f3, f2};
  const GridFunction summed[2] = {f1 + f3, f2};
  const auto vb = apply_Ialpha(base, k, xs), vs = apply_Ialpha(scaled, k, xs),
             vo = apply_Ialpha(other, k, xs), vsum = apply_Ialpha(summed, k, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(vs[i] == 4.0 * vb[i]);
    CHECK(std::abs(vsum[i] - vb[i] - vo[i]) <= 1e-12 * (std::abs(vb[i]) + std::abs(vo[i])));
  }
}

TEST_CASE("I_alpha commutes with aligned translations bit for bit") {
  Rng rng(83);
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 32.0);
  const Grid gt = Grid::over_box({2.0}, {3.0}, 1.0 / 32.0);
  const GridFunction f = random_piecewise(g, 2, rng);
  const GridFunction ft(gt, {f.values().begin(), f.values().end()});
  const GridFunction a[1] = {f}, b[1] = {ft};
  const KernelParams k{1, 1, 0.5};
  const std::vector<Point> xs = {{0.25}, {1.5}}, xt = {{2.25}, {3.5}};
  const auto va = apply_Ialpha(a, k, xs), vb = apply_Ialpha(b, k, xt);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(va[i] == vb[i]);
}

TEST_CASE("dilation law for m = 1") {
  const double alpha = 0.5;
  for (double h : {1.0 / 64.0, 1.0 / 128.0}) {
    const GridFunction f[1] = {unit_indicator(h)};
    const Grid g2 = Grid::over_box({0.0}, {2.0}, 2.0 * h);
    const GridFunction f2[1] = {GridFunction(g2, std::vector<double>(g2.size(), 1.0))};
    const double v1 = apply_Ialpha_at(f, KernelParams{1, 1, alpha}, {0.3});
    const double v2 = apply_Ialpha_at(f2, KernelParams{1, 1, alpha}, {0.6});
    CHECK(std::abs(v2 / (std::pow(2.0, alpha) * v1) - 1.0) <= 0.01);
  }
}

TEST_CASE("kernel derivative ratios") {
  const std::vector<DerivativeSample> samples = {{{0.0}, {{1.0}}}, {{0.5}, {{-2.0}}},
                                                 {{3.0}, {{0.25}}}};
  const KernelParams k{1, 1, 0.4};
  const int b0[1] = {0}, b1[1] = {1};
  CHECK(kernel_derivative_check(k, b0, samples).ratio == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(kernel_derivative_check(k, b1, samples).ratio - 0.6) <= 1e-6);

  const KernelParams k2{2, 1, 0.7};
  const int b2[2] = {1, 1};
  std::vector<DerivativeSample> s1, s2;
  Rng rng(89);
  for (int t = 0; t < 20; ++t) {
    const double x = uniform(rng, -1, 1), y1 = uniform(rng, -1, 1), y2 = uniform(rng, -1, 1);
    if (std::hypot(x - y1, x - y2) < 0.2) continue;
    s1.push_back({{x}, {{y1}, {y2}}});
    s2.push_back({{2 * x}, {{2 * y1}, {2 * y2}}});
  }
  const double r1 = kernel_derivative_check(k2, b2, s1).ratio;
  const double r2 = kernel_derivative_check(k2, b2, s2).ratio;
  CHECK(std::max(r1, r2) / std::min(r1, r2) <= 1.2);
}

TEST_CASE("decay bound for the Haar atom") {
  const double alpha = 0.5;
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 1024.0);
  const Cube q({0.5}, 1.0);
  const GridFunction haar = GridFunction::sample(
      g, [](std::span<const double> x) { return x[0] < 0.5 ? 1.0 : -1.0; });
  const Atom atoms[1] = {atom_from_values(q, haar, 0, Flavor::plain, 1.0)};
  DecayCheckConfig cfg;
  cfg.subset = {0};
  const KernelParams k{1, 1, alpha};
  const double rhs = decay_bound(atoms, cfg, k, {4.0});
  CHECK(rhs == doctest::Approx(1.0 / std::pow(4.5, 2.0 - alpha)).epsilon(1e-14));
  const std::vector<Point> xs = {{4.0}};
  const InequalityReport r = decay_bound_check(atoms, cfg, k, xs);
  const double lhs = std::abs(oracle::riesz_interval(4.0, alpha, 0.0, 0.5) -
                              oracle::riesz_interval(4.0, alpha, 0.5, 1.0));
  CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-3));
  CHECK(r.rhs > 0.0);
}

TEST_CASE("decay ratios are stable under dilation") {
  const double alpha = 0.5;
  std::vector<double> ratios;
  for (double s : {1.0, 2.0}) {
    const Grid g = Grid::over_box({-s}, {s}, s / 64.0);
    const Atom atoms[1] = {make_atom(g, Cube({0.0}, s), 0, 7)};
    DecayCheckConfig cfg;
    cfg.subset = {0};
    const std::vector<Point> xs = {{3.0 * s}, {-5.0 * s}, {8.0 * s}};
    ratios.push_back(decay_bound_check(atoms, cfg, KernelParams{1, 1, alpha}, xs).ratio);
  }
  CHECK(std::max(ratios[0], ratios[1]) / std::min(ratios[0], ratios[1]) <= 1.5);
}

TEST_CASE("theorem ratio degenerate cases") {
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 32.0);
  const Grid eval = Grid::over_box({-1.0}, {2.0}, 1.0 / 8.0);
  const ExponentField p = ExponentField::constant(1, 1.5);
  AtomicSum zero{g};
  zero.add(0.0, make_atom(g, Cube({0.5}, 0.5), 0, 1));
  const AtomicSum sums[1] = {zero};
  const ExponentField ps[1] = {p};
  const InequalityReport r = theorem_ratio(sums, ps, KernelParams{1, 1, 0.5}, eval);
  CHECK(r.lhs == 0.0);
  CHECK(r.ratio == 0.0);
  CHECK(r.degenerate);

  const Grid bg = Grid::over_box({-1.0}, {2.0}, 1.0 / 32.0);
  const GridFunction b(bg, std::vector<double>(bg.size(), 0.75));
  AtomicSum one{g};
  one.add(1.0, make_b_atom(g, Cube({0.5}, 0.5), 0, b, p, 1));
  const AtomicSum sums1[1] = {one};
  const InequalityReport c =
      theorem_ratio(sums1, ps, KernelParams{1, 1, 0.5}, eval, CommutatorArgs{&b, 0});
  CHECK(c.lhs <= 1e-12);
  CHECK(c.ratio == 0.0);
  CHECK(c.degenerate);
}

}
