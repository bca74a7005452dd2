#include <cmath>

#include "doctest.h"
#include "varexp/error.hpp"
#include "varexp/grid.hpp"
#include "varexp/sampling.hpp"
#include "varexp/serialize.hpp"

using namespace varexp;

TEST_SUITE("geometry") {

TEST_CASE("dilate") {
  const Cube q({0.5}, 1.0);
  CHECK(dilate(q, 1.0) == q);
  CHECK(dilate(Cube({0.0}, 1.0), default_dilation(1)).side() == 2.0);
  const Cube a = dilate(dilate(Cube({0.3, -0.7}, 0.25), 2.0), 3.0);
  const Cube b = dilate(Cube({0.3, -0.7}, 0.25), 6.0);
  CHECK(a.side() == doctest::Approx(b.side()).epsilon(1e-15));
  CHECK(a.center() == b.center());
  CHECK(dilate(Cube({0.1234567}, 0.5), 7.3).center()[0] == 0.1234567);
}

TEST_CASE("region_EA single cube is the complement of Q*") {
  const Cube q({0.0}, 1.0);
  const RegionEA r({q}, {0}, 2.0);
  for (double x = -3.0; x <= 3.0; x += 0.125) {
    const double pt[1] = {x};
    CHECK(r.contains(pt) == !dilate(q, 2.0).contains(pt));
  }
}

TEST_CASE("region_EA with A = {0} and x in Q*_1 minus Q*_0") {
  const RegionEA r({Cube({0.0}, 0.25), Cube({3.0}, 0.25)}, {0}, 2.0);
  const double x[1] = {3.1};
  CHECK(r.contains(x));
  CHECK_FALSE(r.violation(x).has_value());
  const double y[1] = {0.0};
  CHECK_FALSE(r.contains(y));
  CHECK(r.violation(y).has_value());
}

TEST_CASE("E_A regions partition the union of complements") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Cube> cubes;
    for (int j = 0; j < 3; ++j) cubes.emplace_back(Point{uniform(rng, -1, 1), uniform(rng, -1, 1)},
                                                   uniform(rng, 0.1, 0.8));
    const std::vector<std::vector<std::size_t>> subsets = {{0}, {1}, {2}, {0, 1},
                                                           {0, 2}, {1, 2}, {0, 1, 2}};
    for (double x = -2.0; x <= 2.0; x += 0.1) {
      for (double y = -2.0; y <= 2.0; y += 0.1) {
        const double pt[2] = {x, y};
        int hits = 0;
        for (const auto& a : subsets) hits += RegionEA(cubes, a, 2.0).contains(pt) ? 1 : 0;
        bool in_all = true;
        for (const auto& c : cubes) in_all = in_all && dilate(c, 2.0).contains(pt);
        CHECK(hits == (in_all ? 0 : 1));
        CHECK(classify_EA(pt, cubes, 2.0).has_value() == !in_all);
      }
    }
  }
}

TEST_CASE("integrate") {
  const Grid g = Grid::over_box({0.0, 0.0}, {2.0, 0.5}, 0.125);
  CHECK(integrate(GridFunction(g, std::vector<double>(g.size(), 1.0))) == doctest::Approx(1.0));
  CHECK(integrate(GridFunction(g)) == 0.0);
  const Grid g1 = Grid::over_box({0.0}, {1.0}, 1.0 / 1024.0);
  const GridFunction f = GridFunction::sample(g1, [](std::span<const double> x) { return x[0]; });
  CHECK(std::abs(integrate(f) - 0.5) <= 1e-6);
}

TEST_CASE("integrate is linear") {
  Rng rng(3);
  const Grid g = Grid::over_box({-1.0}, {1.0}, 1.0 / 64.0);
  for (int t = 0; t < 50; ++t) {
    const GridFunction f = random_piecewise(g, 3, rng), h = random_piecewise(g, 5, rng);
    const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
    const double lhs = integrate(a * f + b * h);
    const double rhs = a * integrate(f) + b * integrate(h);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(a) * f.sup_abs() + std::abs(b) * h.sup_abs()) *
                                     g.volume());
  }
}

TEST_CASE("grid lattice and location") {
  const Grid g = Grid::over_box({0.0}, {1.0}, 0.25);
  CHECK(g.size() == 4);
  const double upper[1] = {1.0}, lower[1] = {0.0}, outside[1] = {1.01}, edge[1] = {0.5};
  CHECK(g.locate(upper).value() == 3);
  CHECK(g.locate(lower).value() == 0);
  CHECK(g.locate(edge).value() == 2);
  CHECK_FALSE(g.locate(outside).has_value());
  CHECK_THROWS_AS(Grid::over_box({0.0}, {1.0}, 0.3), Error);
  const Grid shifted = Grid::over_box({0.5}, {2.0}, 0.25);
  CHECK(shifted.aligned_with(g));
  CHECK_FALSE(Grid::over_box({0.1}, {1.1}, 0.25).aligned_with(g));
}

TEST_CASE("cells_within and indicator") {
  const Grid g = Grid::over_box({-1.0}, {1.0}, 0.125);
  const Grid sub = cells_within(g, Cube({0.0}, 0.5));
  CHECK(sub.size() == 4);
  CHECK(sub.aligned_with(g));
  CHECK(integrate(indicator(g, Cube({0.0}, 0.5))) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cells_within(g, Cube({5.0}, 0.5)), Error);
}

TEST_CASE("embedding and evaluation outside the box") {
  const Grid g = Grid::over_box({0.0}, {1.0}, 0.25);
  const GridFunction f(g, {1.0, 2.0, 3.0, 4.0});
  const Grid big = Grid::over_box({-1.0}, {2.0}, 0.25);
  const GridFunction e = f.embedded_in(big);
  CHECK(integrate(e) == doctest::Approx(integrate(f)));
  const double out[1] = {1.5};
  CHECK(f.at(out) == 0.0);
}

TEST_CASE("grid function JSON round trip") {
  Rng rng(5);
  const Grid g = Grid::over_box({-0.5, 0.0}, {0.5, 0.25}, 0.125);
  const GridFunction f = random_piecewise(g, 1, rng);
  const GridFunction h = grid_function_from_json(to_json(f));
  CHECK(h.grid() == g);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(h[i] == f[i]);
  const Cube q({0.25, -1.0}, 0.75);
  CHECK(cube_from_json(to_json(q)) == q);
}

}
