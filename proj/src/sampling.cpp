#include "varexp/sampling.hpp"

#include "varexp/error.hpp"

namespace varexp {

double uniform(Rng& rng, double a, double b) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

GridFunction random_piecewise(const Grid& grid, std::size_t block, Rng& rng, const Point& lo,
                              const Point& hi) {
  if (block == 0) throw Error("random_piecewise: block size must be positive");
  const std::size_t n = grid.dim();
  std::vector<std::size_t> bshape(n), bstride(n);
  std::size_t nblocks = 1;
  for (std::size_t d = n; d-- > 0;) {
    bshape[d] = (grid.shape()[d] + block - 1) / block;
    bstride[d] = nblocks;
    nblocks *= bshape[d];
  }
  std::vector<double> bvals(nblocks);
  for (double& v : bvals) v = uniform(rng, -1.0, 1.0);
  GridFunction f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    std::size_t b = 0;
    bool inside = true;
    for (std::size_t d = 0; d < n; ++d) {
      b += (idx[d] / block) * bstride[d];
      const double x = grid.midpoint(i, d);
      if (x < lo[d] || x > hi[d]) inside = false;
    }
    f[i] = inside ? bvals[b] : 0.0;
  }
  return f;
}

GridFunction random_piecewise(const Grid& grid, std::size_t block, Rng& rng) {
  return random_piecewise(grid, block, rng, grid.lo(), grid.hi());
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace varexp
