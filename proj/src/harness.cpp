#include "varexp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "varexp/atoms.hpp"
#include "varexp/error.hpp"
#include "varexp/exponent.hpp"
#include "varexp/fractional.hpp"
#include "varexp/maximal.hpp"
#include "varexp/norms.hpp"
#include "varexp/sampling.hpp"
#include "varexp/serialize.hpp"

namespace varexp {

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "holder",          "duality",       "fefferman_stein",    "claim",
      "kernel_derivative", "decay",       "theorem",            "commutator_theorem",
      "lh_validate",     "luxemburg",     "unit_ball",          "generalized_holder",
      "atom_certificates", "riesz_oracle"};
  return names;
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.check = j.at("check").get<std::string>();
  s.criterion = j.value("criterion", 0);
  s.seed = j.at("seed").get<std::uint64_t>();
  s.params = j.value("params", Json::object());
  s.thresholds = j.value("thresholds", Json::object());
  return s;
}

Json to_json(const Scenario& s) {
  return {{"name", s.name},     {"check", s.check},           {"criterion", s.criterion},
          {"seed", s.seed},     {"params", s.params},         {"thresholds", s.thresholds}};
}

namespace {

using RowsFn = std::function<std::vector<TrialRow>()>;

struct Planned {
  TrialRow meta;
  RowsFn fn;
};

double num(const Json& p, const char* key, double def) {
  return p.contains(key) ? number_from_json(p.at(key)) : def;
}

std::size_t count(const Json& p, const char* key, std::size_t def) {
  return p.contains(key) ? p.at(key).get<std::size_t>() : def;
}

std::vector<double> nums(const Json& p, const char* key, std::vector<double> def) {
  return p.contains(key) ? p.at(key).get<std::vector<double>>() : def;
}

std::string label(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Point axis_point(const Json& j, std::size_t n) {
  if (j.is_number()) return Point(n, j.get<double>());
  auto p = j.get<Point>();
  if (p.size() != n) throw Error("exponent spec: box dimension mismatch");
  return p;
}

/// {"type": "constant" | "sine" | "jump" | "samples", ...}
ExponentField exponent_from_spec(const Json& s, std::size_t n) {
  const std::string type = s.value("type", "constant");
  if (type == "constant") {
    const double v = num(s, "value", 2.0);
    if (!s.contains("lo")) return ExponentField::constant(n, v);
    const Point lo = axis_point(s.at("lo"), n), hi = axis_point(s.at("hi"), n);
    std::vector<std::size_t> shape(n, count(s, "nodes", 2));
    return ExponentField::from_function(lo, hi, shape, [v](std::span<const double>) { return v; },
                                        v);
  }
  if (type == "sine") {
    const double base = num(s, "base", 2.0), amp = num(s, "amp", 1.0);
    const double freq = num(s, "freq", 1.0), phase = num(s, "phase", 0.0);
    const Point lo = axis_point(s.at("lo"), n), hi = axis_point(s.at("hi"), n);
    std::vector<std::size_t> shape(n, 1);
    shape[0] = count(s, "nodes", 257);
    return ExponentField::from_function(
        lo, hi, shape,
        [=](std::span<const double> x) { return base + amp * std::sin(freq * x[0] + phase); },
        num(s, "p_inf", base));
  }
  if (type == "jump") {
    const double left = num(s, "left", 2.0), right = num(s, "right", 2.5);
    const Point lo = axis_point(s.at("lo"), n), hi = axis_point(s.at("hi"), n);
    const double spacing = num(s, "spacing", 0.25);
    std::vector<std::size_t> shape(n, 1);
    shape[0] = static_cast<std::size_t>(std::llround((hi[0] - lo[0]) / spacing)) + 1;
    return ExponentField::from_function(
        lo, hi, shape, [=](std::span<const double> x) { return x[0] < 0.0 ? left : right; },
        num(s, "p_inf", right));
  }
  if (type == "samples") return exponent_from_json(s);
  throw Error("unknown exponent type '" + type + "'");
}

Json sine_spec(double base, double amp, double lo, double hi, std::size_t nodes, double p_inf) {
  return {{"type", "sine"}, {"base", base}, {"amp", amp},         {"lo", lo},
          {"hi", hi},       {"nodes", nodes}, {"p_inf", p_inf}};
}

TrialRow with_report(TrialRow row, const InequalityReport& r) {
  row.lhs = r.lhs;
  row.rhs = r.rhs;
  row.ratio = r.ratio;
  row.extra = r.config;
  return row;
}

/// Cell-lattice-aligned draw: multiple of `step` in [-half, half].
double lattice_draw(Rng& rng, double half, double step) {
  return std::round(uniform(rng, -half, half) / step) * step;
}

// ---------------------------------------------------------------------------
// Checks. Each returns independent tasks; a task yields the rows of one group.

std::vector<Planned> plan_luxemburg(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const std::size_t trials = count(p, "trials", 200);
  const auto exps = nums(p, "exponents", {1.5, 2.0, 3.0});
  const std::size_t cells = count(p, "cells", 256), block = count(p, "block", 8);
  const double tol = num(p, "tolerance", 1e-6);
  const Grid grid = Grid::over_box({0.0}, {1.0}, 1.0 / static_cast<double>(cells));
  std::vector<Planned> out;
  for (std::size_t t = 0; t < trials; ++t) {
    TrialRow meta;
    meta.group = t;
    meta.seed = trial_seed(seed, t);
    meta.resolution = grid.h();
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     const GridFunction f = random_piecewise(grid, block, rng);
                     std::vector<TrialRow> rows;
                     for (double q : exps) {
                       double acc = 0.0;
                       for (double v : f.values()) acc += std::pow(std::abs(v), q);
                       const double closed = std::pow(grid.h() * acc, 1.0 / q);
                       TrialRow r = meta;
                       r.family = "p=" + label(q);
                       r.lhs = luxemburg_norm(f, ExponentField::constant(1, q));
                       r.rhs = closed;
                       r.ratio = r.lhs / r.rhs;
                       r.ok = std::abs(r.ratio - 1.0) <= tol;
                       r.extra = {{"p", q}};
                       rows.push_back(r);
                     }
                     return rows;
                   }});
  }
  return out;
}

std::vector<Planned> plan_unit_ball(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const double pi = std::numbers::pi;
  const std::size_t trials = count(p, "trials", 200);
  const std::size_t cells = count(p, "cells", 512), block = count(p, "block", 8);
  const double tol = num(p, "tolerance", 1e-4);
  const double lo = num(p, "lo", -pi), hi = num(p, "hi", pi);
  const ExponentField ex =
      exponent_from_spec(p.value("exponent", sine_spec(2.0, 1.0, -pi, pi, 513, 2.0)), 1);
  const Grid grid = Grid::over_box({lo}, {hi}, (hi - lo) / static_cast<double>(cells));
  std::vector<Planned> out;
  for (std::size_t t = 0; t < trials; ++t) {
    TrialRow meta;
    meta.group = t;
    meta.seed = trial_seed(seed, t);
    meta.resolution = grid.h();
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     GridFunction f = random_piecewise(grid, block, rng);
                     const double norm = luxemburg_norm(f, ex);
                     f *= 1.0 / norm;
                     TrialRow r = meta;
                     r.lhs = modular(f, ex).value;
                     r.rhs = 1.0;
                     r.ratio = r.lhs;
                     r.ok = std::abs(r.lhs - 1.0) <= tol;
                     r.extra = {{"norm", norm}};
                     return std::vector<TrialRow>{r};
                   }});
  }
  return out;
}

std::vector<Planned> plan_holder(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const std::size_t trials = count(p, "trials", 1000);
  const std::size_t cells = count(p, "cells", 128), block = count(p, "block", 4);
  const double tol = num(p, "tolerance", 1e-6);
  const Grid grid = Grid::over_box({0.0}, {1.0}, 1.0 / static_cast<double>(cells));
  std::vector<ExponentField> fields;
  std::vector<std::string> names;
  if (p.contains("exponent")) {
    fields.push_back(exponent_from_spec(p.at("exponent"), 1));
    names.push_back("given");
  } else {
    for (double c : nums(p, "constants", {1.5, 2.0, 3.0})) {
      fields.push_back(ExponentField::constant(1, c));
      names.push_back("constant");
    }
    fields.push_back(exponent_from_spec(
        p.value("variable", sine_spec(2.0, 1.0, 0.0, 1.0, 129, 2.0)), 1));
    names.push_back("variable");
  }
  // Alternate constant and variable exponents; constants cycle among themselves.
  const std::size_t nconst = fields.size() > 1 ? fields.size() - 1 : 0;
  std::vector<Planned> out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t k = 0;
    if (nconst > 0) k = (t % 2 == 1) ? nconst : (t / 2) % nconst;
    TrialRow meta;
    meta.group = t;
    meta.seed = trial_seed(seed, t);
    meta.resolution = grid.h();
    meta.family = names[k];
    const ExponentField ex = fields[k];
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     const GridFunction f = random_piecewise(grid, block, rng);
                     const GridFunction g = random_piecewise(grid, block, rng);
                     TrialRow r = with_report(meta, holder_pair_check(f, g, ex));
                     r.ok = r.ratio <= 1.0 + tol;
                     return std::vector<TrialRow>{r};
                   }});
  }
  return out;
}

std::vector<Planned> plan_duality(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const std::size_t trials = count(p, "trials", 100), gtrials = count(p, "g_trials", 20);
  const std::size_t cells = count(p, "cells", 128), block = count(p, "block", 4);
  const double lower_tol = num(p, "lower_tolerance", 1e-3);
  const double upper_tol = num(p, "upper_tolerance", 1e-6);
  const Grid grid = Grid::over_box({0.0}, {1.0}, 1.0 / static_cast<double>(cells));
  const ExponentField ex =
      exponent_from_spec(p.value("exponent", sine_spec(2.0, 1.0, 0.0, 1.0, 129, 2.0)), 1);
  std::vector<Planned> out;
  for (std::size_t t = 0; t < trials; ++t) {
    TrialRow meta;
    meta.group = t;
    meta.seed = trial_seed(seed, t);
    meta.resolution = grid.h();
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     const GridFunction f = random_piecewise(grid, block, rng);
                     const auto rep = duality_lower_bound(f, ex, gtrials, rng(), block);
                     TrialRow r = with_report(meta, rep);
                     const double norm = rep.config.at("norm_f").get<double>();
                     r.ok = r.lhs >= norm - lower_tol && r.lhs <= r.rhs + upper_tol;
                     return std::vector<TrialRow>{r};
                   }});
  }
  return out;
}

std::vector<Planned> plan_generalized_holder(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const std::size_t trials = count(p, "trials", 500);
  const auto resolutions = nums(p, "resolutions", {128.0, 256.0});
  const std::size_t blocks = count(p, "blocks", 16);
  Json specs = p.value("exponents", Json::array({sine_spec(3.0, 1.0, 0.0, 1.0, 257, 3.0),
                                                 sine_spec(4.0, 1.0, 0.0, 1.0, 257, 4.0)}));
  std::vector<ExponentField> ps;
  for (auto& sp : specs) ps.push_back(exponent_from_spec(sp, 1));
  std::vector<Planned> out;
  for (std::size_t t = 0; t < trials; ++t) {
    TrialRow meta;
    meta.group = t;
    meta.seed = trial_seed(seed, t);
    out.push_back({meta, [=] {
                     std::vector<TrialRow> rows;
                     for (double res : resolutions) {
                       const auto cells = static_cast<std::size_t>(res);
                       if (cells % blocks != 0) {
                         throw Error("generalized_holder: resolution must be a multiple of blocks");
                       }
                       const Grid grid =
                           Grid::over_box({0.0}, {1.0}, 1.0 / static_cast<double>(cells));
                       Rng rng(meta.seed);
                       std::vector<GridFunction> fs;
                       for (std::size_t i = 0; i < ps.size(); ++i) {
                         fs.push_back(random_piecewise(grid, cells / blocks, rng));
                       }
                       TrialRow r = with_report(meta, generalized_holder_check(fs, ps));
                       r.variant = "cells=" + std::to_string(cells);
                       r.resolution = grid.h();
                       r.ok = std::isfinite(r.ratio);
                       rows.push_back(r);
                     }
                     return rows;
                   }});
  }
  return out;
}

std::vector<Planned> plan_atom_certificates(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const Flavor flavor = flavor_from_string(p.value("flavor", "plain"));
  const std::size_t atoms = count(p, "count", 100);
  const auto degrees = nums(p, "degrees", {0.0, 1.0, 2.0});
  const auto sides = nums(p, "sides", {0.25, 0.5});
  const double h = num(p, "h", 1.0 / 64.0), tol = num(p, "tolerance", 1e-9);
  const Grid grid = Grid::over_box({-2.0}, {2.0}, h);
  const ExponentField ex =
      exponent_from_spec(p.value("exponent", sine_spec(2.0, 0.5, -2.0, 2.0, 257, 2.0)), 1);
  std::vector<Planned> out;
  for (std::size_t t = 0; t < atoms; ++t) {
    TrialRow meta;
    meta.group = t;
    meta.seed = trial_seed(seed, t);
    meta.resolution = h;
    meta.family = to_string(flavor);
    const int d = static_cast<int>(degrees[t % degrees.size()]);
    meta.variant = "d=" + std::to_string(d);
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     const double side = sides[rng() % sides.size()];
                     const Cube q({lattice_draw(rng, 1.0, h)}, side);
                     const GridFunction b = random_piecewise(grid, 4, rng);
                     const Atom a = flavor == Flavor::plain
                                        ? make_atom(grid, q, d, rng())
                                        : make_b_atom(grid, q, d, b, ex, rng());
                     const AtomCertificate c =
                         certify(a, flavor == Flavor::plain ? nullptr : &b);
                     TrialRow r = meta;
                     r.lhs = std::max(c.max_moment_residual(), c.max_b_moment_residual());
                     r.rhs = tol;
                     r.ratio = r.lhs / tol;
                     r.ok = c.ok(tol);
                     r.extra = to_json(c);
                     r.extra["cube"] = to_json(q);
                     return std::vector<TrialRow>{r};
                   }});
  }
  return out;
}

std::vector<Planned> plan_riesz_oracle(const Scenario& s, std::uint64_t) {
  const Json& p = s.params;
  const auto resolutions = nums(p, "resolutions", {512.0, 2048.0});
  const auto tolerances = nums(p, "tolerances", {0.02, 0.005});
  if (tolerances.size() != resolutions.size()) {
    throw Error("riesz_oracle: need one tolerance per resolution");
  }
  const double alpha = num(p, "alpha", 0.5), x = num(p, "x", 0.5);
  const std::string policy = p.value("policy", "product_integration");
  QuadratureOptions opt;
  if (policy == "skip_cell") {
    opt.policy = SingularPolicy::skip_cell;
  } else if (policy != "product_integration") {
    throw Error("riesz_oracle: unknown policy '" + policy + "'");
  }
  if (!(x > 0.0 && x < 1.0)) throw Error("riesz_oracle: x must lie in (0, 1)");
  const double exact = (std::pow(x, alpha) + std::pow(1.0 - x, alpha)) / alpha;
  std::vector<Planned> out;
  for (std::size_t k = 0; k < resolutions.size(); ++k) {
    TrialRow meta;
    meta.group = k;
    meta.resolution = 1.0 / resolutions[k];
    meta.variant = "cells=" + label(resolutions[k]);
    const double tol = tolerances[k];
    out.push_back({meta, [=] {
                     const Grid g = Grid::over_box({0.0}, {1.0}, meta.resolution);
                     const GridFunction f(g, std::vector<double>(g.size(), 1.0));
                     const GridFunction fs[1] = {f};
                     TrialRow r = meta;
                     r.lhs = apply_Ialpha_at(fs, {1, 1, alpha}, {x}, opt);
                     r.rhs = exact;
                     r.ratio = r.lhs / exact;
                     r.ok = std::abs(r.ratio - 1.0) <= tol;
                     r.extra = {{"tolerance", tol}, {"policy", policy}};
                     return std::vector<TrialRow>{r};
                   }});
  }
  return out;
}

std::vector<DerivativeSample> derivative_samples(std::size_t m, std::size_t n, std::size_t count,
                                                 std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<DerivativeSample> out;
  for (std::size_t k = 0; k < count; ++k) {
    DerivativeSample s;
    s.x.resize(n);
    for (auto& v : s.x) v = scale * uniform(rng, -1.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      Point y(n);
      for (auto& v : y) v = scale * uniform(rng, -1.0, 1.0);
      s.ys.push_back(y);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Planned> plan_kernel_derivative(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const double alpha = num(p, "alpha", 0.5), dilation = num(p, "dilation", 2.0);
  const std::size_t samples = count(p, "samples", 200);
  const double tol = num(p, "tolerance", 1e-6);
  std::vector<Planned> out;
  auto beta_label = [](const std::vector<int>& b) {
    std::string l = "beta=(";
    for (std::size_t i = 0; i < b.size(); ++i) l += (i ? "," : "") + std::to_string(b[i]);
    return l + ")";
  };

  TrialRow zero;
  zero.group = 0;
  zero.seed = trial_seed(seed, 0);
  zero.family = "order0";
  out.push_back({zero, [=] {
                   const auto ss = derivative_samples(2, 1, samples, zero.seed, 1.0);
                   const int beta[2] = {0, 0};
                   TrialRow r = with_report(zero, kernel_derivative_check({2, 1, alpha}, beta, ss));
                   r.ok = r.ratio == 1.0;
                   return std::vector<TrialRow>{r};
                 }});

  TrialRow one;
  one.group = 1;
  one.seed = trial_seed(seed, 1);
  one.family = "order1_m1";
  out.push_back({one, [=] {
                   const auto ss = derivative_samples(1, 1, samples, one.seed, 1.0);
                   const int beta[1] = {1};
                   TrialRow r = with_report(one, kernel_derivative_check({1, 1, alpha}, beta, ss));
                   r.ok = std::abs(r.ratio - std::abs(1.0 - alpha)) <= tol;
                   return std::vector<TrialRow>{r};
                 }});

  const std::uint64_t sample_seed = trial_seed(seed, 2);
  std::size_t group = 2;
  for (const auto& b : monomial_exponents(2, 2)) {
    if (b[0] + b[1] == 0) continue;
    TrialRow meta;
    meta.group = group++;
    meta.seed = sample_seed;
    meta.family = beta_label(b);
    out.push_back({meta, [=] {
                     std::vector<TrialRow> rows;
                     for (double sc : {1.0, dilation}) {
                       const auto ss = derivative_samples(2, 1, samples, meta.seed, sc);
                       TrialRow r = with_report(meta, kernel_derivative_check({2, 1, alpha}, b, ss));
                       r.scale = sc;
                       r.variant = "s=" + label(sc);
                       r.ok = std::isfinite(r.ratio) && r.ratio > 0.0;
                       rows.push_back(r);
                     }
                     return rows;
                   }});
  }
  return out;
}

std::vector<Planned> plan_decay(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const Flavor flavor = flavor_from_string(p.value("flavor", "plain"));
  const std::size_t configs = count(p, "configs", 100), npoints = count(p, "points", 16);
  const auto degrees = nums(p, "degrees", {0.0, 1.0});
  const auto dilations = nums(p, "dilations", {1.0, 2.0, 4.0});
  const auto sides = nums(p, "sides", {0.125, 0.25});
  const double h = num(p, "h", 1.0 / 256.0), alpha = num(p, "alpha", 0.5);
  const double xbox = num(p, "x_box", 3.0);
  const KernelParams kp{2, 1, alpha};
  const ExponentField ex =
      exponent_from_spec(p.value("exponent", sine_spec(2.0, 0.5, -16.0, 16.0, 4097, 2.0)), 1);
  const double kappa = num(p, "kappa", default_dilation(1));
  const bool dilate_b = p.value("dilate_b", true);
  std::vector<Planned> out;
  for (std::size_t c = 0; c < configs; ++c) {
    TrialRow meta;
    meta.group = c;
    meta.seed = trial_seed(seed, c);
    meta.family = to_string(flavor);
    const int d = static_cast<int>(degrees[c % degrees.size()]);
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     std::vector<Cube> cubes;
                     for (std::size_t j = 0; j < 2; ++j) {
                       const double side = sides[rng() % sides.size()];
                       cubes.emplace_back(Point{lattice_draw(rng, 1.0, h)}, side);
                     }
                     const auto first_mask = rng() % 3;
                     std::vector<Point> cand;
                     for (int k = 0; k < 128; ++k) cand.push_back({lattice_draw(rng, xbox, 0x1p-10)});
                     for (std::size_t j = 0; j < 2; ++j) {
                       const Cube qs = dilate(cubes[j], kappa);
                       for (int k = 0; k < 32; ++k) {
                         const double x = cubes[j].center()[0] + lattice_draw(rng, 0.5 * qs.side(), 0x1p-10);
                         cand.push_back({x});
                       }
                     }
                     // A is drawn first; sets whose E_A holds no candidate (nested Q*) are skipped.
                     DecayCheckConfig cfg;
                     cfg.d = d;
                     cfg.kappa = kappa;
                     std::vector<Point> xs;
                     for (std::uint64_t k = 0; k < 3 && xs.empty(); ++k) {
                       const auto mask = 1 + (first_mask + k) % 3;
                       cfg.subset.clear();
                       for (std::size_t j = 0; j < 2; ++j) {
                         if (mask & (1u << j)) cfg.subset.push_back(j);
                       }
                       const RegionEA region(cubes, cfg.subset, kappa);
                       for (const auto& x : cand) {
                         if (xs.size() < npoints && region.contains(x)) xs.push_back(x);
                       }
                     }
                     if (xs.empty()) throw Error("decay: no candidate point lies in any E_A");
                     const std::uint64_t s0 = rng(), s1 = rng();
                     std::vector<TrialRow> rows;
                     for (double sc : dilations) {
                       const Grid grid = Grid::over_box({-2.0 * sc}, {2.0 * sc}, h * sc);
                       const double bs = dilate_b ? sc : 1.0;
                       const GridFunction b = GridFunction::sample(
                           grid, [bs](std::span<const double> x) { return std::sin(x[0] / bs); });
                       std::vector<Atom> atoms;
                       const std::uint64_t seeds[2] = {s0, s1};
                       for (std::size_t j = 0; j < 2; ++j) {
                         const Cube q({cubes[j].center()[0] * sc}, cubes[j].side() * sc);
                         atoms.push_back(flavor == Flavor::plain
                                             ? make_atom(grid, q, d, seeds[j])
                                             : make_b_atom(grid, q, d, b, ex, seeds[j]));
                       }
                       std::vector<Point> sx;
                       for (const auto& x : xs) sx.push_back({x[0] * sc});
                       const ExponentField ps[2] = {ex, ex};
                       const auto rep = flavor == Flavor::plain
                                            ? decay_bound_check(atoms, cfg, kp, sx)
                                            : decay_bound_check(atoms, cfg, kp, sx, ps);
                       TrialRow r = with_report(meta, rep);
                       r.scale = sc;
                       r.resolution = h * sc;
                       r.variant = "s=" + label(sc);
                       r.ok = std::isfinite(r.ratio);
                       r.extra["dilate_b"] = dilate_b;
                       rows.push_back(r);
                     }
                     return rows;
                   }});
  }
  return out;
}

struct NamedExponent {
  std::string name;
  ExponentField field;
};

std::vector<NamedExponent> theorem_exponents(const Json& p) {
  Json specs = p.value(
      "exponents",
      Json::array({{{"name", "const"}, {"type", "constant"}, {"value", 2.0}},
                   [] {
                     Json j = sine_spec(2.0, 0.5, -32.0, 32.0, 8193, 2.0);
                     j["name"] = "sine";
                     return j;
                   }()}));
  std::vector<NamedExponent> out;
  for (const auto& sp : specs) {
    out.push_back({sp.value("name", sp.value("type", "p")), exponent_from_spec(sp, 1)});
  }
  return out;
}

/// Geometry of one seeded input in unscaled units: per input, atom cubes and weights.
struct InputDraw {
  std::vector<std::vector<double>> centers, sides, lambdas;
  std::vector<std::vector<std::uint64_t>> seeds;
};

InputDraw draw_inputs(std::uint64_t seed, std::size_t m, std::size_t atoms,
                      const std::vector<double>& sides, double cell) {
  Rng rng(seed);
  InputDraw d;
  d.centers.resize(m);
  d.sides.resize(m);
  d.lambdas.resize(m);
  d.seeds.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < atoms; ++k) {
      d.sides[j].push_back(sides[rng() % sides.size()]);
      d.centers[j].push_back(lattice_draw(rng, 1.0, cell));
      d.lambdas[j].push_back(uniform(rng, 0.5, 1.0));
      d.seeds[j].push_back(rng());
    }
  }
  return d;
}

std::vector<Planned> plan_theorem(const Scenario& s, std::uint64_t seed, bool commutator) {
  const Json& p = s.params;
  const std::size_t seeds = count(p, "seeds", 50), m = count(p, "m", 2);
  const std::size_t atoms = count(p, "atoms_per_input", 2);
  const auto scales = nums(p, "scales", {1.0, 2.0, 4.0});
  const auto translations = nums(p, "translations", {0.0, 3.0});
  const auto sides = nums(p, "sides", {0.125, 0.25});
  const double cells_per_unit = num(p, "cells_per_unit", 256.0);
  const double atom_half = num(p, "atom_half_width", 1.5);
  const double eval_half = num(p, "eval_half_width", 6.0);
  const std::size_t eval_points = count(p, "eval_points", 256);
  const int degree = static_cast<int>(num(p, "degree", 1.0));
  const double alpha = num(p, "alpha", 0.5);
  const std::size_t j_slot = count(p, "j", 0);
  const double const_b = num(p, "const_b", 0.75);
  const std::size_t const_b_seeds = count(p, "const_b_seeds", 5);
  const double vanish_tol = num(p, "vanish_tolerance", 1e-12);
  const bool dilate_b = p.value("dilate_b", false);
  const KernelParams kp{m, 1, alpha};
  const auto exps = theorem_exponents(p);
  const double cell = 1.0 / cells_per_unit;

  std::vector<Planned> out;
  for (std::size_t k = 0; k < seeds; ++k) {
    for (double t : scales) {
      for (double tau : translations) {
        TrialRow meta;
        meta.group = k;
        meta.seed = trial_seed(seed, k);
        meta.scale = t;
        meta.translation = tau;
        meta.resolution = t * cell;
        meta.variant = "t=" + label(t) + ",tau=" + label(tau);
        const bool with_const = commutator && k < const_b_seeds;
        out.push_back({meta, [=] {
                         const double h = t * cell;
                         const InputDraw draw = draw_inputs(meta.seed, m, atoms, sides, cell);
                         const Grid grid =
                             Grid::over_box({-atom_half * t + tau}, {atom_half * t + tau}, h);
                         const Grid eval = Grid::over_box(
                             {-eval_half * t + tau}, {eval_half * t + tau},
                             2.0 * eval_half * t / static_cast<double>(eval_points));
                         const Grid bgrid =
                             Grid::over_box({-eval_half * t + tau}, {eval_half * t + tau}, h);
                         const double bs = dilate_b ? t : 1.0, bshift = dilate_b ? tau : 0.0;
                         const GridFunction b = GridFunction::sample(
                             bgrid, [=](std::span<const double> x) {
                               return std::sin((x[0] - bshift) / bs);
                             });
                         auto build = [&](const ExponentField* ex) {
                           std::vector<AtomicSum> sums(m);
                           for (std::size_t j = 0; j < m; ++j) {
                             sums[j].grid = grid;
                             sums[j].flavor = ex ? Flavor::b_weighted : Flavor::plain;
                             for (std::size_t a = 0; a < atoms; ++a) {
                               const Cube q({draw.centers[j][a] * t + tau}, draw.sides[j][a] * t);
                               sums[j].add(draw.lambdas[j][a],
                                           ex ? make_b_atom(grid, q, degree, b, *ex,
                                                            draw.seeds[j][a])
                                              : make_atom(grid, q, degree, draw.seeds[j][a]));
                             }
                           }
                           return sums;
                         };
                         std::vector<TrialRow> rows;
                         if (!commutator) {
                           const auto sums = build(nullptr);
                           std::vector<GridFunction> fs;
                           for (const auto& sm : sums) fs.push_back(assemble(sm));
                           const GridFunction output = apply_Ialpha(fs, kp, eval);
                           for (const auto& ne : exps) {
                             const std::vector<ExponentField> ps(m, ne.field);
                             TrialRow r = with_report(
                                 meta, theorem_ratio_from_output(output, sums, ps, kp));
                             r.family = ne.name;
                             r.ok = std::isfinite(r.ratio);
                             rows.push_back(r);
                           }
                           return rows;
                         }
                         for (std::size_t e = 0; e < exps.size(); ++e) {
                           const auto& ne = exps[e];
                           const auto sums = build(&ne.field);
                           std::vector<GridFunction> fs;
                           for (const auto& sm : sums) fs.push_back(assemble(sm));
                           const GridFunction output = apply_commutator(b, fs, j_slot, kp, eval);
                           const std::vector<ExponentField> ps(m, ne.field);
                           TrialRow r = with_report(
                               meta, theorem_ratio_from_output(output, sums, ps, kp,
                                                               CommutatorArgs{&b, j_slot}));
                           r.family = ne.name;
                           r.ok = std::isfinite(r.ratio);
                           rows.push_back(r);
                           if (with_const && e == 0) {
                             const GridFunction bc(bgrid, std::vector<double>(bgrid.size(), const_b));
                             const GridFunction zero = apply_commutator(bc, fs, j_slot, kp, eval);
                             double input_scale = 1.0;
                             for (const auto& f : fs) input_scale *= f.sup_abs();
                             TrialRow c = meta;
                             c.family = "const_b";
                             c.lhs = luxemburg_norm(zero, holder_scale(ps, alpha, 1));
                             c.rhs = vanish_tol * input_scale;
                             c.ratio = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
                             c.ok = c.lhs <= c.rhs;
                             c.extra = {{"b", const_b}, {"input_scale", input_scale}};
                             c.extra["drift"] = false;
                             rows.push_back(c);
                           }
                         }
                         return rows;
                       }});
      }
    }
  }
  return out;
}

std::vector<Planned> plan_fefferman_stein(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const std::size_t families = count(p, "families", 20), per = count(p, "functions", 8);
  const double lq = num(p, "lq", 2.0);
  const auto alphas = nums(p, "alphas", {0.0, 0.25});
  const auto resolutions = nums(p, "cells_per_unit", {64.0, 128.0});
  const double block_len = num(p, "block_length", 1.0 / 16.0);
  const double lo = num(p, "lo", -1.0), hi = num(p, "hi", 2.0);
  const ExponentField ex =
      exponent_from_spec(p.value("exponent", sine_spec(2.0, 1.0, -1.0, 2.0, 301, 2.0)), 1);
  std::vector<Planned> out;
  for (std::size_t fam = 0; fam < families; ++fam) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      TrialRow meta;
      meta.group = fam * alphas.size() + a;
      meta.seed = trial_seed(seed, fam);
      meta.family = "alpha=" + label(alphas[a]);
      const double alpha = alphas[a];
      out.push_back({meta, [=] {
                       std::vector<TrialRow> rows;
                       for (double res : resolutions) {
                         const double h = 1.0 / res;
                         const auto block = static_cast<std::size_t>(std::llround(block_len / h));
                         const Grid grid = Grid::over_box({lo}, {hi}, h);
                         Rng rng(meta.seed);
                         std::vector<GridFunction> fs;
                         for (std::size_t i = 0; i < per; ++i) {
                           fs.push_back(random_piecewise(grid, block, rng, {0.0}, {1.0}));
                         }
                         TrialRow r = with_report(meta, vector_fs_check(fs, ex, alpha, lq));
                         r.resolution = h;
                         r.variant = "cells_per_unit=" + label(res);
                         r.ok = std::isfinite(r.ratio);
                         rows.push_back(r);
                       }
                       return rows;
                     }});
    }
  }
  return out;
}

std::vector<Planned> plan_claim(const Scenario& s, std::uint64_t seed) {
  const Json& p = s.params;
  const std::size_t seeds = count(p, "seeds", 50);
  const double alpha = num(p, "alpha", 0.5);
  const auto multipliers = nums(p, "multipliers", {1.0, 2.0, 4.0});
  const double cells_per_r = num(p, "cells_per_r", 8.0);
  const double reach = num(p, "reach", 8.0);
  std::vector<Planned> out;
  for (std::size_t k = 0; k < seeds; ++k) {
    TrialRow meta;
    meta.group = k;
    meta.seed = trial_seed(seed, k);
    out.push_back({meta, [=] {
                     Rng rng(meta.seed);
                     const double y = lattice_draw(rng, 1.0, 0x1p-8);
                     const double r0 = std::round(uniform(rng, 0.125, 0.5) * 64.0) / 64.0;
                     const double h = r0 / cells_per_r;
                     std::vector<Point> xs;
                     const int steps = static_cast<int>(2.0 * reach);
                     for (int i = -steps; i <= steps; ++i) xs.push_back({y + 0.5 * r0 * i});
                     std::vector<TrialRow> rows;
                     for (double mult : multipliers) {
                       TrialRow r = with_report(meta, claim_check({y}, mult * r0, alpha, xs, h));
                       r.scale = mult * r0;
                       r.resolution = h;
                       r.variant = "r=" + label(mult) + "r0";
                       r.ok = std::isfinite(r.ratio) && r.ratio > 0.0;
                       r.extra["y"] = y;
                       r.extra["r0"] = r0;
                       rows.push_back(r);
                     }
                     return rows;
                   }});
  }
  return out;
}

std::vector<Planned> plan_lh_validate(const Scenario& s, std::uint64_t) {
  const Json& p = s.params;
  const auto constants = nums(p, "constants", {1.5, 2.0, 3.0});
  const auto jump_spacings = nums(p, "jump_spacings", {0x1p-2, 0x1p-5, 0x1p-11});
  const auto smooth_spacings = nums(p, "smooth_spacings", {0x1p-2, 0x1p-5, 0x1p-8});
  const double threshold = num(p, "threshold", 100.0);
  const double growth = num(p, "growth", 2.0);
  std::vector<Planned> out;
  std::size_t group = 0;
  for (double c : constants) {
    TrialRow meta;
    meta.group = group++;
    meta.family = "constant";
    meta.variant = "p=" + label(c);
    out.push_back({meta, [=] {
                     Json spec = {{"type", "constant"}, {"value", c}, {"lo", -1.0},
                                  {"hi", 1.0},          {"nodes", 65}};
                     const LHReport rep = check_log_holder(exponent_from_spec(spec, 1), threshold);
                     TrialRow r = meta;
                     r.lhs = rep.c_local + rep.c_decay;
                     r.rhs = 0.0;
                     r.ratio = r.lhs;
                     r.ok = rep.pass && rep.c_local == 0.0 && rep.c_decay == 0.0;
                     r.extra = {{"c_local", rep.c_local}, {"c_decay", rep.c_decay}};
                     r.extra["drift"] = false;
                     return std::vector<TrialRow>{r};
                   }});
  }
  auto fixture = [&](const std::string& name, const std::vector<double>& spacings, bool expect_fail,
                     Json spec) {
    TrialRow meta;
    meta.group = group++;
    meta.family = name;
    out.push_back({meta, [=] {
                     std::vector<LHReport> reps;
                     for (double sp : spacings) {
                       Json j = spec;
                       if (j.at("type") == "jump") {
                         j["spacing"] = sp;
                       } else {
                         j["nodes"] = static_cast<std::size_t>(
                                          std::llround((j.at("hi").get<double>() -
                                                        j.at("lo").get<double>()) / sp)) + 1;
                       }
                       reps.push_back(check_log_holder(exponent_from_spec(j, 1), threshold));
                     }
                     const auto cls = classify_log_holder(reps, growth);
                     TrialRow r = meta;
                     r.lhs = cls.c_local.back();
                     r.rhs = cls.c_local.front();
                     r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
                     r.ok = expect_fail ? (cls.diverging && !cls.pass)
                                        : (cls.pass && !cls.diverging);
                     r.extra = {{"c_local", cls.c_local}, {"diverging", cls.diverging},
                                {"classified_pass", cls.pass}, {"spacings", spacings}};
                     r.extra["drift"] = false;
                     return std::vector<TrialRow>{r};
                   }});
  };
  fixture("jump", jump_spacings, true,
          {{"type", "jump"}, {"left", 2.0}, {"right", 2.5}, {"lo", -0.5}, {"hi", 0.5}});
  const double pi = std::numbers::pi;
  fixture("smooth", smooth_spacings, false, sine_spec(2.0, 1.0, -pi, pi, 2, 2.0));
  return out;
}

std::vector<Planned> plan(const Scenario& s, std::uint64_t seed) {
  const auto& c = s.check;
  if (c == "luxemburg") return plan_luxemburg(s, seed);
  if (c == "unit_ball") return plan_unit_ball(s, seed);
  if (c == "holder") return plan_holder(s, seed);
  if (c == "duality") return plan_duality(s, seed);
  if (c == "generalized_holder") return plan_generalized_holder(s, seed);
  if (c == "atom_certificates") return plan_atom_certificates(s, seed);
  if (c == "riesz_oracle") return plan_riesz_oracle(s, seed);
  if (c == "kernel_derivative") return plan_kernel_derivative(s, seed);
  if (c == "decay") return plan_decay(s, seed);
  if (c == "theorem") return plan_theorem(s, seed, false);
  if (c == "commutator_theorem") return plan_theorem(s, seed, true);
  if (c == "fefferman_stein") return plan_fefferman_stein(s, seed);
  if (c == "claim") return plan_claim(s, seed);
  if (c == "lh_validate") return plan_lh_validate(s, seed);
  throw Error("unknown check '" + c + "'");
}

bool in_drift(const TrialRow& r) { return r.extra.value("drift", true); }

double spread(double mx, double mn) {
  if (mn > 0.0) return mx / mn;
  return mx > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace

Aggregate aggregate_rows(const std::vector<TrialRow>& rows) {
  Aggregate a;
  a.rows = rows.size();
  bool any = false;
  std::map<std::string, std::map<std::string, double>> by_family;
  std::map<std::pair<std::string, std::size_t>, std::pair<double, double>> by_group;
  for (const auto& r : rows) {
    if (!r.error.empty()) ++a.errors;
    if (!r.ok) ++a.failed_rows;
    if (!r.error.empty()) continue;
    if (!any) {
      a.max_ratio = a.min_ratio = r.ratio;
      any = true;
    } else {
      a.max_ratio = std::max(a.max_ratio, r.ratio);
      a.min_ratio = std::min(a.min_ratio, r.ratio);
    }
    if (!in_drift(r)) continue;
    auto& fam = by_family[r.family];
    auto it = fam.find(r.variant);
    if (it == fam.end()) {
      fam.emplace(r.variant, r.ratio);
    } else {
      it->second = std::max(it->second, r.ratio);
    }
    const auto key = std::make_pair(r.family, r.group);
    auto g = by_group.find(key);
    if (g == by_group.end()) {
      by_group.emplace(key, std::make_pair(r.ratio, r.ratio));
    } else {
      g->second.first = std::max(g->second.first, r.ratio);
      g->second.second = std::min(g->second.second, r.ratio);
    }
  }
  for (const auto& [name, variants] : by_family) {
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& [v, c] : variants) {
      mx = std::max(mx, c);
      mn = std::min(mn, c);
    }
    a.drift = std::max(a.drift, spread(mx, mn));
  }
  for (const auto& [key, mm] : by_group) {
    a.max_seed_drift = std::max(a.max_seed_drift, spread(mm.first, mm.second));
  }
  return a;
}

void evaluate(SweepReport& report) {
  report.aggregate = aggregate_rows(report.rows);
  report.failures.clear();
  report.vacuous = report.rows.empty();
  if (report.vacuous) {
    report.pass = true;
    report.warnings.push_back("no trials were run; pass is vacuous");
    return;
  }
  const Json& t = report.scenario.thresholds;
  const Aggregate& a = report.aggregate;
  auto fail = [&](const std::string& why) { report.failures.push_back(why); };
  const std::size_t allowed = t.value("allow_errors", std::size_t{0});
  if (a.errors > allowed) fail(std::to_string(a.errors) + " trials raised errors");
  if (t.value("rows_ok", false) && a.failed_rows > a.errors) {
    fail(std::to_string(a.failed_rows - a.errors) + " rows failed their per-trial check");
  }
  if (t.contains("max_ratio") && !(a.max_ratio <= number_from_json(t.at("max_ratio")))) {
    fail("max ratio " + label(a.max_ratio) + " exceeds " + t.at("max_ratio").dump());
  }
  if (t.contains("min_ratio") && !(a.min_ratio >= number_from_json(t.at("min_ratio")))) {
    fail("min ratio " + label(a.min_ratio) + " below " + t.at("min_ratio").dump());
  }
  if (t.contains("max_drift") && !(a.drift <= number_from_json(t.at("max_drift")))) {
    fail("drift " + label(a.drift) + " exceeds " + t.at("max_drift").dump());
  }
  if (t.contains("max_seed_drift") &&
      !(a.max_seed_drift <= number_from_json(t.at("max_seed_drift")))) {
    fail("per-seed drift " + label(a.max_seed_drift) + " exceeds " +
         t.at("max_seed_drift").dump());
  }
  report.pass = report.failures.empty();
}

SweepReport run(const Scenario& scenario, const RunOptions& opt) {
  SweepReport report;
  report.scenario = scenario;
  if (opt.seed_override) report.scenario.seed = *opt.seed_override;
  report.bit_reproducible = opt.bit_reproducible;
  const auto& names = known_checks();
  if (std::find(names.begin(), names.end(), scenario.check) == names.end()) {
    throw Error("unknown check '" + scenario.check + "'");
  }
  const auto tasks = plan(report.scenario, report.scenario.seed);
  std::vector<std::vector<TrialRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].fn();
      } catch (const std::exception& e) {
        TrialRow r = tasks[i].meta;
        r.ok = false;
        r.error = e.what();
        r.lhs = r.rhs = r.ratio = std::numeric_limits<double>::quiet_NaN();
        results[i] = {r};
      }
    }
  };
  const std::size_t nthreads = std::max<std::size_t>(1, std::min(opt.threads, tasks.size()));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& rs : results) {
    for (auto& r : rs) {
      r.trial = report.rows.size();
      report.rows.push_back(std::move(r));
    }
  }
  evaluate(report);
  return report;
}

std::vector<Scenario> builtin_suite() {
  auto make = [](std::string name, std::string check, int criterion, Json params,
                 Json thresholds) {
    Scenario s;
    s.name = std::move(name);
    s.check = std::move(check);
    s.criterion = criterion;
    s.seed = 20240600 + static_cast<std::uint64_t>(criterion);
    s.params = std::move(params);
    s.thresholds = std::move(thresholds);
    return s;
  };
  const Json rows_ok = {{"rows_ok", true}};
  std::vector<Scenario> out;
  out.push_back(make("luxemburg_closed_form", "luxemburg", 1,
                     {{"trials", 200}, {"exponents", {1.5, 2.0, 3.0}}, {"tolerance", 1e-6}},
                     rows_ok));
  out.push_back(make("unit_ball", "unit_ball", 2, {{"trials", 200}, {"tolerance", 1e-4}}, rows_ok));
  out.push_back(make("holder_pairs", "holder", 3, {{"trials", 1000}, {"tolerance", 1e-6}},
                     {{"rows_ok", true}, {"max_ratio", 1.0 + 1e-6}}));
  out.push_back(make("duality_sandwich", "duality", 3,
                     {{"trials", 100}, {"g_trials", 20}, {"lower_tolerance", 1e-3},
                      {"upper_tolerance", 1e-6}},
                     rows_ok));
  out.push_back(make("generalized_holder_refinement", "generalized_holder", 4,
                     {{"trials", 500}, {"resolutions", {128, 256}}}, {{"max_drift", 2.0}}));
  out.push_back(make("atoms_plain", "atom_certificates", 5,
                     {{"flavor", "plain"}, {"count", 100}, {"tolerance", 1e-9}}, rows_ok));
  out.push_back(make("atoms_b_weighted", "atom_certificates", 5,
                     {{"flavor", "b_weighted"}, {"count", 100}, {"tolerance", 1e-9}}, rows_ok));
  out.push_back(make("riesz_half_interval", "riesz_oracle", 6,
                     {{"resolutions", {512, 2048}}, {"tolerances", {0.02, 0.005}}}, rows_ok));
  out.push_back(make("kernel_derivatives", "kernel_derivative", 7,
                     {{"alpha", 0.5}, {"samples", 200}, {"dilation", 2.0}},
                     {{"rows_ok", true}, {"max_seed_drift", 1.2}}));
  out.push_back(make("decay_plain", "decay", 8, {{"flavor", "plain"}, {"configs", 100}},
                     {{"max_drift", 1.5}}));
  out.push_back(make("decay_b_weighted", "decay", 8,
                     {{"flavor", "b_weighted"}, {"configs", 100}}, {{"max_drift", 1.5}}));
  out.push_back(make("theorem_sweep", "theorem", 9, {{"seeds", 50}}, {{"max_drift", 4.0}}));
  out.push_back(make("commutator_sweep", "commutator_theorem", 10, {{"seeds", 50}},
                     {{"max_drift", 4.0}, {"rows_ok", true}}));
  out.push_back(make("fefferman_stein_refinement", "fefferman_stein", 11,
                     {{"families", 20}, {"functions", 8}, {"lq", 2.0}, {"alphas", {0.0, 0.25}}},
                     {{"max_drift", 2.0}}));
  out.push_back(make("claim_scaling", "claim", 12, {{"seeds", 50}},
                     {{"max_seed_drift", 1.5}, {"rows_ok", true}}));
  out.push_back(make("log_holder_classifier", "lh_validate", 13, Json::object(), rows_ok));
  return out;
}

Json to_json(const SweepReport& r) {
  Json rows = Json::array();
  for (const auto& t : r.rows) {
    rows.push_back({{"trial", t.trial},
                    {"group", t.group},
                    {"family", t.family},
                    {"variant", t.variant},
                    {"seed", t.seed},
                    {"scale", t.scale},
                    {"resolution", t.resolution},
                    {"translation", t.translation},
                    {"lhs", number_to_json(t.lhs)},
                    {"rhs", number_to_json(t.rhs)},
                    {"ratio", number_to_json(t.ratio)},
                    {"ok", t.ok},
                    {"error", t.error},
                    {"extra", t.extra}});
  }
  const Aggregate& a = r.aggregate;
  return {{"scenario", to_json(r.scenario)},
          {"rows", rows},
          {"aggregate",
           {{"rows", a.rows},
            {"errors", a.errors},
            {"failed_rows", a.failed_rows},
            {"max_ratio", number_to_json(a.max_ratio)},
            {"min_ratio", number_to_json(a.min_ratio)},
            {"drift", number_to_json(a.drift)},
            {"max_seed_drift", number_to_json(a.max_seed_drift)}}},
          {"pass", r.pass},
          {"vacuous", r.vacuous},
          {"warnings", r.warnings},
          {"failures", r.failures},
          {"bit_reproducible", r.bit_reproducible}};
}

SweepReport sweep_from_json(const Json& j) {
  SweepReport r;
  r.scenario = scenario_from_json(j.at("scenario"));
  for (const auto& t : j.at("rows")) {
    TrialRow row;
    row.trial = t.at("trial").get<std::size_t>();
    row.group = t.at("group").get<std::size_t>();
    row.family = t.at("family").get<std::string>();
    row.variant = t.at("variant").get<std::string>();
    row.seed = t.at("seed").get<std::uint64_t>();
    row.scale = t.at("scale").get<double>();
    row.resolution = t.at("resolution").get<double>();
    row.translation = t.at("translation").get<double>();
    row.lhs = number_from_json(t.at("lhs"));
    row.rhs = number_from_json(t.at("rhs"));
    row.ratio = number_from_json(t.at("ratio"));
    row.ok = t.at("ok").get<bool>();
    row.error = t.at("error").get<std::string>();
    row.extra = t.at("extra");
    r.rows.push_back(std::move(row));
  }
  const Json& a = j.at("aggregate");
  r.aggregate.rows = a.at("rows").get<std::size_t>();
  r.aggregate.errors = a.at("errors").get<std::size_t>();
  r.aggregate.failed_rows = a.at("failed_rows").get<std::size_t>();
  r.aggregate.max_ratio = number_from_json(a.at("max_ratio"));
  r.aggregate.min_ratio = number_from_json(a.at("min_ratio"));
  r.aggregate.drift = number_from_json(a.at("drift"));
  r.aggregate.max_seed_drift = number_from_json(a.at("max_seed_drift"));
  r.pass = j.at("pass").get<bool>();
  r.vacuous = j.at("vacuous").get<bool>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.failures = j.at("failures").get<std::vector<std::string>>();
  r.bit_reproducible = j.value("bit_reproducible", false);
  return r;
}

}  // namespace varexp
