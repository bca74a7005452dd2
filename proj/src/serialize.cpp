#include "varexp/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "varexp/error.hpp"

namespace varexp {

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error("expected a number in JSON, got " + j.dump());
}

namespace {

Json box_to_json(const Point& lo, const Point& hi) {
  Json box = Json::array();
  for (std::size_t d = 0; d < lo.size(); ++d) box.push_back({lo[d], hi[d]});
  return box;
}

void box_from_json(const Json& j, Point& lo, Point& hi) {
  lo.clear();
  hi.clear();
  for (const auto& axis : j) {
    if (axis.size() != 2) throw Error("box entries must be [lo, hi] pairs");
    lo.push_back(axis[0].get<double>());
    hi.push_back(axis[1].get<double>());
  }
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return Json::parse(in);
}

void write_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

Json to_json(const ExponentField& p) {
  return {{"n", p.dim()},
          {"box", box_to_json(p.lo(), p.hi())},
          {"shape", p.shape()},
          {"samples", p.samples()},
          {"p_inf", p.p_inf()}};
}

ExponentField exponent_from_json(const Json& j) {
  Point lo, hi;
  box_from_json(j.at("box"), lo, hi);
  if (j.at("n").get<std::size_t>() != lo.size()) throw Error("exponent JSON: n does not match box");
  return ExponentField(lo, hi, j.at("shape").get<std::vector<std::size_t>>(),
                       j.at("samples").get<std::vector<double>>(), j.at("p_inf").get<double>());
}

Json to_json(const GridFunction& f) {
  const Grid& g = f.grid();
  return {{"n", g.dim()},
          {"box", box_to_json(g.lo(), g.hi())},
          {"h", g.h()},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

GridFunction grid_function_from_json(const Json& j) {
  Point lo, hi;
  box_from_json(j.at("box"), lo, hi);
  const Grid g = Grid::over_box(lo, hi, j.at("h").get<double>());
  return GridFunction(g, j.at("values").get<std::vector<double>>());
}

Json to_json(const Cube& q) { return {{"center", q.center()}, {"side", q.side()}}; }

Cube cube_from_json(const Json& j) {
  return Cube(j.at("center").get<Point>(), j.at("side").get<double>());
}

Json to_json(const AtomCertificate& c) {
  return {{"moment_residuals", c.moment_residuals},
          {"centered_residuals", c.centered_residuals},
          {"b_moment_residuals", c.b_moment_residuals},
          {"size_slack", c.size_slack},
          {"dropped", c.dropped},
          {"gram_condition", number_to_json(c.gram_condition)},
          {"ill_conditioned", c.ill_conditioned},
          {"seed_used", c.seed_used}};
}

AtomCertificate certificate_from_json(const Json& j) {
  AtomCertificate c;
  c.moment_residuals = j.at("moment_residuals").get<std::vector<double>>();
  c.centered_residuals = j.value("centered_residuals", std::vector<double>{});
  c.b_moment_residuals = j.at("b_moment_residuals").get<std::vector<double>>();
  c.size_slack = j.at("size_slack").get<double>();
  c.dropped = j.value("dropped", std::size_t{0});
  c.gram_condition = number_from_json(j.value("gram_condition", Json(1.0)));
  c.ill_conditioned = j.value("ill_conditioned", false);
  c.seed_used = j.value("seed_used", std::uint64_t{0});
  return c;
}

Json atom_to_json(const Atom& a, const std::string& values_ref) {
  return {{"cube", to_json(a.cube)},
          {"d", a.degree},
          {"flavor", to_string(a.flavor)},
          {"size_bound", a.size_bound},
          {"values_ref", values_ref},
          {"certificate", to_json(a.certificate)}};
}

void write_atomic_sum(const AtomicSum& sum, const std::filesystem::path& dir,
                      const std::string& stem) {
  std::filesystem::create_directories(dir);
  Json terms = Json::array();
  for (std::size_t k = 0; k < sum.terms.size(); ++k) {
    const auto& t = sum.terms[k];
    const std::string atom_file = stem + "_atom" + std::to_string(k) + ".json";
    const std::string values_file = stem + "_atom" + std::to_string(k) + "_values.json";
    write_file(dir / values_file, to_json(t.atom.values));
    write_file(dir / atom_file, atom_to_json(t.atom, values_file));
    terms.push_back({{"lambda", t.lambda}, {"atom", atom_file}});
  }
  const Grid& g = sum.grid;
  Json manifest = {{"grid", {{"n", g.dim()}, {"box", box_to_json(g.lo(), g.hi())}, {"h", g.h()}}},
                   {"flavor", to_string(sum.flavor)},
                   {"terms", terms}};
  write_file(dir / (stem + ".json"), manifest);
}

AtomicSum read_atomic_sum(const std::filesystem::path& manifest) {
  const Json m = read_file(manifest);
  const auto dir = manifest.parent_path();
  AtomicSum sum;
  Point lo, hi;
  box_from_json(m.at("grid").at("box"), lo, hi);
  sum.grid = Grid::over_box(lo, hi, m.at("grid").at("h").get<double>());
  sum.flavor = flavor_from_string(m.at("flavor").get<std::string>());
  for (const auto& t : m.at("terms")) {
    const Json aj = read_file(dir / t.at("atom").get<std::string>());
    Atom a;
    a.cube = cube_from_json(aj.at("cube"));
    a.degree = aj.at("d").get<int>();
    a.flavor = flavor_from_string(aj.at("flavor").get<std::string>());
    a.size_bound = aj.at("size_bound").get<double>();
    a.values = grid_function_from_json(read_file(dir / aj.at("values_ref").get<std::string>()));
    a.certificate = certificate_from_json(aj.at("certificate"));
    sum.add(t.at("lambda").get<double>(), std::move(a));
  }
  return sum;
}

Json to_json(const InequalityReport& r) {
  return {{"name", r.name},
          {"lhs", number_to_json(r.lhs)},
          {"rhs", number_to_json(r.rhs)},
          {"ratio", number_to_json(r.ratio)},
          {"degenerate", r.degenerate},
          {"config", r.config},
          {"seed", r.seed}};
}

InequalityReport report_from_json(const Json& j) {
  InequalityReport r;
  r.name = j.at("name").get<std::string>();
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.ratio = number_from_json(j.at("ratio"));
  r.degenerate = j.value("degenerate", false);
  r.config = j.value("config", Json::object());
  r.seed = j.value("seed", std::uint64_t{0});
  return r;
}

Json to_json(const BumpDictionary& d) {
  Json bumps = Json::array();
  for (const auto& b : d.bumps()) {
    bumps.push_back({{"power", b.power},
                     {"normalizer", b.normalizer},
                     {"integral_error", b.integral_error},
                     {"seminorm", b.seminorm}});
  }
  return {{"n", d.dim()},
          {"N", d.order()},
          {"scales", d.scales()},
          {"seminorm_cap", d.seminorm_cap()},
          {"certified", d.certified()},
          {"bumps", bumps}};
}

}  // namespace varexp
