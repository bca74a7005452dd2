#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "varexp/error.hpp"
#include "varexp/harness.hpp"

using namespace varexp;

namespace {

Scenario holder_const(std::size_t trials) {
  Scenario s;
  s.name = "holder_const";
  s.check = "holder";
  s.seed = 7;
  s.params = {{"trials", trials}, {"exponent", {{"type", "constant"}, {"value", 2.0}}}};
  s.thresholds = {{"rows_ok", true}, {"max_ratio", 1.0 + 1e-6}};
  return s;
}

Scenario atoms_with_degrees(Json degrees) {
  Scenario s;
  s.name = "atoms";
  s.check = "atom_certificates";
  s.seed = 11;
  s.params = {{"count", 10}, {"degrees", std::move(degrees)}, {"sides", {0.25}}};
  s.thresholds = {{"rows_ok", true}};
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("varexp_unit_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("a scenario without trials is a vacuous pass") {
  const SweepReport r = run(holder_const(0));
  CHECK(r.rows.empty());
  CHECK(r.pass);
  CHECK(r.vacuous);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("Hoelder with p = 2 stays below 1 over 100 trials") {
  const SweepReport r = run(holder_const(100));
  REQUIRE(r.rows.size() == 100);
  CHECK(r.pass);
  for (const auto& row : r.rows) CHECK(row.ratio <= 1.0 + 1e-6);
  CHECK(r.aggregate.max_ratio <= 1.0 + 1e-6);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  const Scenario s = holder_const(40);
  const Json a = to_json(run(s));
  const Json b = to_json(run(s));
  RunOptions opt;
  opt.threads = 3;
  const Json c = to_json(run(s, opt));
  CHECK(a.dump() == b.dump());
  CHECK(a.at("rows").dump() == c.at("rows").dump());
}

TEST_CASE("seed override changes the trial seeds") {
  RunOptions opt;
  opt.seed_override = 99;
  const SweepReport a = run(holder_const(3));
  const SweepReport b = run(holder_const(3), opt);
  CHECK(a.rows[0].seed != b.rows[0].seed);
}

TEST_CASE("a failing trial becomes an error row and others are unaffected") {
  const SweepReport bad = run(atoms_with_degrees({0, 40}));
  const SweepReport good = run(atoms_with_degrees({0, 0}));
  REQUIRE(bad.rows.size() == 10);
  CHECK(bad.aggregate.errors == 5);
  CHECK_FALSE(bad.pass);
  for (std::size_t t = 0; t < 10; ++t) {
    if (t % 2 == 1) {
      CHECK(bad.rows[t].error.find("insufficient resolution") != std::string::npos);
      CHECK(std::isnan(bad.rows[t].ratio));
    } else {
      CHECK(bad.rows[t].error.empty());
      CHECK(bad.rows[t].ratio == good.rows[t].ratio);
      CHECK(bad.rows[t].seed == good.rows[t].seed);
    }
  }
  Scenario tolerant = atoms_with_degrees({0, 40});
  tolerant.thresholds = {{"allow_errors", 5}};
  CHECK(run(tolerant).pass);
}

TEST_CASE("evaluate applies thresholds to an existing report") {
  SweepReport r = run(holder_const(10));
  CHECK(r.pass);
  r.scenario.thresholds["max_ratio"] = 1e-9;
  evaluate(r);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.failures.empty());
}

TEST_CASE("unknown checks and malformed scenarios are rejected") {
  Scenario s = holder_const(1);
  s.check = "no_such_check";
  CHECK_THROWS_AS(run(s), Error);
  CHECK_THROWS(scenario_from_json(Json{{"name", "x"}}));
}

TEST_CASE("scenario and report JSON round trip") {
  const Scenario s = holder_const(5);
  const Scenario s2 = scenario_from_json(to_json(s));
  CHECK(to_json(s2) == to_json(s));
  const SweepReport r = run(s);
  const SweepReport back = sweep_from_json(to_json(r));
  CHECK(to_json(back).dump() == to_json(r).dump());
}

TEST_CASE("emit json and csv for three trials") {
  const auto dir = scratch("emit");
  const SweepReport r = run(holder_const(3));
  const auto paths = emit(r, dir, {"json", "csv"});
  CHECK(paths.size() == 2);
  CHECK(std::filesystem::exists(dir / "holder_const.json"));
  const Json j = Json::parse(slurp(dir / "holder_const.json"));
  CHECK(j.at("rows").size() == 3);
  std::istringstream csv(slurp(dir / "holder_const.csv"));
  std::string line;
  std::size_t lines = 0;
  std::getline(csv, line);
  CHECK(line.rfind("trial,group,family,variant,seed", 0) == 0);
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 3);
  CHECK_FALSE(std::filesystem::exists(dir / "holder_const.svg"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg with a single scale has one point per resolution") {
  const auto dir = scratch("svg");
  const SweepReport r = run(holder_const(4));
  emit(r, dir, {"svg"});
  const std::string svg = slurp(dir / "holder_const.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t points = 0;
  for (std::size_t pos = svg.find("class=\"point\""); pos != std::string::npos;
       pos = svg.find("class=\"point\"", pos + 1)) {
    ++points;
  }
  CHECK(points == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit reports unwritable destinations and unknown formats") {
  const SweepReport r = run(holder_const(1));
  CHECK_THROWS_AS(emit(r, "/dev/null/sub", {"json"}), Error);
  CHECK_THROWS_AS(emit(r, scratch("fmt"), {"xml"}), Error);
}

TEST_CASE("builtin suite covers every criterion with known checks") {
  const auto suite = builtin_suite();
  std::set<int> criteria;
  for (const auto& s : suite) {
    criteria.insert(s.criterion);
    CHECK(std::find(known_checks().begin(), known_checks().end(), s.check) != known_checks().end());
  }
  CHECK(criteria.size() == 13);
  CHECK(*criteria.begin() == 1);
  CHECK(*criteria.rbegin() == 13);
}

}
