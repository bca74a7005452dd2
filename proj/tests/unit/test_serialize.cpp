#include <cmath>
#include <limits>

#include "doctest.h"
#include "varexp/error.hpp"
#include "varexp/serialize.hpp"

using namespace varexp;

TEST_SUITE("serialize") {

TEST_CASE("non-finite numbers survive a round trip") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(number_to_json(inf) == "inf");
  CHECK(number_to_json(-inf) == "-inf");
  CHECK(number_to_json(std::nan("")) == "nan");
  CHECK(number_from_json(number_to_json(inf)) == inf);
  CHECK(number_from_json(number_to_json(-inf)) == -inf);
  CHECK(std::isnan(number_from_json(number_to_json(std::nan("")))));
  CHECK(number_from_json(number_to_json(0.1)) == 0.1);
  CHECK_THROWS_AS(number_from_json(Json("seven")), Error);
}

TEST_CASE("inequality report round trip") {
  InequalityReport r = make_report("holder", 1.5, 3.0, Json{{"p", 2}}, 42);
  const InequalityReport back = report_from_json(to_json(r));
  CHECK(back.name == "holder");
  CHECK(back.lhs == 1.5);
  CHECK(back.rhs == 3.0);
  CHECK(back.ratio == 0.5);
  CHECK(back.seed == 42);
  CHECK(back.config == r.config);
}

TEST_CASE("report ratio conventions") {
  const InequalityReport both = make_report("x", 0.0, 0.0);
  CHECK(both.ratio == 0.0);
  CHECK(both.degenerate);
  const InequalityReport rhs0 = make_report("x", 1.0, 0.0);
  CHECK(std::isinf(rhs0.ratio));
  CHECK(rhs0.degenerate);
  const InequalityReport back = report_from_json(to_json(rhs0));
  CHECK(std::isinf(back.ratio));
}

TEST_CASE("atom certificate round trip") {
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 32.0);
  const Atom a = make_atom(g, Cube({0.5}, 0.5), 1, 3);
  const AtomCertificate c = certificate_from_json(to_json(a.certificate));
  CHECK(c.moment_residuals == a.certificate.moment_residuals);
  CHECK(c.size_slack == a.certificate.size_slack);
  CHECK(c.seed_used == a.certificate.seed_used);
  const Json j = atom_to_json(a, "atom0.json");
  CHECK(j.at("values_ref") == "atom0.json");
  CHECK(j.at("d") == 1);
}

TEST_CASE("bump dictionary description") {
  const Grid g = Grid::over_box({0.0}, {1.0}, 1.0 / 32.0);
  const Json j = to_json(BumpDictionary::make(g));
  CHECK(j.contains("scales"));
  CHECK(j.contains("bumps"));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS(exponent_from_json(Json::object()));
  CHECK_THROWS(grid_function_from_json(Json{{"n", 1}}));
}

}
