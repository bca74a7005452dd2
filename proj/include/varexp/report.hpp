#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace varexp {

/// One inequality trial: LHS, RHS and the empirical constant LHS/RHS.
///
/// A trial with both sides zero reports ratio 0 and sets `degenerate`; a zero
/// RHS under a positive LHS reports an infinite ratio, also flagged.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
};

InequalityReport make_report(std::string name, double lhs, double rhs,
                             nlohmann::json config = nlohmann::json::object(),
                             std::uint64_t seed = 0);

}  // namespace varexp
