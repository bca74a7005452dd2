#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "varexp/atoms.hpp"
#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/maximal.hpp"
#include "varexp/report.hpp"

namespace varexp {

using Json = nlohmann::json;

/// Finite doubles as numbers, non-finite ones as "inf", "-inf" or "nan".
Json number_to_json(double v);
double number_from_json(const Json& j);

Json to_json(const ExponentField& p);          // {n, box, shape, samples, p_inf}
ExponentField exponent_from_json(const Json& j);

Json to_json(const GridFunction& f);           // {n, box, h, values}
GridFunction grid_function_from_json(const Json& j);

Json to_json(const Cube& q);                   // {center, side}
Cube cube_from_json(const Json& j);

Json to_json(const AtomCertificate& c);
AtomCertificate certificate_from_json(const Json& j);

/// {cube, d, flavor, size_bound, values_ref, certificate}; values stored separately.
Json atom_to_json(const Atom& a, const std::string& values_ref);

/// Writes one JSON file per atom (values inline under "values") and a manifest
/// {grid, flavor, terms: [{lambda, atom: file}]} to `dir`/`stem`.json.
void write_atomic_sum(const AtomicSum& sum, const std::filesystem::path& dir,
                      const std::string& stem);
AtomicSum read_atomic_sum(const std::filesystem::path& manifest);

Json to_json(const InequalityReport& r);       // {name, lhs, rhs, ratio, config, seed}
InequalityReport report_from_json(const Json& j);

Json to_json(const BumpDictionary& d);

}  // namespace varexp
