#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "riskgap/stl/parser.hpp"

namespace riskgap::stl {

/// Named scalar functions available to `functional` predicates.
using FunctionRegistry = std::map<std::string, ScalarFunction, std::less<>>;

/// Builds a table from the JSON object documented in schema/predicates.schema.json.
/// Unknown keys and unknown functions are errors (InvalidArgument).
PredicateTable predicate_table_from_json(const nlohmann::json& j, const FunctionRegistry& functions);
PredicateAtom predicate_from_json(const std::string& name, const nlohmann::json& j,
                                  const FunctionRegistry& functions);

}  // namespace riskgap::stl
