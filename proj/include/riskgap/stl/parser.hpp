#pragma once

#include <map>
#include <string>
#include <string_view>

#include "riskgap/stl/formula.hpp"

namespace riskgap::stl {

using PredicateTable = std::map<std::string, PredicateAtom, std::less<>>;

/// Parses the ASCII STL grammar:
///
///   or      := and ('|' and)*
///   and     := until ('&' until)*
///   until   := unary (('U' | 'R') interval? until)?      right associative
///   unary   := '!' unary | ('F' | 'G') interval? unary | primary
///   primary := 'T' | 'true' | 'false' | identifier | '(' or ')'
///   interval:= '[' int ',' (int | 'inf') ']'
///
/// A temporal operator without an interval is unbounded, [0, inf).
/// Throws SyntaxError or UnknownPredicate.
Formula parse_formula(std::string_view text, const PredicateTable& predicates);

}  // namespace riskgap::stl
