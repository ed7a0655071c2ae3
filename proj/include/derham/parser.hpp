#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "derham/ring.hpp"

namespace derham {

// Parse failure with a 1-based character position into the source string.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int position);
  int position;
};

// Grammar: sums and differences of products of powers.  Integer and rational
// literals (a/b with integer a, b), named variables, +, -, *, ^, parentheses.
// ^ binds tighter than *, which binds tighter than + and -.  No implicit
// multiplication; exponents are non-negative integer literals.
Polynomial parse_polynomial(const RingPtr& ctx, std::string_view src);

// Identifiers in order of first appearance; used to infer a default variable
// list when none is given.
std::vector<std::string> scan_identifiers(std::string_view src);

// Canonical rendering: terms in canonical order, coefficients as integers or
// a/b, unit coefficients and unit exponents elided.  parse . format = id.
std::string format_polynomial(const Polynomial& p);

}  // namespace derham
