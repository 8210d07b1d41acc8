#pragma once

#include <array>
#include <string>
#include <vector>

#include "caustics/mpoly.hpp"

namespace caustics {

/// Parse a polynomial over Q(i).  Grammar: + - * ^ with parentheses, integer
/// and p/q coefficient literals, the imaginary unit `i`, and the variables
/// listed in `allowed`.  There is no implicit multiplication: "2x" is a
/// syntax error.  Exponents are nonnegative integer literals.
MPoly parse_poly(const std::string& text, const std::vector<Var>& allowed);
/// All six variables allowed.
MPoly parse_poly(const std::string& text);

/// Parse a constant expression (no variables), e.g. "3/2", "1+i", "-i".
GaussianRational parse_coefficient(const std::string& text);

/// Parse "[a:b:c]" with constant-expression entries.
std::array<GaussianRational, 3> parse_triple(const std::string& text);
std::string triple_str(const std::array<GaussianRational, 3>& t);

}  // namespace caustics
