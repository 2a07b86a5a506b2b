#ifndef SUPERODE_PARSE_HPP
#define SUPERODE_PARSE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"

namespace superode {

/// Names a parser may resolve: polynomial letters and registered constants.
struct ParseContext {
  Policy policy = Policy::supercommutative;
  const ConstantRegistry* constants = nullptr;
  std::vector<Variable> variables;
};

/// Parses sums of products such as "x + e*xi", "-1/2*alpha*x^2" or
/// "(x + y)^2". Exponents are non-negative integers; division is only
/// allowed by numbers.
NCPolynomial parse_polynomial(std::string_view text, const ParseContext& ctx);

/// Same grammar without letters; the result must be a pure constant.
GrassmannElement parse_constant(std::string_view text, const ConstantRegistry& constants);

/// Writes a coefficient using the registry's names where the element is a
/// product of declared constants, falling back to generator monomials.
std::string format_constant(const GrassmannElement& c, const ConstantRegistry& constants);

}  // namespace superode

#endif  // SUPERODE_PARSE_HPP
