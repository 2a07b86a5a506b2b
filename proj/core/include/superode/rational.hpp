#ifndef SUPERODE_RATIONAL_HPP
#define SUPERODE_RATIONAL_HPP

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace superode {

/// Exact arbitrary-precision rational; every algebraic routine in the
/// library computes with this type.
using Rational = mpq_class;

/// Parses "p", "p/q", "-p/q" or a finite decimal such as "0.125".
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace superode

#endif  // SUPERODE_RATIONAL_HPP
