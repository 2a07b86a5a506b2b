#ifndef SUPERODE_TESTS_SUPPORT_HPP
#define SUPERODE_TESTS_SUPPORT_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"
#include "superode/parse.hpp"

namespace testing {

using namespace superode;

inline GrassmannElement random_element(std::mt19937_64& rng, std::size_t L, std::optional<Parity> parity = {},
                                       int range = 3) {
  std::uniform_int_distribution<int> coeff(-range, range);
  GrassmannElement g(L);
  for (const auto& idx : basis_monomials(L, parity)) {
    const int c = coeff(rng);
    if (c == 0) continue;
    Rational q(c, 1 + static_cast<int>(rng() % 3));
    q.canonicalize();
    g.add_term(idx, q);
  }
  return g;
}

// Dense model indexed by generator bitmasks; signs from counting inversions.
struct Dense {
  std::size_t L;
  std::vector<Rational> c;

  explicit Dense(std::size_t l) : L(l), c(std::size_t{1} << l) {}

  static Dense from(const GrassmannElement& g) {
    Dense d(g.budget());
    for (const auto& [idx, q] : g.terms()) {
      std::uint32_t mask = 0;
      for (auto k : idx.generators()) mask |= 1u << (k - 1);
      d.c[mask] += q;
    }
    return d;
  }

  static int sign(std::uint32_t a, std::uint32_t b) {
    int swaps = 0;
    for (std::uint32_t bits = b; bits; bits &= bits - 1) {
      const std::uint32_t low = bits & -bits;
      swaps += std::popcount(a & ~(low | (low - 1)));
    }
    return swaps % 2 ? -1 : 1;
  }

  Dense operator*(const Dense& o) const {
    Dense out(L);
    for (std::uint32_t a = 0; a < c.size(); ++a) {
      if (c[a] == 0) continue;
      for (std::uint32_t b = 0; b < o.c.size(); ++b)
        if (o.c[b] != 0 && (a & b) == 0) out.c[a | b] += sign(a, b) * c[a] * o.c[b];
    }
    return out;
  }

  bool operator==(const Dense& o) const = default;
};

inline NCPolynomial poly(const std::string& text, Policy policy, const ConstantRegistry* reg,
                         const std::vector<Variable>& vars) {
  return parse_polynomial(text, ParseContext{policy, reg, vars});
}

inline FlowSpec flow(Policy policy, const ConstantRegistry* reg, std::vector<Variable> vars,
                     const std::vector<std::pair<std::string, std::string>>& rhs) {
  std::map<std::string, NCPolynomial> eq;
  for (const auto& [name, text] : rhs) eq.emplace(name, poly(text, policy, reg, vars));
  const std::size_t L = reg ? reg->budget() : 0;
  return FlowSpec(policy, L, std::move(vars), std::move(eq));
}

inline const Variable X{"x", Parity::even};
inline const Variable XI{"xi", Parity::odd};

// Generalized Lienard flow with odd constants e and alpha.
struct Lienard {
  ConstantRegistry reg;
  FlowSpec F;

  explicit Lienard(std::size_t L = 2, const std::string& e = "e")
      : reg(make(L, e)),
        F(flow(Policy::supercommutative, &reg, {X, XI}, {{"x", "x + " + e + "*xi"}, {"xi", "alpha*x^2"}})) {}

  static ConstantRegistry make(std::size_t L, const std::string& e) {
    ConstantRegistry r(L);
    r.declare(e, Parity::odd);
    r.declare("alpha", Parity::odd);
    return r;
  }
  GrassmannElement c(const std::string& text) const { return parse_constant(text, reg); }
};

}  // namespace testing

#endif  // SUPERODE_TESTS_SUPPORT_HPP
