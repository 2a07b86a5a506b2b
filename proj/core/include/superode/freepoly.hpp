#ifndef SUPERODE_FREEPOLY_HPP
#define SUPERODE_FREEPOLY_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "superode/grassmann.hpp"

namespace superode {

/// How letters of a word interact.
enum class Policy {
  free,             ///< letters never move; words are kept verbatim
  supercommutative  ///< letters are sorted with Koszul signs; odd letters square to zero
};

const char* to_string(Policy p) noexcept;
Policy parse_policy(const std::string& s);

enum class Role { dynamic, direction };

struct Variable {
  std::string name;
  Parity parity = Parity::even;
  Role role = Role::dynamic;

  bool operator==(const Variable& o) const { return name == o.name && parity == o.parity; }
  std::strong_ordering operator<=>(const Variable& o) const { return name <=> o.name; }
};

/// Ordered product of letters; empty is the unit monomial.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Variable> letters) : letters_(letters) {}
  explicit Word(std::vector<Variable> letters) : letters_(std::move(letters)) {}

  const std::vector<Variable>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const Variable& operator[](std::size_t i) const { return letters_[i]; }
  Parity parity() const noexcept;
  std::size_t count(const std::string& name) const;

  Word slice(std::size_t from, std::size_t to) const;
  friend Word operator*(const Word& a, const Word& b);

  /// Canonical form under a policy: sign and word, or nullopt when zero.
  static std::optional<std::pair<int, Word>> normalize(Word w, Policy policy);

  /// Length first, then letter names.
  std::strong_ordering operator<=>(const Word& o) const;
  bool operator==(const Word& o) const;

  /// "x^2*xi"; "1" for the unit.
  std::string to_string() const;

 private:
  std::vector<Variable> letters_;
};

/// Renders a coefficient; the default prints generator monomials b_i.
using CoefficientPrinter = std::function<std::string(const GrassmannElement&)>;

/// Polynomial in graded letters with Grassmann coefficients placed to the left
/// of each word. All coefficients share one generator budget.
class NCPolynomial {
 public:
  using Terms = std::map<Word, GrassmannElement>;

  NCPolynomial(Policy policy, std::size_t budget) : policy_(policy), budget_(budget) {}

  static NCPolynomial constant(Policy policy, const GrassmannElement& c);
  static NCPolynomial scalar(Policy policy, std::size_t budget, const Rational& q);
  static NCPolynomial variable(Policy policy, std::size_t budget, const Variable& v);
  static NCPolynomial monomial(Policy policy, const GrassmannElement& c, const Word& w);

  Policy policy() const noexcept { return policy_; }
  std::size_t budget() const noexcept { return budget_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Adds c*w after normalizing w under the policy.
  void add_term(const Word& w, const GrassmannElement& c);
  GrassmannElement coefficient(const Word& w) const;

  std::size_t degree() const noexcept;
  /// Degree counted only over letters with the given names.
  std::optional<std::size_t> homogeneous_degree_in(const std::vector<std::string>& names) const;
  /// Parity of the polynomial: zero, even, odd or mixed.
  Grade grade() const noexcept;
  /// Letters occurring anywhere, by name.
  std::map<std::string, Variable> letters() const;

  NCPolynomial& operator+=(const NCPolynomial& o);
  NCPolynomial& operator-=(const NCPolynomial& o);
  NCPolynomial& operator*=(const Rational& q);
  NCPolynomial operator-() const;
  friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial& b) { return a += b; }
  friend NCPolynomial operator-(NCPolynomial a, const NCPolynomial& b) { return a -= b; }
  friend NCPolynomial operator*(NCPolynomial a, const Rational& q) { return a *= q; }
  friend NCPolynomial operator*(const Rational& q, NCPolynomial a) { return a *= q; }
  /// Associative product; coefficients pass letters with Koszul signs.
  friend NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b);

  bool operator==(const NCPolynomial& o) const;

  std::string to_string(const CoefficientPrinter& printer = {}) const;

 private:
  void check_compatible(const NCPolynomial& o, const char* op) const;

  Policy policy_;
  std::size_t budget_;
  Terms terms_;
};

/// First-order system: one rhs polynomial per dynamic variable.
class FlowSpec {
 public:
  FlowSpec(Policy policy, std::size_t budget) : policy_(policy), budget_(budget) {}
  /// Validates unique names, matching policies and rhs parity.
  FlowSpec(Policy policy, std::size_t budget, std::vector<Variable> variables,
           std::map<std::string, NCPolynomial> rhs);

  Policy policy() const noexcept { return policy_; }
  std::size_t budget() const noexcept { return budget_; }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::map<std::string, NCPolynomial>& equations() const noexcept { return rhs_; }

  bool has(const std::string& name) const { return rhs_.count(name) != 0; }
  const Variable& variable(const std::string& name) const;
  const NCPolynomial& rhs(const std::string& name) const;
  std::size_t degree() const noexcept;

  bool operator==(const FlowSpec& o) const = default;

 private:
  Policy policy_;
  std::size_t budget_;
  std::vector<Variable> variables_;
  std::map<std::string, NCPolynomial> rhs_;
};

using Substitution = std::map<std::string, NCPolynomial>;

enum class SubstitutionMode {
  total,   ///< every letter of p must have an image
  partial  ///< letters without an image are kept
};

/// Homomorphic image of p with every letter replaced by its image.
NCPolynomial substitute(const NCPolynomial& p, const Substitution& sigma,
                        SubstitutionMode mode = SubstitutionMode::total);

/// Even derivation extending x -> F.rhs(x) by the Leibniz rule; coefficients
/// and direction letters not governed by F are constants.
NCPolynomial derivation_apply(const FlowSpec& flow, const NCPolynomial& p);

/// Part of p(X + eps*delta) linear in eps: each occurrence of X[i] replaced
/// by delta[i] in turn.
NCPolynomial frechet(const NCPolynomial& p, const std::vector<Variable>& vars, const std::vector<Variable>& directions);

/// beta(X, Y) = 1/2 [Q(X+Y) - Q(X) - Q(Y)] for Q homogeneous quadratic in vars.
NCPolynomial polarize(const NCPolynomial& q, const std::vector<Variable>& vars, const std::vector<Variable>& copies);

/// Bilinear product on a finite real basis given by structure constants,
/// used to model deformed products of matrix-valued variables.
class ProductTable {
 public:
  explicit ProductTable(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  void set(std::size_t i, std::size_t j, std::vector<Rational> image);
  const std::vector<Rational>& get(std::size_t i, std::size_t j) const;

  std::vector<Rational> apply(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
  bool is_associative() const;
  bool is_commutative() const;

  /// Ordinary product of n x n matrices in the basis of matrix units.
  static ProductTable matrix_units(std::size_t n);

 private:
  std::size_t dim_;
  std::vector<std::vector<Rational>> table_;
};

}  // namespace superode

#endif  // SUPERODE_FREEPOLY_HPP
