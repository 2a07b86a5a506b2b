#ifndef SUPERODE_GRASSMANN_HPP
#define SUPERODE_GRASSMANN_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "superode/errors.hpp"
#include "superode/rational.hpp"

namespace superode {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) noexcept {
  return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
constexpr bool is_odd(Parity p) noexcept { return p == Parity::odd; }
constexpr Parity parity_of_length(std::size_t n) noexcept { return n % 2 ? Parity::odd : Parity::even; }
/// (-1)^{|a||b|}
constexpr int koszul_sign(Parity a, Parity b) noexcept { return is_odd(a) && is_odd(b) ? -1 : 1; }

const char* to_string(Parity p) noexcept;
Parity parse_parity(const std::string& s);

/// Result of classifying an element by the lengths of its multi-indices.
enum class Grade { zero, even, odd, mixed };

const char* to_string(Grade g) noexcept;

/// Strictly increasing list of generator labels (1-based). The empty index
/// is the unit.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<std::uint32_t> gens);
  explicit MultiIndex(std::vector<std::uint32_t> gens);

  const std::vector<std::uint32_t>& generators() const noexcept { return gens_; }
  std::size_t size() const noexcept { return gens_.size(); }
  bool empty() const noexcept { return gens_.empty(); }
  Parity parity() const noexcept { return parity_of_length(gens_.size()); }
  std::uint32_t max_generator() const noexcept { return gens_.empty() ? 0 : gens_.back(); }

  /// Product of basis monomials: the merged index and the sign of the
  /// sorting permutation, or nullopt when a generator repeats.
  static std::optional<std::pair<int, MultiIndex>> multiply(const MultiIndex& a, const MultiIndex& b);

  /// Graded-lexicographic: shorter indices first.
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

  std::string to_string() const;

 private:
  std::vector<std::uint32_t> gens_;
};

/// Element of the Grassmann algebra with L generators over the rationals.
class GrassmannElement {
 public:
  using Terms = std::map<MultiIndex, Rational>;

  explicit GrassmannElement(std::size_t budget = 0) : budget_(budget) {}

  static GrassmannElement scalar(std::size_t budget, const Rational& q);
  /// The i-th generator, 1 <= i <= budget; throws BudgetExhausted otherwise.
  static GrassmannElement generator(std::size_t budget, std::uint32_t i);
  static GrassmannElement monomial(std::size_t budget, const MultiIndex& idx, const Rational& q);

  std::size_t budget() const noexcept { return budget_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Grade grade() const noexcept;
  /// Coefficient of the unit monomial.
  Rational body() const;
  Rational coefficient(const MultiIndex& idx) const;

  GrassmannElement even_part() const;
  GrassmannElement odd_part() const;
  /// Grade involution applied p times: odd terms flip sign when p is odd.
  GrassmannElement twisted(Parity p) const;
  /// Same element viewed in a larger algebra.
  GrassmannElement with_budget(std::size_t budget) const;

  void add_term(const MultiIndex& idx, const Rational& q);

  GrassmannElement& operator+=(const GrassmannElement& other);
  GrassmannElement& operator-=(const GrassmannElement& other);
  GrassmannElement& operator*=(const Rational& q);
  GrassmannElement operator-() const;

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
  friend GrassmannElement operator*(GrassmannElement a, const Rational& q) { return a *= q; }
  friend GrassmannElement operator*(const Rational& q, GrassmannElement a) { return a *= q; }

  bool operator==(const GrassmannElement& other) const;

  std::string to_string() const;

 private:
  void check_budget(const GrassmannElement& other, const char* op) const;

  std::size_t budget_;
  Terms terms_;
};

/// Every multi-index of the given parity over generators 1..L, graded-lex order.
std::vector<MultiIndex> basis_monomials(std::size_t budget, std::optional<Parity> parity = std::nullopt);

/// Every multi-index drawn from a subset of generators.
std::vector<MultiIndex> monomials_over(const std::vector<std::uint32_t>& generators,
                                       std::optional<Parity> parity = std::nullopt);

/// Point of the flat superspace: p even entries followed by q odd entries.
class SuperVector {
 public:
  SuperVector() = default;
  SuperVector(std::size_t p, std::size_t q, std::vector<GrassmannElement> entries);

  static SuperVector zero(std::size_t p, std::size_t q, std::size_t budget);

  std::size_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t budget() const noexcept { return budget_; }
  Parity slot_parity(std::size_t i) const noexcept { return i < p_ ? Parity::even : Parity::odd; }

  const GrassmannElement& operator[](std::size_t i) const { return entries_.at(i); }
  const std::vector<GrassmannElement>& entries() const noexcept { return entries_; }
  void set(std::size_t i, GrassmannElement value);

  bool is_zero() const noexcept;

  SuperVector& operator+=(const SuperVector& other);
  SuperVector& operator-=(const SuperVector& other);
  SuperVector& operator*=(const Rational& q);
  friend SuperVector operator+(SuperVector a, const SuperVector& b) { return a += b; }
  friend SuperVector operator-(SuperVector a, const SuperVector& b) { return a -= b; }
  friend SuperVector operator*(const Rational& q, SuperVector a) { return a *= q; }
  /// Left multiplication of every entry by an even scalar.
  friend SuperVector operator*(const GrassmannElement& s, const SuperVector& v);

  bool operator==(const SuperVector& other) const;

  std::string to_string() const;

 private:
  void check_shape(const SuperVector& other) const;

  std::size_t p_ = 0;
  std::size_t q_ = 0;
  std::size_t budget_ = 0;
  std::vector<GrassmannElement> entries_;
};

/// Allocates generators for named constants: an odd constant is a single
/// fresh generator, an even non-real constant the product of two fresh ones.
class ConstantRegistry {
 public:
  explicit ConstantRegistry(std::size_t budget) : budget_(budget) {}

  const GrassmannElement& declare(const std::string& name, Parity parity);
  const GrassmannElement* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }

  std::size_t budget() const noexcept { return budget_; }
  std::uint32_t generators_used() const noexcept { return next_ - 1; }
  /// Generator labels owned by the constant.
  const std::vector<std::uint32_t>& generators_of(const std::string& name) const;
  Parity parity_of(const std::string& name) const;
  /// Declaration order.
  const std::vector<std::string>& names() const noexcept { return order_; }

 private:
  struct Entry {
    GrassmannElement value;
    Parity parity;
    std::vector<std::uint32_t> generators;
  };
  std::size_t budget_;
  std::uint32_t next_ = 1;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

}  // namespace superode

#endif  // SUPERODE_GRASSMANN_HPP
