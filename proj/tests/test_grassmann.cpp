#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "superode/grassmann.hpp"
#include "superode/linalg.hpp"
#include "support.hpp"

using namespace superode;
using testing::Dense;

namespace {

GrassmannElement gen(std::size_t L, std::uint32_t i) { return GrassmannElement::generator(L, i); }

}  // namespace

TEST_CASE("basis products") {
  const auto b1 = gen(2, 1), b2 = gen(2, 2);
  CHECK(b1 * b2 == GrassmannElement::monomial(2, {1, 2}, 1));
  CHECK((b1 * b1).is_zero());
  CHECK(b2 * b1 == GrassmannElement::monomial(2, {1, 2}, -1));
  CHECK((b1 * b2).to_string() == "b_1_2");
}

TEST_CASE("product of two odd constants is even") {
  ConstantRegistry reg(2);
  const auto gamma = reg.declare("gamma", Parity::odd);
  const auto alpha = reg.declare("alpha", Parity::odd);
  CHECK(gamma.grade() == Grade::odd);
  CHECK((gamma * alpha).grade() == Grade::even);
  CHECK(gamma * alpha == -(alpha * gamma));
}

TEST_CASE("grade") {
  CHECK(GrassmannElement::scalar(2, 1).grade() == Grade::even);
  CHECK((gen(2, 1) + gen(2, 2)).grade() == Grade::odd);
  CHECK((GrassmannElement::scalar(2, 1) + gen(2, 1)).grade() == Grade::mixed);
  CHECK(GrassmannElement(2).grade() == Grade::zero);
}

TEST_CASE("body") {
  CHECK((GrassmannElement::scalar(2, 3) + 2 * GrassmannElement::monomial(2, {1, 2}, 1)).body() == 3);
  CHECK(gen(2, 1).body() == 0);
}

TEST_CASE("budget errors") {
  CHECK_THROWS_AS(gen(2, 3), BudgetExhausted);
  CHECK_THROWS_AS(gen(2, 1) * gen(3, 1), BudgetMismatch);
  CHECK_THROWS_AS(gen(2, 1) + gen(3, 1), BudgetMismatch);
  ConstantRegistry reg(3);
  reg.declare("a", Parity::even);
  reg.declare("b", Parity::odd);
  CHECK(reg.generators_used() == 3);
  CHECK_THROWS_AS(reg.declare("c", Parity::odd), BudgetExhausted);
}

TEST_CASE("registry: even constants are products of two generators") {
  ConstantRegistry reg(4);
  const auto a = reg.declare("a", Parity::even);
  const auto b = reg.declare("b", Parity::odd);
  CHECK(a == GrassmannElement::monomial(4, {1, 2}, 1));
  CHECK(b == gen(4, 3));
  CHECK(reg.parity_of("a") == Parity::even);
  CHECK(reg.generators_of("b") == std::vector<std::uint32_t>{3});
  CHECK(a * b == b * a);
}

TEST_CASE("multi-index ordering is graded lexicographic") {
  CHECK(MultiIndex{} < MultiIndex{3});
  CHECK(MultiIndex{3} < MultiIndex{1, 2});
  CHECK(MultiIndex{1, 2} < MultiIndex{1, 3});
  const auto all = basis_monomials(3);
  CHECK(all.size() == 8);
  CHECK(basis_monomials(3, Parity::odd).size() == 4);
  CHECK(std::is_sorted(all.begin(), all.end()));
}

TEST_CASE("products agree with a dense bitmask model") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 300; ++n) {
    const std::size_t L = 1 + rng() % 5;
    const auto a = testing::random_element(rng, L), b = testing::random_element(rng, L);
    CHECK(Dense::from(a * b) == Dense::from(a) * Dense::from(b));
  }
}

TEST_CASE("algebra axioms on random triples") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const std::size_t L = 1 + rng() % 4;
    const auto a = testing::random_element(rng, L), b = testing::random_element(rng, L),
               c = testing::random_element(rng, L);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE((a * b).body() == a.body() * b.body());

    const auto ao = a.odd_part(), bo = b.odd_part(), ae = a.even_part();
    REQUIRE(ao * bo == -(bo * ao));
    REQUIRE(ae * b == b * ae);
    REQUIRE((ao * ao).is_zero());
  }
}

TEST_CASE("twist and budget lift") {
  std::mt19937_64 rng(3);
  const auto a = testing::random_element(rng, 3);
  CHECK(a.twisted(Parity::odd) == a.even_part() - a.odd_part());
  CHECK(a.twisted(Parity::even) == a);
  const auto b = testing::random_element(rng, 3);
  CHECK(a.with_budget(5).budget() == 5);
  CHECK((a * b).with_budget(5) == a.with_budget(5) * b.with_budget(5));
  CHECK_THROWS_AS(gen(3, 3).with_budget(2), BudgetExhausted);
}

TEST_CASE("super vectors") {
  const auto zero = SuperVector::zero(1, 1, 2);
  CHECK(zero.is_zero());
  CHECK_THROWS_AS(SuperVector(1, 1, {gen(2, 1), gen(2, 2)}), ParityError);
  const SuperVector v(1, 1, {GrassmannElement::scalar(2, 1), gen(2, 1)});
  CHECK((v + v) == Rational(2) * v);
  CHECK_THROWS_AS(v + SuperVector::zero(2, 0, 2), DimensionMismatch);
}

TEST_CASE("rationals") {
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("exact linear algebra") {
  RationalMatrix m(3, 3, Rational(0));
  m(0, 0) = 2; m(0, 1) = 1;
  m(1, 1) = 3; m(1, 2) = -1;
  m(2, 0) = 4; m(2, 1) = 5; m(2, 2) = -1;
  CHECK(rank(m) == 2);
  const auto ns = nullspace(m);
  REQUIRE(ns.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    Rational s = 0;
    for (std::size_t k = 0; k < 3; ++k) s += m(i, k) * ns[0][k];
    CHECK(s == 0);
  }
  CHECK(determinant(m) == 0);
  CHECK_THROWS_AS(inverse(m), SingularMatrix);
  m(2, 2) = 0;
  const auto inv = inverse(m);
  CHECK(m * inv == RationalMatrix::identity(3, Rational(0), Rational(1)));
}
