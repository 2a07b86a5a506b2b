#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "superode/freepoly.hpp"
#include "superode/parse.hpp"
#include "support.hpp"

using namespace superode;
using testing::poly;
using testing::X;
using testing::XI;

namespace {

const Variable X1{"X1", Parity::even}, X2{"X2", Parity::even};
const Variable Y{"y", Parity::even}, Z{"z", Parity::even};

// Evaluates a real polynomial in commuting letters at a rational point.
Rational eval_at(const NCPolynomial& p, const std::map<std::string, Rational>& at) {
  Substitution s;
  for (const auto& [name, q] : at) s.emplace(name, NCPolynomial::scalar(p.policy(), p.budget(), q));
  return substitute(p, s, SubstitutionMode::partial).coefficient(Word{}).body();
}

}  // namespace

TEST_CASE("supercommutative normal form") {
  const auto sc = Policy::supercommutative;
  const auto x = NCPolynomial::variable(sc, 0, X), xi = NCPolynomial::variable(sc, 0, XI);
  CHECK(x * xi == xi * x);
  CHECK((xi * xi).is_zero());
  const Variable eta{"eta", Parity::odd};
  const auto e = NCPolynomial::variable(sc, 0, eta);
  CHECK(xi * e == -(e * xi));
  CHECK((x * xi * x).to_string() == "x^2*xi");
}

TEST_CASE("free policy keeps words verbatim") {
  const auto fr = Policy::free;
  const auto a = NCPolynomial::variable(fr, 0, X1), b = NCPolynomial::variable(fr, 0, X2);
  const auto w = a * b * a;
  REQUIRE(w.terms().size() == 1);
  CHECK(w.terms().begin()->first.to_string() == "X1*X2*X1");
  CHECK(a * b != b * a);
  CHECK_THROWS_AS(a * NCPolynomial::variable(Policy::supercommutative, 0, X2), PolicyMismatch);
}

TEST_CASE("parser") {
  const std::vector<Variable> vars{X1, X2};
  const auto sq = poly("(X1 + X2)^2", Policy::free, nullptr, vars);
  CHECK(sq == poly("X1^2 + X1*X2 + X2*X1 + X2^2", Policy::free, nullptr, vars));
  CHECK(poly("X1/2 - 0.5*X1", Policy::free, nullptr, vars).is_zero());
  CHECK_THROWS_AS(poly("X3", Policy::free, nullptr, vars), InputError);
  CHECK_THROWS_AS(poly("X1/X2", Policy::free, nullptr, vars), InputError);
  CHECK_THROWS_AS(poly("X1 +", Policy::free, nullptr, vars), InputError);

  testing::Lienard l;
  CHECK(format_constant(l.c("-1/2*e*alpha"), l.reg) == "-1/2*e*alpha");
  CHECK(format_constant(l.c("alpha*e"), l.reg) == "-e*alpha");
  CHECK(l.F.rhs("x").to_string([&](const GrassmannElement& c) { return format_constant(c, l.reg); }) ==
        "x + (e)*xi");
}

TEST_CASE("flow validation") {
  ConstantRegistry reg(2);
  reg.declare("gamma", Parity::odd);
  reg.declare("alpha", Parity::odd);
  const Variable xi_even{"xi", Parity::even};
  CHECK_THROWS_AS(testing::flow(Policy::supercommutative, &reg, {X, xi_even}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}}),
                  ParityError);
  CHECK_THROWS_AS(testing::flow(Policy::supercommutative, &reg, {X}, {{"x", "x"}, {"xi", "alpha*x^2"}}), InputError);
  CHECK(testing::flow(Policy::supercommutative, &reg, {X, XI}, {{"x", "x"}}).rhs("xi").is_zero());
  const auto f = testing::flow(Policy::supercommutative, &reg, {X, XI}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}});
  CHECK(f.degree() == 2);
}

TEST_CASE("substitution") {
  testing::Lienard l;
  const auto sc = Policy::supercommutative;
  const auto p = poly("x + e*xi", sc, &l.reg, {X, XI});
  CHECK(substitute(p, {{"x", NCPolynomial(sc, 2)}, {"xi", NCPolynomial(sc, 2)}}).is_zero());
  CHECK_THROWS_AS(substitute(p, {{"x", NCPolynomial(sc, 2)}}), InputError);
  CHECK_THROWS_AS(substitute(p, {{"x", NCPolynomial::constant(sc, l.c("e"))}, {"xi", NCPolynomial(sc, 2)}}),
                  ParityError);
}

TEST_CASE("substitution of Grassmann values matches direct multiplication") {
  ConstantRegistry reg(3);
  const auto gamma = reg.declare("gamma", Parity::odd);
  reg.declare("alpha", Parity::odd);
  const auto eta = reg.declare("eta", Parity::odd);
  const Variable t{"t", Parity::even};
  const auto sc = Policy::supercommutative;
  // x(0) = 3/2, u(0) = 2, xi(0) = eta
  const auto image = poly("3/2 + 2*gamma*eta*t", sc, &reg, {t});
  const auto sq = substitute(poly("x^2", sc, &reg, {X}), {{"x", image}});
  const GrassmannElement x0 = GrassmannElement::scalar(3, Rational(3, 2));
  const GrassmannElement lin = Rational(2) * gamma * eta;
  CHECK(sq.coefficient(Word{}) == x0 * x0);
  CHECK(sq.coefficient(Word{t}) == x0 * lin + lin * x0);
  CHECK(sq.coefficient(Word{t, t}).is_zero());
}

TEST_CASE("derivations") {
  testing::Lienard l;
  const auto sc = Policy::supercommutative;
  CHECK(derivation_apply(l.F, poly("x^2", sc, &l.reg, {X, XI})) ==
        poly("(x + e*xi)*x + x*(x + e*xi)", sc, &l.reg, {X, XI}));
  CHECK(derivation_apply(l.F, NCPolynomial::constant(sc, l.c("e"))).is_zero());
  // D(x xi) by the graded Leibniz rule: x is even, so no sign
  CHECK(derivation_apply(l.F, poly("x*xi", sc, &l.reg, {X, XI})) ==
        poly("(x + e*xi)*xi + x*alpha*x^2", sc, &l.reg, {X, XI}));
}

TEST_CASE("cubic system dictionary check through derivations") {
  const std::vector<Variable> xs{X1, X2};
  const auto f = testing::flow(Policy::free, nullptr, xs, {{"X1", "X1^2*X2 + X2*X1^2"}, {"X2", "X1^3"}});
  const Variable y1{"Y1"}, y2{"Y2"}, y4{"Y4"}, y3{"Y3"};
  const auto rhs = poly("Y1*Y2 + Y4*Y3 + Y1^2", Policy::free, nullptr, {y1, y2, y3, y4});
  const Substitution dict{{"Y1", poly("X1^2", Policy::free, nullptr, xs)},
                          {"Y2", poly("X2^2", Policy::free, nullptr, xs)},
                          {"Y3", poly("X1*X2", Policy::free, nullptr, xs)},
                          {"Y4", poly("X2*X1", Policy::free, nullptr, xs)}};
  CHECK(substitute(rhs, dict) == derivation_apply(f, poly("X1*X2", Policy::free, nullptr, xs)));
}

TEST_CASE("Frechet derivative") {
  testing::Lienard l;
  const auto sc = Policy::supercommutative;
  const Variable dx{"dx", Parity::even}, dxi{"dxi", Parity::odd};
  const std::vector<Variable> all{X, XI, dx, dxi};
  CHECK(frechet(poly("x^2", sc, &l.reg, {X}), {X, XI}, {dx, dxi}) == poly("dx*x + x*dx", sc, &l.reg, all));
  CHECK(frechet(l.F.rhs("x"), {X, XI}, {dx, dxi}) == poly("dx + e*dxi", sc, &l.reg, all));
  CHECK(frechet(l.F.rhs("xi"), {X, XI}, {dx, dxi}) == poly("alpha*dx*x + alpha*x*dx", sc, &l.reg, all));
  CHECK_THROWS_AS(frechet(l.F.rhs("x"), {X, XI}, {dx, dx}), ParityError);
}

TEST_CASE("Frechet derivative against finite differences") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-3, 3);
  const auto sc = Policy::supercommutative;
  const Variable dx{"dx"}, dy{"dy"};
  for (int n = 0; n < 50; ++n) {
    NCPolynomial p(sc, 0);
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b) {
        std::vector<Variable> w(a, X);
        w.insert(w.end(), b, Y);
        p.add_term(Word(w), GrassmannElement::scalar(0, c(rng)));
      }
    const auto d = frechet(p, {X, Y}, {dx, dy});
    const double x0 = (c(rng) + 0.5) / 3, y0 = (c(rng) - 0.25) / 3, vx = c(rng), vy = 1;
    const double h = 1e-6;
    const auto at = [&](double s) {
      return eval_at(p, {{"x", Rational(x0 + s * vx)}, {"y", Rational(y0 + s * vy)}}).get_d();
    };
    const double fd = (at(h) - at(-h)) / (2 * h);
    const double exact = eval_at(d, {{"x", Rational(x0)}, {"y", Rational(y0)}, {"dx", Rational(vx)}, {"dy", Rational(vy)}}).get_d();
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("polarization") {
  testing::Lienard l;
  const auto sc = Policy::supercommutative;
  const Variable chi{"chi", Parity::odd};
  const auto b = polarize(poly("alpha*x^2", sc, &l.reg, {X}), {X, XI}, {Y, chi});
  CHECK(b == poly("alpha*x*y", sc, &l.reg, {X, Y}));
  CHECK(polarize(NCPolynomial(sc, 2), {X}, {Y}).is_zero());
  CHECK_THROWS_AS(polarize(poly("x", sc, &l.reg, {X}), {X}, {Y}), InputError);
}

TEST_CASE("polarization recovers Q on the diagonal") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> c(-4, 4);
  const std::vector<Variable> vars{X, Y, Z};
  const std::vector<Variable> copies{{"u"}, {"v"}, {"w"}};
  for (const auto policy : {Policy::supercommutative, Policy::free}) {
    for (int n = 0; n < 40; ++n) {
      NCPolynomial q(policy, 0);
      for (const auto& a : vars)
        for (const auto& b : vars) q.add_term(Word{a, b}, GrassmannElement::scalar(0, c(rng)));
      const auto beta = polarize(q, vars, copies);
      Substitution diag;
      for (std::size_t i = 0; i < 3; ++i) diag.emplace(copies[i].name, NCPolynomial::variable(policy, 0, vars[i]));
      CHECK(substitute(beta, diag, SubstitutionMode::partial) == q);
      if (policy == Policy::supercommutative) {
        Substitution swap;
        for (std::size_t i = 0; i < 3; ++i) {
          swap.emplace(copies[i].name, NCPolynomial::variable(policy, 0, vars[i]));
          swap.emplace(vars[i].name, NCPolynomial::variable(policy, 0, copies[i]));
        }
        CHECK(substitute(beta, swap) == beta);
      }
    }
  }
}

TEST_CASE("product tables") {
  const auto m = ProductTable::matrix_units(2);
  CHECK(m.is_associative());
  CHECK_FALSE(m.is_commutative());
  ProductTable t(2);
  t.set(0, 0, {Rational(0), Rational(1)});
  t.set(0, 1, {Rational(1), Rational(0)});
  t.set(1, 0, {Rational(1), Rational(0)});
  CHECK(t.is_commutative());
  CHECK_FALSE(t.is_associative());
}
