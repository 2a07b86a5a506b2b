#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "superode/nary.hpp"
#include "superode/quadratic.hpp"
#include "support.hpp"

using namespace superode;
using testing::poly;
using testing::X;
using testing::XI;

namespace {

const Variable X1{"X1"}, X2{"X2"};

FlowSpec cubic_flow() {
  return testing::flow(Policy::free, nullptr, {X1, X2}, {{"X1", "X1^2*X2 + X2*X1^2"}, {"X2", "X1^3"}});
}

ReductionResult hand_reduction() {
  const std::vector<Variable> vars{X1, X2, {"Y1"}, {"Y2"}, {"Y3"}, {"Y4"}};
  ReductionResult r{testing::flow(Policy::free, nullptr, vars,
                                  {{"X1", "Y1*X2 + X2*Y1"},
                                   {"X2", "X1*Y1"},
                                   {"Y1", "Y1*Y3 + Y3*Y1 + Y1*Y4 + Y4*Y1"},
                                   {"Y2", "Y4*Y1 + Y1*Y3"},
                                   {"Y3", "Y1*Y2 + Y4*Y3 + Y1^2"},
                                   {"Y4", "Y1^2 + Y4*Y3 + Y2*Y1"}}),
                    {{"Y1", Word{X1, X1}}, {"Y2", Word{X2, X2}}, {"Y3", Word{X1, X2}}, {"Y4", Word{X2, X1}}}};
  return r;
}

}  // namespace

TEST_CASE("structure tensor evaluation") {
  testing::Lienard l;
  StructureTensor t(2, 2, 2);
  t.set(1, {0, 0}, l.c("alpha"));
  const auto x = l.c("3") + l.c("e*alpha");
  const SuperVector v(1, 1, {x, l.c("2*e")});
  const auto out = mu_eval(t, {v, v});
  CHECK(out[0].is_zero());
  CHECK(out[1] == l.c("alpha") * x * x);
  CHECK(mu_eval(t, {v, SuperVector::zero(1, 1, 2)}).is_zero());

  StructureTensor cube(1, 3, 0);
  cube.set(0, {0, 0, 0}, GrassmannElement::scalar(0, 1));
  const SuperVector c(1, 0, {GrassmannElement::scalar(0, Rational(-2, 3))});
  CHECK(mu_eval(cube, {c, c, c})[0].body() == Rational(-8, 27));
  CHECK_THROWS(cube.set(1, {0, 0, 0}, GrassmannElement::scalar(0, 1)));
}

TEST_CASE("flows from tensors") {
  testing::Lienard l;
  StructureTensor t(2, 2, 2);
  t.set(1, {0, 0}, l.c("alpha"));
  const auto f = build_system(t, {X, XI}, Policy::supercommutative);
  CHECK(f.rhs("x").is_zero());
  CHECK(f.rhs("xi") == poly("alpha*x^2", Policy::supercommutative, &l.reg, {X}));
  CHECK(tensor_from_flow(f) == t);

  const auto zero = build_system(StructureTensor(2, 2, 2), {X, XI}, Policy::supercommutative);
  CHECK(zero.rhs("x").is_zero());
  CHECK(zero.rhs("xi").is_zero());

  const auto e1 = cubic_flow();
  const auto t1 = tensor_from_flow(e1);
  CHECK(t1.arity() == 3);
  CHECK(t1.get(0, {0, 0, 1}) == GrassmannElement::scalar(0, 1));
  CHECK(t1.get(0, {1, 0, 0}) == GrassmannElement::scalar(0, 1));
  CHECK(t1.get(0, {0, 1, 0}).is_zero());
  CHECK(build_system(t1, {X1, X2}, Policy::free) == e1);
}

TEST_CASE("cubic system reduction") {
  const auto f = cubic_flow();
  const auto r = reduce_to_quadratic(f);
  CHECK(r.reduced.degree() == 2);
  CHECK(r.dictionary.size() == 4);
  for (const auto& [name, w] : r.dictionary) CHECK(w.size() == 2);
  CHECK(verify_reduction(f, r).ok);
}

TEST_CASE("the hand-written six-variable reduction verifies") {
  CHECK(verify_reduction(cubic_flow(), hand_reduction()).ok);
}

TEST_CASE("corrupted reductions are rejected") {
  auto bad = hand_reduction();
  auto eqs = bad.reduced.equations();
  eqs.at("Y2") = NCPolynomial(Policy::free, 0);
  bad.reduced = FlowSpec(Policy::free, 0, bad.reduced.variables(), eqs);
  const auto rep = verify_reduction(cubic_flow(), bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.counterexample.find("Y2") != std::string::npos);
}

TEST_CASE("quadratic input needs no new variables") {
  testing::Lienard l;
  const auto r = reduce_to_quadratic(l.F);
  CHECK(r.dictionary.empty());
  CHECK(r.reduced == l.F);
}

TEST_CASE("scalar cubic") {
  const auto f = testing::flow(Policy::supercommutative, nullptr, {X}, {{"x", "x^3"}});
  const auto r = reduce_to_quadratic(f);
  REQUIRE(r.dictionary.size() == 1);
  const auto& [y, w] = *r.dictionary.begin();
  CHECK(w == Word{X, X});
  const std::vector<Variable> vars{X, {y}};
  CHECK(r.reduced.rhs("x") == poly("x*" + y, Policy::supercommutative, nullptr, vars));
  CHECK(r.reduced.rhs(y) == poly("2*" + y + "^2", Policy::supercommutative, nullptr, vars));
  // brute substitution oracle
  const Substitution back{{y, poly("x^2", Policy::supercommutative, nullptr, {X})}};
  CHECK(substitute(r.reduced.rhs(y), back, SubstitutionMode::partial) ==
        derivation_apply(f, poly("x^2", Policy::supercommutative, nullptr, {X})));
}

TEST_CASE("random cubic systems always reduce correctly") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> c(-2, 2);
  for (const auto policy : {Policy::free, Policy::supercommutative}) {
    for (int n = 0; n < 25; ++n) {
      const std::size_t nv = 1 + rng() % 3;
      std::vector<Variable> vars;
      for (std::size_t i = 0; i < nv; ++i) vars.push_back({"v" + std::to_string(i)});
      std::map<std::string, NCPolynomial> rhs;
      for (const auto& v : vars) {
        NCPolynomial p(policy, 0);
        for (int k = 0; k < 4; ++k) {
          const std::size_t deg = 1 + rng() % 3;
          std::vector<Variable> w;
          for (std::size_t d = 0; d < deg; ++d) w.push_back(vars[rng() % nv]);
          p.add_term(Word(w), GrassmannElement::scalar(0, c(rng)));
        }
        rhs.emplace(v.name, p);
      }
      const FlowSpec f(policy, 0, vars, rhs);
      const auto r = reduce_to_quadratic(f);
      CHECK(r.reduced.degree() <= 2);
      CHECK(verify_reduction(f, r).ok);
    }
  }
}

TEST_CASE("odd variables in a reduction") {
  ConstantRegistry reg(2);
  reg.declare("alpha", Parity::odd);
  reg.declare("gamma", Parity::odd);
  const auto f = testing::flow(Policy::supercommutative, &reg, {X, XI}, {{"x", "x^3 + gamma*x*xi"}, {"xi", "alpha*x^3 + x^2*xi"}});
  const auto r = reduce_to_quadratic(f);
  CHECK(verify_reduction(f, r).ok);
}

TEST_CASE("homogenization") {
  ConstantRegistry reg(2);
  reg.declare("gamma", Parity::odd);
  reg.declare("alpha", Parity::odd);
  const auto f = testing::flow(Policy::supercommutative, &reg, {X, XI}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}});
  const auto h = homogenize_flow(f, "u");
  const Variable u{"u"};
  const std::vector<Variable> all{X, XI, u};
  CHECK(h.rhs("x") == poly("u*x + u*gamma*xi", Policy::supercommutative, &reg, all));
  CHECK(h.rhs("xi") == poly("alpha*x^2", Policy::supercommutative, &reg, all));
  CHECK(h.rhs("u").is_zero());

  const Substitution one{{"u", NCPolynomial::scalar(Policy::supercommutative, 2, 1)}};
  for (const auto& v : f.variables()) CHECK(substitute(h.rhs(v.name), one, SubstitutionMode::partial) == f.rhs(v.name));

  const auto hq = homogenize(QuadraticSystem::from_flow(f), "u");
  CHECK(hq.is_homogeneous());
  CHECK(hq.to_flow() == QuadraticSystem::from_flow(h).to_flow());

  const auto already = testing::flow(Policy::supercommutative, &reg, {X, XI}, {{"xi", "alpha*x^2"}});
  const auto ha = homogenize_flow(already, "u");
  CHECK(ha.rhs("xi") == poly("alpha*x^2", Policy::supercommutative, &reg, {X}));
  CHECK_THROWS_AS(homogenize_flow(f, "x"), InputError);
}

TEST_CASE("homogenized quadratic form scales by lambda squared") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int n = 0; n < 30; ++n) {
    const Variable y{"y"};
    std::map<std::string, NCPolynomial> rhs;
    for (const auto& v : {X, y}) {
      NCPolynomial p(Policy::supercommutative, 0);
      p.add_term(Word{}, GrassmannElement::scalar(0, c(rng)));
      p.add_term(Word{X}, GrassmannElement::scalar(0, c(rng)));
      p.add_term(Word{y}, GrassmannElement::scalar(0, c(rng)));
      p.add_term(Word{X, y}, GrassmannElement::scalar(0, c(rng)));
      p.add_term(Word{y, y}, GrassmannElement::scalar(0, c(rng)));
      rhs.emplace(v.name, p);
    }
    const auto h = homogenize(QuadraticSystem::from_flow(FlowSpec(Policy::supercommutative, 0, {X, y}, rhs)), "u");
    SuperVector v = h.zero();
    for (std::size_t i = 0; i < h.dim(); ++i) v.set(i, GrassmannElement::scalar(0, c(rng)));
    Rational lambda(c(rng), 2);
    lambda.canonicalize();
    CHECK(h.E(lambda * v) == (lambda * lambda) * h.E(v));
  }
}
