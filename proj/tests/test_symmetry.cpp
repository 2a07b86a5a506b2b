#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "lienard_table.hpp"
#include "superode/symmetry.hpp"
#include "support.hpp"

using namespace superode;
using testing::poly;
using testing::X;
using testing::XI;

TEST_CASE("ansatz for the generalized Lienard flow") {
  testing::Lienard l;
  const auto a = ansatz_build(l.F, 3);
  CHECK(a.unknowns.size() == 16);
  std::set<std::string> names;
  for (const auto& u : a.unknowns) names.insert(u.name);
  for (const char* m : {"1", "x", "x^2", "x^3", "x*xi", "x^2*xi", "x^3*xi", "xi"}) {
    CHECK(names.count(std::string("x[") + m + "]"));
    CHECK(names.count(std::string("xi[") + m + "]"));
  }
  for (const auto& u : a.unknowns) CHECK(u.monomial.count("xi") <= 1);
  CHECK(a.unknowns[a.index_of("x[x*xi]")].parity == Parity::odd);
  CHECK(a.unknowns[a.index_of("xi[xi]")].parity == Parity::even);
  CHECK(a.rational_count() == 32);
  CHECK(ansatz_build(l.F, 0).unknowns.size() == 4);
}

TEST_CASE("commuting condition sizes") {
  testing::Lienard l;
  const auto a = ansatz_build(l.F, 3);
  const auto sys = commuting_condition(l.F, a);
  CHECK(sys.lambda_equations == 20);
  CHECK(sys.matrix.cols() == 32);
  CHECK(sys.matrix.rows() == sys.row_labels.size());
}

TEST_CASE("commuting flows of the generalized Lienard system") {
  testing::Lienard l;
  SolveOptions opt;
  opt.preferred_free = {"x[x]", "x[x*xi]", "xi[1]", "xi[xi]"};
  const auto r = solve_commuting(l.F, opt);
  CHECK(r.free_parameters == std::vector<std::string>{"x[x]", "x[x*xi]", "xi[1]", "xi[xi]"});
  CHECK(r.lambda_equation_count == 20);
  CHECK(r.lambda_unknown_count == 16);
  CHECK(r.rank + r.nullspace.size() == r.unknown_count);
  for (const auto& v : r.nullspace) {
    CHECK(testing::lienard_table_failures(r.ansatz, v, l.c("e"), l.c("alpha")).empty());
    CHECK(verify_commuting(l.F, instantiate(r.ansatz, v)).ok);
  }
  const auto rel = lambda_relations(r);
  std::map<std::string, std::string> text;
  for (const auto& x : rel) {
    CHECK(x.found);
    text[x.unknown] = format_relation(x, &l.reg);
  }
  CHECK(text["x[1]"] == "x[1] = -e*xi[1]");
  CHECK(text["x[x^3]"] == "x[x^3] = 1/2*alpha*x[x*xi]");
  CHECK(text["xi[x^3*xi]"] == "xi[x^3*xi] = 0");
}

TEST_CASE("the two-parameter closed family commutes") {
  ConstantRegistry reg(8);
  reg.declare("e", Parity::odd);
  reg.declare("alpha", Parity::odd);
  reg.declare("a1", Parity::even);
  reg.declare("b1", Parity::odd);
  reg.declare("alpha0", Parity::odd);
  reg.declare("gamma", Parity::even);
  const auto sc = Policy::supercommutative;
  const auto F = testing::flow(sc, &reg, {X, XI}, {{"x", "x + e*xi"}, {"xi", "alpha*x^2"}});
  const auto G = testing::flow(
      sc, &reg, {X, XI},
      {{"x", "a1*(x + e*xi) - e*alpha0 + gamma*(e*alpha*x^2/2 - e*xi) + b1*(-alpha/2*x^3 + x*xi + alpha*e*x^2*xi/2)"},
       {"xi", "a1*alpha*x^2 + alpha0*(1 - 2*alpha*e*x) + gamma*(-alpha*x^2/2 + xi + e*alpha*x*xi) - b1*alpha*x^2*xi"}});
  CHECK(verify_commuting(F, G).ok);
  // D_t D_tau (x xi) == D_tau D_t (x xi)
  const auto p = poly("x*xi", sc, &reg, {X, XI});
  CHECK(derivation_apply(F, derivation_apply(G, p)) == derivation_apply(G, derivation_apply(F, p)));

  auto eqs = G.equations();
  eqs.at("x") += poly("x^3", sc, &reg, {X});
  const auto rep = verify_commuting(F, FlowSpec(sc, 8, {X, XI}, eqs));
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.detail.empty());
  CHECK(verify_commuting(F, F).ok);
}

TEST_CASE("x' = e xi has commuting flows too") {
  testing::Lienard l;
  const auto F = testing::flow(Policy::supercommutative, &l.reg, {X, XI}, {{"x", "e*xi"}, {"xi", "alpha*x^2"}});
  const auto r = solve_commuting(F, {});
  CHECK(r.nullspace.size() >= 2);
  for (const auto& v : r.nullspace) CHECK(verify_commuting(F, instantiate(r.ansatz, v)).ok);
}

TEST_CASE("free algebra with real coefficients has only the trivial family") {
  const Variable xe{"x"}, xie{"xi"};
  const auto F = testing::flow(Policy::free, nullptr, {xe, xie}, {{"x", "x + xi"}, {"xi", "x*x"}});
  const auto r = solve_commuting(F, {});
  REQUIRE(r.nullspace.size() == 1);
  const auto G = instantiate(r.ansatz, r.nullspace[0]);
  const Rational c = G.rhs("x").coefficient(Word{xe}).body();
  REQUIRE(c != 0);
  CHECK(G.rhs("x") == F.rhs("x") * c);
  CHECK(G.rhs("xi") == F.rhs("xi") * c);
}

TEST_CASE("operator form of the Frechet derivative") {
  testing::Lienard l;
  const auto op = frechet_operator_form(l.F);
  REQUIRE(op.equations == std::vector<std::string>{"x", "xi"});
  CHECK(op.to_string(0, 0, &l.reg) == "1");
  CHECK(op.to_string(0, 1, &l.reg) == "L_e");
  const auto f21 = op.to_string(1, 0, &l.reg);
  CHECK(f21.find("L_alpha L_x") != std::string::npos);
  CHECK(f21.find("R_x L_alpha") != std::string::npos);
  CHECK(op.to_string(1, 1, &l.reg) == "0");

  const auto sc = Policy::supercommutative;
  const Variable dx{"dx"}, dxi{"dxi", Parity::odd};
  const std::vector<NCPolynomial> dirs{NCPolynomial::variable(sc, 2, dx), NCPolynomial::variable(sc, 2, dxi)};
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(op.apply(i, dirs) == frechet(l.F.rhs(op.equations[i]), {X, XI}, {dx, dxi}));

  const auto constant = testing::flow(sc, &l.reg, {X, XI}, {{"x", "1"}, {"xi", "e"}});
  const auto zero = frechet_operator_form(constant);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(zero.to_string(i, j) == "0");
}

TEST_CASE("surplus generators leave the solution unchanged") {
  testing::Lienard small;
  testing::Lienard big(4);
  SolveOptions opt;
  opt.preferred_free = {"x[x]", "x[x*xi]", "xi[1]", "xi[xi]"};
  const auto a = solve_commuting(small.F, opt);
  std::vector<std::string> want;
  for (const auto& r : lambda_relations(a)) want.push_back(format_relation(r, &small.reg));

  const auto b = solve_commuting(big.F, opt);
  CHECK(b.free_parameters == a.free_parameters);
  std::vector<std::string> got;
  for (const auto& r : lambda_relations(b)) got.push_back(format_relation(r, &big.reg));
  CHECK(got == want);

  opt.extra_generators = {3, 4};
  const auto c = solve_commuting(big.F, opt);
  CHECK(c.free_parameters == a.free_parameters);
  CHECK(c.unknown_count > a.unknown_count);
  for (const auto& v : c.nullspace) {
    CHECK(testing::lienard_table_failures(c.ansatz, v, big.c("e"), big.c("alpha")).empty());
    CHECK(verify_commuting(big.F, instantiate(c.ansatz, v)).ok);
  }
}
