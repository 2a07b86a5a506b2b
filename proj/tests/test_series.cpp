#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "superode/dynamics.hpp"
#include "superode/nary.hpp"
#include "superode/series.hpp"
#include "support.hpp"

using namespace superode;
using testing::X;
using testing::XI;

namespace {

struct Constants {
  ConstantRegistry reg{3};
  Constants() {
    reg.declare("gamma", Parity::odd);
    reg.declare("alpha", Parity::odd);
    reg.declare("eta", Parity::odd);
  }
  GrassmannElement c(const std::string& s) const { return parse_constant(s, reg); }
};

const Variable U{"u"};

}  // namespace

TEST_CASE("closed form of the u-coupled system") {
  Constants k;
  const auto s = QuadraticSystem::from_flow(
      testing::flow(Policy::supercommutative, &k.reg, {X, XI, U}, {{"x", "u*gamma*xi"}, {"xi", "alpha*x^2"}}));
  REQUIRE(s.slot("u") == std::optional<std::size_t>(1));
  const auto x0 = k.c("3/2"), u0 = k.c("2"), xi0 = k.c("eta");
  const SuperVector init(2, 1, {x0, u0, xi0});
  const auto sol = closed_form_truncated(s, init, 12);
  CHECK(sol.exact_truncation);
  REQUIRE(sol.order() == 2);
  const auto g = k.c("gamma"), a = k.c("alpha");
  // x(t) = x0 + u0 g xi0 t + 1/2 u0 g a x0^2 t^2
  CHECK(sol.coeffs[1][0] == u0 * g * xi0);
  CHECK(sol.coeffs[2][0] == Rational(1, 2) * (u0 * g * a * x0 * x0));
  // xi(t) = xi0 + a x0^2 t + a x0 u0 g xi0 t^2
  CHECK(sol.coeffs[1][2] == a * x0 * x0);
  CHECK(sol.coeffs[2][2] == a * x0 * u0 * g * xi0);
  CHECK(sol.coeffs[1][1].is_zero());
  CHECK(sol.coeffs[2][1].is_zero());

  // the truncated polynomial solves the flow exactly
  for (const Rational t : {Rational(0), Rational(1, 3), Rational(-2), Rational(7, 5)}) {
    SuperVector d = s.zero();
    for (std::size_t j = 1; j < sol.coeffs.size(); ++j) {
      Rational tp = 1;
      for (std::size_t m = 1; m < j; ++m) tp *= t;
      d += (Rational(static_cast<long>(j)) * tp) * sol.coeffs[j];
    }
    CHECK(d == s.E(series_eval(sol, t)));
  }
  CHECK(series_eval(sol, 0) == init);
}

TEST_CASE("zero data and equilibria") {
  Constants k;
  const auto s = QuadraticSystem::from_flow(
      testing::flow(Policy::supercommutative, &k.reg, {X, XI, U}, {{"x", "u*gamma*xi"}, {"xi", "alpha*x^2"}}));
  const auto zero = closed_form_truncated(s, s.zero(), 8);
  CHECK(zero.exact_truncation);
  CHECK(zero.order() == 0);

  const auto l = QuadraticSystem::from_flow(
      testing::flow(Policy::supercommutative, &k.reg, {X, XI}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}}));
  const SuperVector eq(1, 1, {k.c("-gamma*eta"), k.c("eta")});
  const auto raw = taylor_coeffs(l, eq, 6);
  for (std::size_t j = 1; j <= 6; ++j) CHECK(raw.coeffs[j].is_zero());
}

TEST_CASE("the full generalized Lienard flow does not truncate") {
  Constants k;
  const auto l = QuadraticSystem::from_flow(
      testing::flow(Policy::supercommutative, &k.reg, {X, XI}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}}));
  const SuperVector init(1, 1, {k.c("1"), k.c("eta")});
  const auto raw = taylor_coeffs(l, init, 10);
  for (std::size_t j = 0; j <= 10; ++j) CHECK_FALSE(raw.coeffs[j][0].is_zero());
  const auto sol = closed_form_truncated(l, init, 10);
  CHECK_FALSE(sol.exact_truncation);
  CHECK(sol.order() == 10);
  CHECK(sol.coeffs == raw.coeffs);
}

TEST_CASE("pure quadratic series through t^3") {
  Constants k;
  const auto h = homogenize(QuadraticSystem::from_flow(testing::flow(
                                Policy::supercommutative, &k.reg, {X, XI}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}})),
                            "u");
  std::mt19937_64 rng(17);
  for (int n = 0; n < 10; ++n) {
    SuperVector x0 = h.zero();
    for (std::size_t i = 0; i < h.dim(); ++i)
      x0.set(i, testing::random_element(rng, 3, h.variables()[i].parity));
    const auto sol = taylor_coeffs(h, x0, 3);
    const auto p2 = circ(h, x0, x0);
    const auto p3 = circ(h, x0, p2);
    const auto p4 = circ(h, x0, p3);
    CHECK(sol.coeffs[1] == p2);
    CHECK(sol.coeffs[2] == p3);
    CHECK(sol.coeffs[3] == Rational(1, 3) * (Rational(2) * p4 + circ(h, p2, p2)));
  }
}

TEST_CASE("idempotent start gives the geometric series") {
  const auto s = QuadraticSystem::from_flow(testing::flow(Policy::supercommutative, nullptr, {X}, {{"x", "x^2"}}));
  const SuperVector eps(1, 0, {GrassmannElement::scalar(0, 1)});
  const std::size_t K = 24;
  const auto sol = taylor_coeffs(s, eps, K);
  for (std::size_t j = 0; j <= K; ++j) CHECK(sol.coeffs[j] == eps);
  // 1/(1 - t) at t = 1/2 equals 2; the partial sum misses the tail 2^-K
  const Rational v = series_eval(sol, Rational(1, 2))[0].body();
  const Rational rel = (2 - v) / 2;
  CHECK(rel > 0);
  CHECK(rel <= Rational(1, 1 << K));
  CHECK(sol.derivative(3) == Rational(6) * eps);
  const auto r = radius_estimate(sol);
  REQUIRE(r);
  CHECK(*r == doctest::Approx(1.0));
}

TEST_CASE("mixed recursion agrees with RK4") {
  Constants k;
  const auto f = testing::flow(Policy::supercommutative, &k.reg, {X, XI},
                               {{"x", "1/2 + x + gamma*xi"}, {"xi", "eta + alpha*x^2"}});
  const auto s = QuadraticSystem::from_flow(f);
  const auto sys = expand_to_real(f);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x0 = testing::random_element(rng, 3, Parity::even, 1);
    const auto xi0 = testing::random_element(rng, 3, Parity::odd, 1);
    const auto sol = taylor_coeffs(s, SuperVector(1, 1, {x0, xi0}), 30);
    const auto at = series_eval(sol, Rational(1, 10));
    const auto end = rk4_integrate(sys, sys.state({{"x", x0}, {"xi", xi0}}), 0.1, 1e-4).states.back();
    const auto want = sys.state({{"x", at[0]}, {"xi", at[1]}});
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(end[i] - want[i]) <= 1e-8);
  }
}
