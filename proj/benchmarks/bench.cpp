#include <benchmark/benchmark.h>

#include <random>

#include "superode/dynamics.hpp"
#include "superode/nary.hpp"
#include "superode/parse.hpp"
#include "superode/quadratic.hpp"
#include "superode/symmetry.hpp"

using namespace superode;

namespace {

GrassmannElement dense_element(std::size_t L, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-5, 5);
  GrassmannElement g(L);
  for (const auto& idx : basis_monomials(L)) g.add_term(idx, Rational(c(rng)));
  return g;
}

FlowSpec flow_of(Policy policy, const ConstantRegistry* reg, const std::vector<Variable>& vars,
                 const std::map<std::string, std::string>& rhs) {
  const ParseContext ctx{policy, reg, vars};
  std::map<std::string, NCPolynomial> eq;
  for (const auto& [n, t] : rhs) eq.emplace(n, parse_polynomial(t, ctx));
  return FlowSpec(policy, reg ? reg->budget() : 0, vars, eq);
}

const Variable kX{"x"}, kXi{"xi", Parity::odd};

}  // namespace

static void BM_GrassmannMultiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto L = static_cast<std::size_t>(state.range(0));
  const auto a = dense_element(L, rng), b = dense_element(L, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GrassmannMultiply)->Arg(4)->Arg(6)->Arg(8);

static void BM_LienardSymmetrySolve(benchmark::State& state) {
  ConstantRegistry reg(2);
  reg.declare("e", Parity::odd);
  reg.declare("alpha", Parity::odd);
  const auto F = flow_of(Policy::supercommutative, &reg, {kX, kXi}, {{"x", "x + e*xi"}, {"xi", "alpha*x^2"}});
  SolveOptions opt;
  opt.degree = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_commuting(F, opt));
}
BENCHMARK(BM_LienardSymmetrySolve)->Arg(2)->Arg(3)->Arg(4);

static void BM_Reduction(benchmark::State& state) {
  const Variable x1{"X1"}, x2{"X2"};
  const auto F = flow_of(Policy::free, nullptr, {x1, x2}, {{"X1", "X1^2*X2 + X2*X1^2"}, {"X2", "X1^3"}});
  for (auto _ : state) benchmark::DoNotOptimize(reduce_to_quadratic(F));
}
BENCHMARK(BM_Reduction);

static void BM_RK4Lienard(benchmark::State& state) {
  ConstantRegistry reg(4);
  reg.declare("gamma", Parity::odd);
  reg.declare("alpha", Parity::odd);
  const auto sys = expand_to_real(
      flow_of(Policy::supercommutative, &reg, {kX, kXi}, {{"x", "x + gamma*xi"}, {"xi", "alpha*x^2"}}));
  std::vector<double> x0(sys.size(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(rk4_integrate(sys, x0, 0.5, 1e-3));
}
BENCHMARK(BM_RK4Lienard);
BENCHMARK_MAIN();
