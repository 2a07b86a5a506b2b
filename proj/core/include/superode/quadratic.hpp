#ifndef SUPERODE_QUADRATIC_HPP
#define SUPERODE_QUADRATIC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"
#include "superode/linalg.hpp"
#include "superode/nary.hpp"

namespace superode {

using LinearMap = Matrix<GrassmannElement>;

LinearMap identity_map(std::size_t n, std::size_t budget);
SuperVector apply(const LinearMap& m, const SuperVector& x);

/// E(X) = C + T X + beta(X, X) on a (p, q) superspace. beta is stored as an
/// N = 2 tensor in graded-symmetric form.
class QuadraticSystem {
 public:
  /// vars must list the p even variables before the q odd ones.
  QuadraticSystem(std::vector<Variable> vars, SuperVector c, LinearMap t, StructureTensor beta);

  /// Reads C, T and Q off a flow of degree <= 2; variables are reordered
  /// evens first, and Q is symmetrized.
  static QuadraticSystem from_flow(const FlowSpec& flow);
  FlowSpec to_flow(Policy policy = Policy::supercommutative) const;

  const std::vector<Variable>& variables() const noexcept { return vars_; }
  std::size_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return vars_.size() - p_; }
  std::size_t dim() const noexcept { return vars_.size(); }
  std::size_t budget() const noexcept { return budget_; }
  std::optional<std::size_t> slot(const std::string& name) const;

  const SuperVector& C() const noexcept { return c_; }
  const LinearMap& T() const noexcept { return t_; }
  const StructureTensor& beta() const noexcept { return beta_; }

  SuperVector zero() const { return SuperVector::zero(p_, q(), budget_); }
  SuperVector beta(const SuperVector& x, const SuperVector& y) const;
  SuperVector linear(const SuperVector& x) const { return apply(t_, x); }
  SuperVector E(const SuperVector& x) const;
  bool is_homogeneous() const;

  /// Real basis of the superspace: unit Grassmann monomials placed in one slot.
  std::vector<SuperVector> real_basis() const;

  bool operator==(const QuadraticSystem& o) const = default;

 private:
  void check(const SuperVector& x) const;

  std::vector<Variable> vars_;
  std::size_t p_ = 0;
  std::size_t budget_ = 0;
  SuperVector c_;
  LinearMap t_;
  StructureTensor beta_;
};

/// X o Y = beta(X, Y).
SuperVector circ(const QuadraticSystem& s, const SuperVector& x, const SuperVector& y);

struct WitnessOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 12345;
  /// Exhaustive stages only look at this many basis elements.
  std::size_t basis_bound = 40;
  std::size_t power_basis_bound = 8;
};

/// (A o B) o C != A o (B o C).
std::optional<std::array<SuperVector, 3>> associativity_witness(const QuadraticSystem& s,
                                                                const WitnessOptions& opt = {});

/// X with (X o X) o (X o X) != ((X o X) o X) o X.
std::optional<SuperVector> power_associativity_witness(const QuadraticSystem& s, const WitnessOptions& opt = {});

enum class IdempotentKind { idempotent, scaled, nilpotent, other };
const char* to_string(IdempotentKind k) noexcept;

struct IdempotentClass {
  IdempotentKind kind = IdempotentKind::other;
  Rational factor = 0;
};

IdempotentClass idempotent_check(const QuadraticSystem& s, const SuperVector& x);

/// P / (1 - a t); throws DomainError at the pole.
SuperVector blowup_solution(const SuperVector& p, const Rational& a, const Rational& t);
double blowup_factor(double a, double t);

struct CheckReport {
  bool ok = true;
  std::string detail;
  explicit operator bool() const noexcept { return ok; }
};

/// phi T = T phi and phi(X o Y) = phi X o phi Y on basis pairs. Throws
/// SingularMatrix when the body of phi is singular.
CheckReport automorphism_check(const QuadraticSystem& s, const LinearMap& phi);

/// T D = D T and D(X o Y) = DX o Y + X o DY on basis pairs.
CheckReport derivation_check(const QuadraticSystem& s, const LinearMap& d);

struct Prop1Report {
  bool premise = false;
  std::string premise_detail;
  bool conclusion = false;
  /// Agreement of exp(tG) P with the Taylor solution from P.
  bool series_agree = false;
  std::optional<std::size_t> first_mismatch_order;
};

/// Premise: exp(tG) preserves E, checked as G C = 0 plus derivation_check.
/// Conclusion: G P == E(P), cross-checked against the series solution.
Prop1Report prop1_check(const QuadraticSystem& s, const LinearMap& g, const SuperVector& p, std::size_t order = 6);

struct NewtonOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 200;
  std::vector<double> lattice = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
};

/// Nonzero real solutions of beta(X, X) = X for a real algebra of dim <= 4.
std::vector<std::vector<double>> find_real_idempotents(const QuadraticSystem& s, const NewtonOptions& opt = {});

}  // namespace superode

#endif  // SUPERODE_QUADRATIC_HPP
