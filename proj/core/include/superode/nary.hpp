#ifndef SUPERODE_NARY_HPP
#define SUPERODE_NARY_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"

namespace superode {

class QuadraticSystem;

/// Coefficients a_i^{k1..kN} of an N-ary product on n slots. Indices are
/// 0-based; absent entries are zero.
class StructureTensor {
 public:
  using Key = std::pair<std::size_t, std::vector<std::size_t>>;

  StructureTensor(std::size_t n, std::size_t arity, std::size_t budget);

  std::size_t n() const noexcept { return n_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t budget() const noexcept { return budget_; }
  const std::map<Key, GrassmannElement>& entries() const noexcept { return entries_; }

  void set(std::size_t i, const std::vector<std::size_t>& k, GrassmannElement c);
  void add(std::size_t i, const std::vector<std::size_t>& k, const GrassmannElement& c);
  GrassmannElement get(std::size_t i, const std::vector<std::size_t>& k) const;

  /// Plain permutation symmetry of every coefficient in (k1..kN).
  bool is_symmetric() const;

  bool operator==(const StructureTensor& o) const = default;

 private:
  void check_key(std::size_t i, const std::vector<std::size_t>& k) const;

  std::size_t n_;
  std::size_t arity_;
  std::size_t budget_;
  std::map<Key, GrassmannElement> entries_;
};

/// mu(X1..XN)_i = sum a_i^{k1..kN} X1_{k1} ... XN_{kN}, products left to right.
SuperVector mu_eval(const StructureTensor& t, const std::vector<SuperVector>& args);

/// Homogeneous degree-N flow X_i' = sum a_i^{k} X_{k1}...X_{kN}.
FlowSpec build_system(const StructureTensor& t, const std::vector<Variable>& vars, Policy policy);

/// Inverse of build_system for flows whose rhs are homogeneous of one degree.
StructureTensor tensor_from_flow(const FlowSpec& flow);

struct ReductionResult {
  FlowSpec reduced;
  /// New variable name -> word in the original variables.
  std::map<std::string, Word> dictionary;
};

struct ReductionOptions {
  std::size_t max_new_variables = 4096;
  std::string prefix = "Y";
};

/// Rewrites F as a system of degree <= 2 by naming the words it needs.
ReductionResult reduce_to_quadratic(const FlowSpec& flow, const ReductionOptions& options = {});

struct VerificationReport {
  bool ok = true;
  std::string counterexample;
  explicit operator bool() const noexcept { return ok; }
};

VerificationReport verify_reduction(const FlowSpec& original, const ReductionResult& r);

/// (C, T, beta) -> homogeneous system on (X, u) with u' = 0; u is placed after
/// the last even slot.
QuadraticSystem homogenize(const QuadraticSystem& s, const std::string& u_name = "u");

/// Same construction on a polynomial flow of degree <= 2.
FlowSpec homogenize_flow(const FlowSpec& flow, const std::string& u_name = "u");

}  // namespace superode

#endif  // SUPERODE_NARY_HPP
