#ifndef SUPERODE_SYMMETRY_HPP
#define SUPERODE_SYMMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"
#include "superode/linalg.hpp"

namespace superode {

/// Coefficient of one monomial in one equation of the unknown flow G.
struct AnsatzUnknown {
  std::string name;  ///< "x[x^2*xi]"
  std::string variable;
  Word monomial;
  Parity parity = Parity::even;
  /// Grassmann monomials carrying an independent rational unknown each.
  std::vector<MultiIndex> expansion;
};

struct AnsatzTemplate {
  Policy policy = Policy::supercommutative;
  std::size_t budget = 0;
  std::size_t degree = 0;
  std::vector<Variable> variables;
  std::vector<std::uint32_t> generators;
  std::vector<AnsatzUnknown> unknowns;

  std::size_t rational_count() const;
  /// Offset of the first rational unknown of unknowns[u].
  std::size_t offset(std::size_t u) const;
  /// "x[x]" for the body, "x[x]{b1b2}" for a soul component.
  std::vector<std::string> rational_names() const;
  std::size_t index_of(const std::string& name) const;
};

/// Supercommutative: even-variable monomials of degree <= d times any product
/// of distinct odd variables. Free: every word of length <= d. Coefficients
/// are expanded over the monomials in the generators used by F plus extras.
AnsatzTemplate ansatz_build(const FlowSpec& flow, std::size_t degree,
                            const std::vector<std::uint32_t>& extra_generators = {});

/// Rational linear system D_t G - D_tau F = 0 in the ansatz unknowns.
struct CommutingSystem {
  RationalMatrix matrix;
  std::vector<std::string> row_labels;
  /// Distinct (equation, word) pairs, before splitting by Grassmann monomial.
  std::size_t lambda_equations = 0;
};

CommutingSystem commuting_condition(const FlowSpec& flow, const AnsatzTemplate& ansatz);

struct SolveOptions {
  std::size_t degree = 3;
  /// Unknowns to keep free where possible, e.g. {"x[x]", "xi[1]"}.
  std::vector<std::string> preferred_free;
  std::vector<std::uint32_t> extra_generators;
};

struct LinearSolveResult {
  AnsatzTemplate ansatz;
  /// The system is homogeneous, so the particular solution is zero.
  std::vector<Rational> particular;
  /// Basis of the solution space, in ansatz rational order.
  std::vector<std::vector<Rational>> nullspace;
  /// Rational unknown each nullspace vector is normalized on.
  std::vector<std::string> free_columns;
  std::size_t rank = 0;
  std::size_t unknown_count = 0;
  std::size_t equation_count = 0;
  std::size_t lambda_unknown_count = 0;
  std::size_t lambda_equation_count = 0;
  /// Named unknowns with at least one free rational component.
  std::vector<std::string> free_parameters;
};

LinearSolveResult solve_commuting(const FlowSpec& flow, const SolveOptions& opt = {});

/// The flow G for one assignment of the rational unknowns.
FlowSpec instantiate(const AnsatzTemplate& ansatz, const std::vector<Rational>& values);
GrassmannElement unknown_value(const AnsatzTemplate& ansatz, const std::vector<Rational>& values,
                               const std::string& name);

/// U = sum kappa_F F over the free parameters F, valid on the whole solution space.
struct LambdaRelation {
  std::string unknown;
  bool free = false;
  bool found = false;
  std::vector<std::pair<std::string, GrassmannElement>> terms;
};

std::vector<LambdaRelation> lambda_relations(const LinearSolveResult& r);
std::string format_relation(const LambdaRelation& rel, const ConstantRegistry* constants = nullptr);

struct CommutingReport {
  bool ok = true;
  std::string detail;
  explicit operator bool() const noexcept { return ok; }
};

/// D_t G == D_tau F, plus D_t D_tau w == D_tau D_t w on words of length <= 3.
CommutingReport verify_commuting(const FlowSpec& f, const FlowSpec& g);

/// coeff * left * (.) * right
struct OperatorTerm {
  GrassmannElement coeff;
  Word left;
  Word right;
};

struct OperatorForm {
  std::vector<std::string> equations;
  std::vector<std::string> slots;
  /// entries[i][j]: the part of F_i* acting on the direction of slot j.
  std::vector<std::vector<std::vector<OperatorTerm>>> entries;

  NCPolynomial apply(std::size_t i, const std::vector<NCPolynomial>& directions) const;
  /// "L_alpha L_x + R_x L_alpha"; "1" for the identity, "0" when empty.
  std::string to_string(std::size_t i, std::size_t j, const ConstantRegistry* constants = nullptr) const;
};

OperatorForm frechet_operator_form(const FlowSpec& flow);

}  // namespace superode

#endif  // SUPERODE_SYMMETRY_HPP
