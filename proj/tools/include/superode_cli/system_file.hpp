#ifndef SUPERODE_CLI_SYSTEM_FILE_HPP
#define SUPERODE_CLI_SYSTEM_FILE_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "superode/dynamics.hpp"
#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"
#include "superode/nary.hpp"
#include "superode/parse.hpp"
#include "superode/quadratic.hpp"

namespace superode::cli {

using json = nlohmann::json;

enum class SystemKind { structure_tensor, flow_polynomials, quadratic, riccati };

const char* to_string(SystemKind k) noexcept;
SystemKind parse_kind(const std::string& s);

/// Environment variable holding the default generator budget.
inline constexpr const char* kBudgetEnv = "SUPERODE_BUDGET";

struct SystemFile {
  int version = 1;
  std::string name;
  std::size_t budget = 0;
  std::vector<std::pair<std::string, Parity>> constants;
  ConstantRegistry registry{0};
  std::vector<Variable> variables;
  Policy policy = Policy::supercommutative;
  SystemKind kind = SystemKind::flow_polynomials;

  std::optional<FlowSpec> flow;
  std::optional<StructureTensor> tensor;
  std::optional<QuadraticSystem> quadratic;
  std::optional<RiccatiSpec> riccati;

  std::map<std::string, GrassmannElement> initial;
  std::optional<RationalMatrix> riccati_x0;

  /// A claimed reduction to check with `verify`.
  std::optional<ReductionResult> reduction;
  /// A claimed commuting flow to check with `verify`.
  std::optional<FlowSpec> commuting;
  std::optional<std::size_t> symmetry_degree;
  std::vector<std::string> symmetry_free;

  FlowSpec as_flow() const;
  QuadraticSystem as_quadratic() const;
  StructureTensor as_tensor() const;
  /// Initial values laid out on the slots of s; missing entries are zero.
  SuperVector initial_vector(const QuadraticSystem& s) const;
  ParseContext context() const;
};

SystemFile parse_system(const std::string& path);
SystemFile parse_system_json(const json& j);
json serialize(const SystemFile& f);
bool same_model(const SystemFile& a, const SystemFile& b);

/// A copy of f describing a different flow over the same constants.
SystemFile with_flow(const SystemFile& f, const FlowSpec& flow, const std::string& name);

json grassmann_to_json(const GrassmannElement& g);
GrassmannElement grassmann_from_json(const json& j, const ConstantRegistry& constants);
json polynomial_to_json(const NCPolynomial& p);
NCPolynomial polynomial_from_json(const json& j, const ParseContext& ctx);
json tensor_to_json(const StructureTensor& t);
StructureTensor tensor_from_json(const json& j, const ConstantRegistry& constants);
json matrix_to_json(const RationalMatrix& m);
RationalMatrix matrix_from_json(const json& j);

}  // namespace superode::cli

#endif  // SUPERODE_CLI_SYSTEM_FILE_HPP
