#include "superode_cli/system_file.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "superode/parse.hpp"

namespace superode::cli {

const char* to_string(SystemKind k) noexcept {
  switch (k) {
    case SystemKind::structure_tensor: return "structure_tensor";
    case SystemKind::flow_polynomials: return "flow_polynomials";
    case SystemKind::quadratic: return "quadratic";
    case SystemKind::riccati: return "riccati";
  }
  return "flow_polynomials";
}

SystemKind parse_kind(const std::string& s) {
  if (s == "structure_tensor") return SystemKind::structure_tensor;
  if (s == "flow_polynomials") return SystemKind::flow_polynomials;
  if (s == "quadratic") return SystemKind::quadratic;
  if (s == "riccati") return SystemKind::riccati;
  throw InputError("unknown kind '" + s + "'");
}

namespace {

template <class F>
auto at_field(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParityError& e) {
    throw ParityError(path + ": " + e.what());
  } catch (const BudgetExhausted& e) {
    throw BudgetExhausted(path + ": " + e.what());
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string rational_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError("rationals must be strings or integers");
}

GrassmannElement constant_value(const json& j, const ConstantRegistry& constants) {
  if (j.is_object()) return grassmann_from_json(j, constants);
  return parse_constant(rational_string(j), constants);
}

std::map<std::string, NCPolynomial> flow_map(const json& j, const ParseContext& ctx, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object of equations");
  std::map<std::string, NCPolynomial> rhs;
  for (const auto& [name, value] : j.items())
    rhs.emplace(name, at_field(path + "." + name, [&] { return polynomial_from_json(value, ctx); }));
  return rhs;
}

json flow_to_json(const FlowSpec& flow) {
  json j = json::object();
  for (const auto& v : flow.variables()) j[v.name] = polynomial_to_json(flow.rhs(v.name));
  return j;
}

json flow_display(const FlowSpec& flow, const ConstantRegistry& reg) {
  json j = json::object();
  for (const auto& v : flow.variables())
    j[v.name] = flow.rhs(v.name).to_string([&](const GrassmannElement& c) { return format_constant(c, reg); });
  return j;
}

std::vector<Variable> variables_from_json(const json& j) {
  std::vector<Variable> vars;
  for (const auto& v : j) {
    Variable var;
    var.name = v.at("name").get<std::string>();
    var.parity = parse_parity(v.value("parity", std::string("even")));
    vars.push_back(var);
  }
  return vars;
}

json variables_to_json(const std::vector<Variable>& vars) {
  json j = json::array();
  for (const auto& v : vars) j.push_back({{"name", v.name}, {"parity", superode::to_string(v.parity)}});
  return j;
}

}  // namespace

// ------------------------------------------------------------- value codecs

json grassmann_to_json(const GrassmannElement& g) {
  json terms = json::array();
  for (const auto& [idx, q] : g.terms())
    terms.push_back({{"idx", idx.generators()}, {"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}});
  return {{"L", g.budget()}, {"terms", terms}};
}

GrassmannElement grassmann_from_json(const json& j, const ConstantRegistry& constants) {
  const std::size_t L = j.value("L", constants.budget());
  if (L != constants.budget())
    throw BudgetMismatch("element over L=" + std::to_string(L) + " in a file with L=" + std::to_string(constants.budget()));
  GrassmannElement g(L);
  for (const auto& t : j.at("terms")) {
    MultiIndex idx(t.at("idx").get<std::vector<std::uint32_t>>());
    if (idx.max_generator() > L) throw BudgetExhausted("generator " + std::to_string(idx.max_generator()) + " beyond L");
    Rational q(t.at("num").get<std::string>() + "/" + t.value("den", std::string("1")));
    q.canonicalize();
    g.add_term(idx, q);
  }
  return g;
}

json polynomial_to_json(const NCPolynomial& p) {
  json terms = json::array();
  for (const auto& [w, c] : p.terms()) {
    std::vector<std::string> word;
    for (const auto& l : w.letters()) word.push_back(l.name);
    terms.push_back({{"word", word}, {"coeff", grassmann_to_json(c)}});
  }
  return {{"terms", terms}};
}

NCPolynomial polynomial_from_json(const json& j, const ParseContext& ctx) {
  if (j.is_string() || j.is_number_integer()) return parse_polynomial(rational_string(j), ctx);
  const std::size_t L = ctx.constants ? ctx.constants->budget() : 0;
  NCPolynomial p(ctx.policy, L);
  ConstantRegistry empty(L);
  for (const auto& t : j.at("terms")) {
    std::vector<Variable> letters;
    for (const auto& name : t.at("word")) {
      const std::string n = name.get<std::string>();
      auto it = std::find_if(ctx.variables.begin(), ctx.variables.end(), [&](const Variable& v) { return v.name == n; });
      if (it == ctx.variables.end()) throw InputError("unknown variable '" + n + "'");
      letters.push_back(*it);
    }
    p.add_term(Word(std::move(letters)), constant_value(t.at("coeff"), ctx.constants ? *ctx.constants : empty));
  }
  return p;
}

json tensor_to_json(const StructureTensor& t) {
  json entries = json::array();
  for (const auto& [key, c] : t.entries()) {
    std::vector<std::size_t> k;
    for (auto x : key.second) k.push_back(x + 1);
    entries.push_back({{"i", key.first + 1}, {"k", k}, {"coeff", grassmann_to_json(c)}});
  }
  return {{"n", t.n()}, {"N", t.arity()}, {"entries", entries}};
}

StructureTensor tensor_from_json(const json& j, const ConstantRegistry& constants) {
  StructureTensor t(j.at("n").get<std::size_t>(), j.at("N").get<std::size_t>(), constants.budget());
  for (const auto& e : j.at("entries")) {
    const std::size_t i = e.at("i").get<std::size_t>();
    std::vector<std::size_t> k = e.at("k").get<std::vector<std::size_t>>();
    if (i == 0 || std::find(k.begin(), k.end(), 0) != k.end()) throw InputError("tensor indices are 1-based");
    for (auto& x : k) --x;
    t.add(i - 1, k, constant_value(e.at("coeff"), constants));
  }
  return t;
}

json matrix_to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    rows.push_back(row);
  }
  return rows;
}

RationalMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const std::size_t r = j.size(), c = j.at(0).size();
  RationalMatrix m(r, c, Rational(0));
  for (std::size_t i = 0; i < r; ++i) {
    if (j.at(i).size() != c) throw InputError("ragged matrix");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = parse_rational(rational_string(j.at(i).at(k)));
  }
  return m;
}

// ----------------------------------------------------------------- model

ParseContext SystemFile::context() const { return ParseContext{policy, &registry, variables}; }

FlowSpec SystemFile::as_flow() const {
  switch (kind) {
    case SystemKind::flow_polynomials: return *flow;
    case SystemKind::structure_tensor: return build_system(*tensor, variables, policy);
    case SystemKind::quadratic: return quadratic->to_flow(policy);
    case SystemKind::riccati: break;
  }
  throw InputError("a riccati file has no polynomial flow");
}

QuadraticSystem SystemFile::as_quadratic() const {
  if (kind == SystemKind::quadratic) return *quadratic;
  return QuadraticSystem::from_flow(as_flow());
}

StructureTensor SystemFile::as_tensor() const {
  if (kind == SystemKind::structure_tensor) return *tensor;
  return tensor_from_flow(as_flow());
}

SuperVector SystemFile::initial_vector(const QuadraticSystem& s) const {
  SuperVector x = s.zero();
  for (const auto& [name, value] : initial) {
    auto slot = s.slot(name);
    if (!slot) throw InputError("initial value for unknown variable '" + name + "'");
    x.set(*slot, value);
  }
  return x;
}

SystemFile parse_system_json(const json& j) {
  SystemFile f;
  f.version = j.value("version", 1);
  if (f.version != 1) throw InputError("unsupported version " + std::to_string(f.version));
  f.name = j.value("name", std::string());
  const json gens = j.value("generators", json::object());
  std::size_t needed = 0;
  for (const auto& c : gens.value("constants", json::array())) {
    const auto name = at_field("generators.constants", [&] { return c.at("name").get<std::string>(); });
    const auto parity = at_field("generators.constants." + name, [&] { return parse_parity(c.value("parity", std::string("odd"))); });
    f.constants.emplace_back(name, parity);
    needed += is_odd(parity) ? 1 : 2;
  }
  if (gens.contains("L")) {
    f.budget = gens.at("L").get<std::size_t>();
  } else if (const char* env = std::getenv(kBudgetEnv); env && *env) {
    try {
      f.budget = std::stoul(env);
    } catch (const std::exception&) {
      throw InputError(std::string(kBudgetEnv) + " must be a non-negative integer");
    }
  } else {
    f.budget = needed;
  }
  f.registry = ConstantRegistry(f.budget);
  for (const auto& [name, parity] : f.constants)
    at_field("generators.constants." + name, [&] { return f.registry.declare(name, parity); });

  f.variables = at_field("variables", [&] { return variables_from_json(j.value("variables", json::array())); });
  f.policy = at_field("policy", [&] { return parse_policy(j.value("policy", std::string("supercommutative"))); });
  f.kind = at_field("kind", [&] { return parse_kind(j.at("kind").get<std::string>()); });
  const ParseContext ctx = f.context();

  switch (f.kind) {
    case SystemKind::flow_polynomials:
      f.flow = at_field("flow", [&] {
        return FlowSpec(f.policy, f.budget, f.variables, flow_map(j.at("flow"), ctx, "flow"));
      });
      break;
    case SystemKind::structure_tensor:
      f.tensor = at_field("tensor", [&] { return tensor_from_json(j.at("tensor"), f.registry); });
      at_field("tensor", [&] { return build_system(*f.tensor, f.variables, f.policy); });
      break;
    case SystemKind::quadratic: {
      f.quadratic = at_field("quadratic", [&] {
        const json& q = j.at("quadratic");
        const std::size_t n = f.variables.size();
        std::map<std::string, NCPolynomial> rhs;
        for (const auto& v : f.variables) rhs.emplace(v.name, NCPolynomial(f.policy, f.budget));
        const json cs = q.value("C", json::object());
        for (const auto& [name, value] : cs.items())
          at_field("quadratic.C." + name, [&] {
            auto it = rhs.find(name);
            if (it == rhs.end()) throw InputError("unknown variable");
            it->second.add_term(Word{}, constant_value(value, f.registry));
            return 0;
          });
        if (q.contains("T")) {
          const json& t = q.at("T");
          if (t.size() != n) throw InputError("quadratic.T must have one row per variable");
          for (std::size_t i = 0; i < n; ++i) {
            if (t.at(i).size() != n) throw InputError("quadratic.T must be square");
            for (std::size_t k = 0; k < n; ++k)
              rhs.at(f.variables[i].name)
                  .add_term(Word{f.variables[k]}, at_field("quadratic.T", [&] { return constant_value(t[i][k], f.registry); }));
          }
        }
        if (q.contains("beta")) {
          const StructureTensor b = at_field("quadratic.beta", [&] { return tensor_from_json(q.at("beta"), f.registry); });
          if (b.n() != n || b.arity() != 2) throw InputError("quadratic.beta must be a 2-tensor on the variables");
          for (const auto& [key, c] : b.entries())
            rhs.at(f.variables[key.first].name).add_term(Word{f.variables[key.second[0]], f.variables[key.second[1]]}, c);
        }
        return QuadraticSystem::from_flow(FlowSpec(f.policy, f.budget, f.variables, std::move(rhs)));
      });
      f.variables = f.quadratic->variables();
      break;
    }
    case SystemKind::riccati: {
      f.riccati = at_field("riccati", [&] {
        const json& r = j.at("riccati");
        RiccatiSpec s;
        s.p = r.at("p").get<std::size_t>();
        s.q = r.at("q").get<std::size_t>();
        s.A = matrix_from_json(r.at("A"));
        s.B = matrix_from_json(r.at("B"));
        s.C = matrix_from_json(r.at("C"));
        s.D = matrix_from_json(r.at("D"));
        s.validate();
        return s;
      });
      if (j.contains("x0")) f.riccati_x0 = at_field("x0", [&] { return matrix_from_json(j.at("x0")); });
      break;
    }
  }

  const json initial = j.value("initial", json::object());
  for (const auto& [name, value] : initial.items()) {
    auto it = std::find_if(f.variables.begin(), f.variables.end(), [&](const Variable& v) { return v.name == name; });
    if (it == f.variables.end()) throw InputError("initial." + name + ": unknown variable");
    GrassmannElement g = at_field("initial." + name, [&] { return constant_value(value, f.registry); });
    const Grade gr = g.grade();
    if (gr == Grade::mixed || (gr != Grade::zero && (gr == Grade::odd) != is_odd(it->parity)))
      throw ParityError("initial." + name + ": value has parity " + std::string(superode::to_string(gr)));
    f.initial.emplace(name, std::move(g));
  }

  if (j.contains("reduction")) {
    f.reduction = at_field("reduction", [&] {
      const json& r = j.at("reduction");
      ParseContext original = ctx;
      original.variables = f.as_flow().variables();
      ReductionResult res{FlowSpec(f.policy, f.budget), {}};
      std::vector<Variable> vars = original.variables;
      for (const auto& [name, value] : r.at("dictionary").items()) {
        NCPolynomial w = polynomial_from_json(value, original);
        if (w.terms().size() != 1 || w.terms().begin()->second != GrassmannElement::scalar(f.budget, Rational(1)))
          throw InputError("dictionary entry " + name + " must be a single word");
        const Word& word = w.terms().begin()->first;
        res.dictionary.emplace(name, word);
        vars.push_back({name, word.parity(), Role::dynamic});
      }
      ParseContext extended = ctx;
      extended.variables = vars;
      res.reduced = FlowSpec(f.policy, f.budget, vars, flow_map(r.at("flow"), extended, "reduction.flow"));
      return res;
    });
  }
  if (j.contains("commuting")) {
    f.commuting = at_field("commuting", [&] {
      ParseContext c = ctx;
      c.variables = f.as_flow().variables();
      return FlowSpec(f.policy, f.budget, c.variables, flow_map(j.at("commuting"), c, "commuting"));
    });
  }
  if (j.contains("symmetry")) {
    const json& s = j.at("symmetry");
    if (s.contains("degree")) f.symmetry_degree = s.at("degree").get<std::size_t>();
    f.symmetry_free = s.value("free", std::vector<std::string>{});
  }
  return f;
}

SystemFile parse_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  try {
    return parse_system_json(j);
  } catch (const ParityError& e) {
    throw ParityError(path + ": " + e.what());
  } catch (const BudgetExhausted& e) {
    throw BudgetExhausted(path + ": " + e.what());
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

json serialize(const SystemFile& f) {
  json j;
  j["version"] = f.version;
  if (!f.name.empty()) j["name"] = f.name;
  json constants = json::array();
  for (const auto& [name, parity] : f.constants) constants.push_back({{"name", name}, {"parity", superode::to_string(parity)}});
  j["generators"] = {{"L", f.budget}, {"constants", constants}};
  j["variables"] = variables_to_json(f.variables);
  j["policy"] = superode::to_string(f.policy);
  j["kind"] = to_string(f.kind);
  switch (f.kind) {
    case SystemKind::flow_polynomials:
      j["flow"] = flow_to_json(*f.flow);
      j["display"] = flow_display(*f.flow, f.registry);
      break;
    case SystemKind::structure_tensor:
      j["tensor"] = tensor_to_json(*f.tensor);
      break;
    case SystemKind::quadratic: {
      const auto& q = *f.quadratic;
      json c = json::object();
      for (std::size_t i = 0; i < q.dim(); ++i)
        if (!q.C()[i].is_zero()) c[q.variables()[i].name] = grassmann_to_json(q.C()[i]);
      json t = json::array();
      for (std::size_t i = 0; i < q.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < q.dim(); ++k) row.push_back(grassmann_to_json(q.T()(i, k)));
        t.push_back(row);
      }
      j["quadratic"] = {{"C", c}, {"T", t}, {"beta", tensor_to_json(q.beta())}};
      break;
    }
    case SystemKind::riccati: {
      const auto& r = *f.riccati;
      j["riccati"] = {{"p", r.p}, {"q", r.q}, {"A", matrix_to_json(r.A)}, {"B", matrix_to_json(r.B)},
                      {"C", matrix_to_json(r.C)}, {"D", matrix_to_json(r.D)}};
      if (f.riccati_x0) j["x0"] = matrix_to_json(*f.riccati_x0);
      break;
    }
  }
  if (!f.initial.empty()) {
    json init = json::object();
    for (const auto& [name, g] : f.initial) init[name] = grassmann_to_json(g);
    j["initial"] = init;
  }
  if (f.reduction) {
    json dict = json::object();
    for (const auto& [name, w] : f.reduction->dictionary) {
      std::vector<std::string> word;
      for (const auto& l : w.letters()) word.push_back(l.name);
      dict[name] = {{"terms", json::array({{{"word", word}, {"coeff", grassmann_to_json(GrassmannElement::scalar(f.budget, Rational(1)))}}})}};
    }
    j["reduction"] = {{"dictionary", dict}, {"flow", flow_to_json(f.reduction->reduced)}};
  }
  if (f.commuting) j["commuting"] = flow_to_json(*f.commuting);
  if (f.symmetry_degree || !f.symmetry_free.empty()) {
    json s = json::object();
    if (f.symmetry_degree) s["degree"] = *f.symmetry_degree;
    if (!f.symmetry_free.empty()) s["free"] = f.symmetry_free;
    j["symmetry"] = s;
  }
  return j;
}

bool same_model(const SystemFile& a, const SystemFile& b) {
  auto same_reduction = [](const std::optional<ReductionResult>& x, const std::optional<ReductionResult>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->reduced == y->reduced && x->dictionary == y->dictionary);
  };
  auto same_riccati = [](const std::optional<RiccatiSpec>& x, const std::optional<RiccatiSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->p == y->p && x->q == y->q && x->A == y->A && x->B == y->B && x->C == y->C && x->D == y->D);
  };
  return a.version == b.version && a.name == b.name && a.budget == b.budget && a.constants == b.constants &&
         a.variables == b.variables && a.policy == b.policy && a.kind == b.kind && a.flow == b.flow &&
         a.tensor == b.tensor && a.quadratic == b.quadratic && same_riccati(a.riccati, b.riccati) &&
         a.initial == b.initial && a.riccati_x0 == b.riccati_x0 && same_reduction(a.reduction, b.reduction) &&
         a.commuting == b.commuting && a.symmetry_degree == b.symmetry_degree && a.symmetry_free == b.symmetry_free;
}

SystemFile with_flow(const SystemFile& f, const FlowSpec& flow, const std::string& name) {
  SystemFile out;
  out.version = f.version;
  out.name = name;
  out.budget = f.budget;
  out.constants = f.constants;
  out.registry = f.registry;
  out.variables = flow.variables();
  out.policy = flow.policy();
  out.kind = SystemKind::flow_polynomials;
  out.flow = flow;
  for (const auto& [var, value] : f.initial)
    if (flow.has(var)) out.initial.emplace(var, value);
  return out;
}

}  // namespace superode::cli
