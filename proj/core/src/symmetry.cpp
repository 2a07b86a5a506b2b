#include "superode/symmetry.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include "superode/parse.hpp"

namespace superode {

// ------------------------------------------------------------------- ansatz

std::size_t AnsatzTemplate::rational_count() const {
  std::size_t n = 0;
  for (const auto& u : unknowns) n += u.expansion.size();
  return n;
}

std::size_t AnsatzTemplate::offset(std::size_t u) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < u; ++i) n += unknowns[i].expansion.size();
  return n;
}

std::vector<std::string> AnsatzTemplate::rational_names() const {
  std::vector<std::string> out;
  for (const auto& u : unknowns)
    for (const auto& idx : u.expansion) out.push_back(idx.empty() ? u.name : u.name + "{" + idx.to_string().substr(1, idx.to_string().size() - 2) + "}");
  return out;
}

std::size_t AnsatzTemplate::index_of(const std::string& name) const {
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    if (unknowns[u].name == name) return u;
  throw InputError("unknown coefficient '" + name + "'");
}

namespace {

std::vector<Word> ansatz_monomials(const std::vector<Variable>& vars, Policy policy, std::size_t degree) {
  std::set<Word> out;
  if (policy == Policy::free) {
    std::vector<Word> layer{Word{}};
    out.insert(Word{});
    for (std::size_t len = 1; len <= degree; ++len) {
      std::vector<Word> next;
      for (const auto& w : layer)
        for (const auto& v : vars) next.push_back(w * Word{v});
      out.insert(next.begin(), next.end());
      layer = std::move(next);
    }
    return {out.begin(), out.end()};
  }
  std::vector<Variable> evens, odds;
  for (const auto& v : vars) (is_odd(v.parity) ? odds : evens).push_back(v);
  std::vector<std::vector<Variable>> even_monos{{}};
  std::function<void(std::size_t, std::vector<Variable>&)> grow = [&](std::size_t from, std::vector<Variable>& cur) {
    if (cur.size() == degree) return;
    for (std::size_t i = from; i < evens.size(); ++i) {
      cur.push_back(evens[i]);
      even_monos.push_back(cur);
      grow(i, cur);
      cur.pop_back();
    }
  };
  std::vector<Variable> cur;
  grow(0, cur);
  for (const auto& e : even_monos)
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << odds.size()); ++mask) {
      std::vector<Variable> letters = e;
      for (std::size_t i = 0; i < odds.size(); ++i)
        if (mask >> i & 1) letters.push_back(odds[i]);
      auto n = Word::normalize(Word(std::move(letters)), policy);
      if (n) out.insert(n->second);
    }
  return {out.begin(), out.end()};
}

}  // namespace

AnsatzTemplate ansatz_build(const FlowSpec& flow, std::size_t degree, const std::vector<std::uint32_t>& extra_generators) {
  AnsatzTemplate a;
  a.policy = flow.policy();
  a.budget = flow.budget();
  a.degree = degree;
  a.variables = flow.variables();
  std::set<std::uint32_t> gens(extra_generators.begin(), extra_generators.end());
  for (const auto& [name, p] : flow.equations())
    for (const auto& [w, c] : p.terms())
      for (const auto& [idx, q] : c.terms()) gens.insert(idx.generators().begin(), idx.generators().end());
  for (auto g : gens)
    if (g == 0 || g > a.budget) throw BudgetExhausted("generator " + std::to_string(g) + " outside budget " + std::to_string(a.budget));
  a.generators.assign(gens.begin(), gens.end());
  const auto monos = ansatz_monomials(flow.variables(), flow.policy(), degree);
  for (const auto& v : flow.variables())
    for (const auto& m : monos) {
      AnsatzUnknown u;
      u.name = v.name + "[" + m.to_string() + "]";
      u.variable = v.name;
      u.monomial = m;
      u.parity = v.parity + m.parity();
      u.expansion = monomials_over(a.generators, u.parity);
      a.unknowns.push_back(std::move(u));
    }
  return a;
}

// -------------------------------------------------------------- conditions

namespace {

FlowSpec single_flow(const AnsatzTemplate& a, std::size_t u, const MultiIndex& idx) {
  std::map<std::string, NCPolynomial> rhs;
  const auto& unk = a.unknowns[u];
  rhs.emplace(unk.variable,
              NCPolynomial::monomial(a.policy, GrassmannElement::monomial(a.budget, idx, Rational(1)), unk.monomial));
  return FlowSpec(a.policy, a.budget, a.variables, std::move(rhs));
}

using RowKey = std::tuple<std::size_t, Word, MultiIndex>;

}  // namespace

CommutingSystem commuting_condition(const FlowSpec& flow, const AnsatzTemplate& ansatz) {
  if (flow.policy() != ansatz.policy) throw PolicyMismatch("ansatz and flow use different policies");
  if (flow.budget() != ansatz.budget) throw BudgetMismatch("ansatz and flow use different budgets");
  const auto& vars = flow.variables();
  std::map<RowKey, std::size_t> rows;
  std::set<std::pair<std::size_t, Word>> lambda_rows;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns;
  for (std::size_t u = 0; u < ansatz.unknowns.size(); ++u)
    for (const auto& idx : ansatz.unknowns[u].expansion) {
      const FlowSpec g = single_flow(ansatz, u, idx);
      std::vector<std::pair<std::size_t, Rational>> col;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        NCPolynomial r = derivation_apply(flow, g.rhs(vars[i].name)) - derivation_apply(g, flow.rhs(vars[i].name));
        for (const auto& [w, c] : r.terms())
          for (const auto& [mi, q] : c.terms()) {
            auto [it, fresh] = rows.try_emplace(RowKey{i, w, mi}, rows.size());
            col.emplace_back(it->second, q);
          }
      }
      columns.push_back(std::move(col));
    }
  // Rows are numbered in discovery order; relabel them in key order.
  std::vector<std::size_t> order(rows.size());
  CommutingSystem out;
  out.row_labels.resize(rows.size());
  std::size_t r = 0;
  for (const auto& [key, idx] : rows) {
    order[idx] = r;
    const auto& [i, w, mi] = key;
    out.row_labels[r] = "d/dt " + vars[i].name + " : " + w.to_string() + (mi.empty() ? "" : " {" + mi.to_string() + "}");
    lambda_rows.insert({i, w});
    ++r;
  }
  out.lambda_equations = lambda_rows.size();
  out.matrix = RationalMatrix(rows.size(), columns.size(), Rational(0));
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (const auto& [row, q] : columns[c]) out.matrix(order[row], c) += q;
  return out;
}

// ------------------------------------------------------------------- solve

LinearSolveResult solve_commuting(const FlowSpec& flow, const SolveOptions& opt) {
  LinearSolveResult res;
  res.ansatz = ansatz_build(flow, opt.degree, opt.extra_generators);
  const auto& a = res.ansatz;
  const CommutingSystem sys = commuting_condition(flow, a);
  const std::size_t n = a.rational_count();

  std::vector<bool> preferred(a.unknowns.size(), false);
  for (const auto& name : opt.preferred_free) preferred[a.index_of(name)] = true;
  std::vector<std::size_t> perm;  // column position -> rational index
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t u = 0; u < a.unknowns.size(); ++u)
      if (preferred[u] == (pass == 1))
        for (std::size_t k = 0; k < a.unknowns[u].expansion.size(); ++k) perm.push_back(a.offset(u) + k);

  RationalMatrix m(sys.matrix.rows(), n, Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < n; ++c) m(i, c) = sys.matrix(i, perm[c]);
  const auto basis = nullspace(m);
  res.rank = n - basis.size();
  const auto names = a.rational_names();
  for (const auto& v : basis) {
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t c = 0; c < n; ++c) x[perm[c]] = v[c];
    res.nullspace.push_back(std::move(x));
  }
  RationalMatrix r = m;
  const auto pivots = rref(r);
  std::set<std::size_t> pivot_set(pivots.begin(), pivots.end());
  std::set<std::size_t> free_units;
  for (std::size_t c = 0; c < n; ++c)
    if (!pivot_set.count(c)) {
      res.free_columns.push_back(names[perm[c]]);
      for (std::size_t u = 0; u < a.unknowns.size(); ++u)
        if (perm[c] >= a.offset(u) && perm[c] < a.offset(u) + a.unknowns[u].expansion.size()) free_units.insert(u);
    }
  for (auto u : free_units) res.free_parameters.push_back(a.unknowns[u].name);
  res.particular.assign(n, Rational(0));
  res.unknown_count = n;
  res.equation_count = sys.matrix.rows();
  res.lambda_unknown_count = a.unknowns.size();
  res.lambda_equation_count = sys.lambda_equations;
  return res;
}

FlowSpec instantiate(const AnsatzTemplate& a, const std::vector<Rational>& values) {
  if (values.size() != a.rational_count()) throw DimensionMismatch("assignment has the wrong number of unknowns");
  std::map<std::string, NCPolynomial> rhs;
  for (const auto& v : a.variables) rhs.emplace(v.name, NCPolynomial(a.policy, a.budget));
  std::size_t k = 0;
  for (const auto& u : a.unknowns) {
    GrassmannElement c(a.budget);
    for (const auto& idx : u.expansion) c.add_term(idx, values[k++]);
    rhs.at(u.variable).add_term(u.monomial, c);
  }
  return FlowSpec(a.policy, a.budget, a.variables, std::move(rhs));
}

GrassmannElement unknown_value(const AnsatzTemplate& a, const std::vector<Rational>& values, const std::string& name) {
  const std::size_t u = a.index_of(name);
  GrassmannElement c(a.budget);
  std::size_t k = a.offset(u);
  for (const auto& idx : a.unknowns[u].expansion) c.add_term(idx, values.at(k++));
  return c;
}

std::vector<LambdaRelation> lambda_relations(const LinearSolveResult& r) {
  const auto& a = r.ansatz;
  std::vector<LambdaRelation> out;
  std::vector<std::vector<GrassmannElement>> values(a.unknowns.size());
  for (const auto& v : r.nullspace)
    for (std::size_t u = 0; u < a.unknowns.size(); ++u) values[u].push_back(unknown_value(a, v, a.unknowns[u].name));
  std::vector<std::size_t> free_units;
  for (const auto& name : r.free_parameters) free_units.push_back(a.index_of(name));

  const auto mono_all = monomials_over(a.generators);
  for (std::size_t u = 0; u < a.unknowns.size(); ++u) {
    LambdaRelation rel;
    rel.unknown = a.unknowns[u].name;
    if (std::find(free_units.begin(), free_units.end(), u) != free_units.end()) {
      rel.free = rel.found = true;
      out.push_back(std::move(rel));
      continue;
    }
    // kappa columns: (free unit f, monomial nu of parity |u| + |f|)
    std::vector<std::pair<std::size_t, MultiIndex>> cols;
    for (auto f : free_units)
      for (const auto& nu : monomials_over(a.generators, a.unknowns[u].parity + a.unknowns[f].parity)) cols.push_back({f, nu});
    const std::size_t nrow = r.nullspace.size() * mono_all.size();
    RationalMatrix m(nrow, cols.size() + 1, Rational(0));
    for (std::size_t j = 0; j < r.nullspace.size(); ++j) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const GrassmannElement prod =
            GrassmannElement::monomial(a.budget, cols[c].second, Rational(1)) * values[cols[c].first][j];
        for (std::size_t mu = 0; mu < mono_all.size(); ++mu) m(j * mono_all.size() + mu, c) = prod.coefficient(mono_all[mu]);
      }
      for (std::size_t mu = 0; mu < mono_all.size(); ++mu)
        m(j * mono_all.size() + mu, cols.size()) = values[u][j].coefficient(mono_all[mu]);
    }
    const auto piv = rref(m);
    rel.found = piv.empty() || piv.back() != cols.size();
    if (rel.found) {
      std::map<std::size_t, GrassmannElement> kappa;
      for (std::size_t k = 0; k < piv.size(); ++k) {
        const auto& [f, nu] = cols[piv[k]];
        auto [it, fresh] = kappa.try_emplace(f, GrassmannElement(a.budget));
        it->second.add_term(nu, m(k, cols.size()));
      }
      for (auto f : free_units) {
        auto it = kappa.find(f);
        if (it != kappa.end() && !it->second.is_zero()) rel.terms.emplace_back(a.unknowns[f].name, it->second);
      }
    }
    out.push_back(std::move(rel));
  }
  return out;
}

std::string format_relation(const LambdaRelation& rel, const ConstantRegistry* constants) {
  std::string out = rel.unknown + " = ";
  if (rel.free) return out + "free";
  if (!rel.found) return out + "(no relation over the free parameters)";
  if (rel.terms.empty()) return out + "0";
  bool first = true;
  for (const auto& [name, kappa] : rel.terms) {
    std::string k = constants ? format_constant(kappa, *constants) : kappa.to_string();
    const bool single = kappa.terms().size() == 1;
    bool negative = false;
    if (single && !k.empty() && k[0] == '-') {
      negative = true;
      k.erase(0, 1);
    }
    std::string piece = k == "1" ? name : (single ? k : "(" + k + ")") + "*" + name;
    if (first)
      out += (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
    first = false;
  }
  return out;
}

// ------------------------------------------------------------------ verify

namespace {

std::vector<Word> words_up_to(const std::vector<Variable>& vars, Policy policy, std::size_t len) {
  std::set<Word> out;
  std::vector<Word> layer{Word{}};
  for (std::size_t l = 1; l <= len; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (const auto& v : vars) {
        Word x = w * Word{v};
        next.push_back(x);
        if (auto n = Word::normalize(x, policy)) out.insert(n->second);
      }
    layer = std::move(next);
  }
  return {out.begin(), out.end()};
}

}  // namespace

CommutingReport verify_commuting(const FlowSpec& f, const FlowSpec& g) {
  if (f.policy() != g.policy()) throw PolicyMismatch("flows use different policies");
  if (f.budget() != g.budget()) throw BudgetMismatch("flows use different budgets");
  for (const auto& v : f.variables()) {
    if (!g.has(v.name)) return {false, "second flow has no equation for " + v.name};
    if (g.variable(v.name).parity != v.parity) return {false, "variable " + v.name + " changes parity"};
    const Grade gr = g.rhs(v.name).grade();
    if (gr == Grade::mixed || (gr != Grade::zero && (gr == Grade::odd) != is_odd(v.parity)))
      return {false, "d/dtau " + v.name + " has the wrong parity"};
  }
  for (const auto& v : f.variables()) {
    const NCPolynomial lhs = derivation_apply(f, g.rhs(v.name));
    const NCPolynomial rhs = derivation_apply(g, f.rhs(v.name));
    const NCPolynomial diff = lhs - rhs;
    if (!diff.is_zero()) {
      const auto& [w, c] = *diff.terms().begin();
      return {false, "D_t G != D_tau F in equation " + v.name + " at " + w.to_string() + " {" + c.to_string() + "}"};
    }
  }
  const GrassmannElement one = GrassmannElement::scalar(f.budget(), Rational(1));
  for (const auto& w : words_up_to(f.variables(), f.policy(), 3)) {
    const NCPolynomial p = NCPolynomial::monomial(f.policy(), one, w);
    if (derivation_apply(f, derivation_apply(g, p)) != derivation_apply(g, derivation_apply(f, p)))
      return {false, "D_t D_tau != D_tau D_t on " + w.to_string()};
  }
  return {};
}

// --------------------------------------------------------- operator form

NCPolynomial OperatorForm::apply(std::size_t i, const std::vector<NCPolynomial>& directions) const {
  if (directions.size() != slots.size()) throw DimensionMismatch("one direction per slot is required");
  NCPolynomial out = directions.at(0) * Rational(0);
  for (std::size_t j = 0; j < slots.size(); ++j)
    for (const auto& t : entries.at(i)[j]) {
      const auto& d = directions[j];
      out += NCPolynomial::monomial(d.policy(), t.coeff, t.left) * d *
             NCPolynomial::monomial(d.policy(), GrassmannElement::scalar(d.budget(), Rational(1)), t.right);
    }
  return out;
}

std::string OperatorForm::to_string(std::size_t i, std::size_t j, const ConstantRegistry* constants) const {
  const auto& terms = entries.at(i).at(j);
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    std::vector<std::string> ops;
    for (std::size_t r = t.right.size(); r-- > 0;) ops.push_back("R_" + t.right[r].name);
    std::string scalar;
    if (t.coeff.terms().size() == 1 && t.coeff.terms().begin()->first.empty()) {
      scalar = t.coeff.body().get_str();
    } else {
      const std::string c = constants ? format_constant(t.coeff, *constants) : t.coeff.to_string();
      ops.push_back(t.coeff.terms().size() == 1 && c.find(' ') == std::string::npos ? "L_" + c : "L_(" + c + ")");
    }
    for (const auto& l : t.left.letters()) ops.push_back("L_" + l.name);
    std::string body;
    for (std::size_t k = 0; k < ops.size(); ++k) body += (k ? " " : "") + ops[k];
    bool negative = false;
    if (!scalar.empty() && scalar[0] == '-') {
      negative = true;
      scalar.erase(0, 1);
    }
    if (!scalar.empty() && scalar != "1") body = body.empty() ? scalar : scalar + " " + body;
    if (body.empty()) body = "1";
    if (first)
      os << (negative ? "-" : "") << body;
    else
      os << (negative ? " - " : " + ") << body;
    first = false;
  }
  return os.str();
}

OperatorForm frechet_operator_form(const FlowSpec& flow) {
  OperatorForm out;
  const auto& vars = flow.variables();
  for (const auto& v : vars) {
    out.equations.push_back(v.name);
    out.slots.push_back(v.name);
  }
  out.entries.assign(vars.size(), std::vector<std::vector<OperatorTerm>>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (const auto& [w, c] : flow.rhs(vars[i].name).terms())
      for (std::size_t pos = 0; pos < w.size(); ++pos) {
        std::size_t j = 0;
        while (j < vars.size() && vars[j].name != w[pos].name) ++j;
        if (j == vars.size()) continue;
        Word left = w.slice(0, pos), right = w.slice(pos + 1, w.size());
        auto& list = out.entries[i][j];
        auto it = std::find_if(list.begin(), list.end(),
                               [&](const OperatorTerm& t) { return t.left == left && t.right == right; });
        if (it == list.end())
          list.push_back({c, std::move(left), std::move(right)});
        else
          it->coeff += c;
      }
  for (auto& row : out.entries)
    for (auto& list : row)
      list.erase(std::remove_if(list.begin(), list.end(), [](const OperatorTerm& t) { return t.coeff.is_zero(); }),
                 list.end());
  return out;
}

}  // namespace superode
