#include "superode/nary.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "superode/quadratic.hpp"

namespace superode {

StructureTensor::StructureTensor(std::size_t n, std::size_t arity, std::size_t budget)
    : n_(n), arity_(arity), budget_(budget) {
  if (arity == 0) throw InputError("structure tensor arity must be at least 1");
}

void StructureTensor::check_key(std::size_t i, const std::vector<std::size_t>& k) const {
  if (k.size() != arity_)
    throw DimensionMismatch("tensor entry has " + std::to_string(k.size()) + " upper indices, arity is " +
                            std::to_string(arity_));
  if (i >= n_ || std::any_of(k.begin(), k.end(), [&](std::size_t j) { return j >= n_; }))
    throw DimensionMismatch("tensor index out of range 1.." + std::to_string(n_));
}

void StructureTensor::set(std::size_t i, const std::vector<std::size_t>& k, GrassmannElement c) {
  check_key(i, k);
  if (c.budget() != budget_) throw BudgetMismatch("tensor coefficient over a different generator budget");
  if (c.is_zero())
    entries_.erase({i, k});
  else
    entries_[{i, k}] = std::move(c);
}

void StructureTensor::add(std::size_t i, const std::vector<std::size_t>& k, const GrassmannElement& c) {
  set(i, k, get(i, k) + c);
}

GrassmannElement StructureTensor::get(std::size_t i, const std::vector<std::size_t>& k) const {
  check_key(i, k);
  auto it = entries_.find({i, k});
  return it == entries_.end() ? GrassmannElement(budget_) : it->second;
}

bool StructureTensor::is_symmetric() const {
  for (const auto& [key, c] : entries_) {
    std::vector<std::size_t> k = key.second;
    std::sort(k.begin(), k.end());
    do {
      if (get(key.first, k) != c) return false;
    } while (std::next_permutation(k.begin(), k.end()));
  }
  return true;
}

SuperVector mu_eval(const StructureTensor& t, const std::vector<SuperVector>& args) {
  if (args.size() != t.arity())
    throw DimensionMismatch("mu takes " + std::to_string(t.arity()) + " arguments, got " + std::to_string(args.size()));
  for (const auto& a : args) {
    if (a.size() != t.n()) throw DimensionMismatch("argument of dimension " + std::to_string(a.size()));
    if (a.budget() != t.budget()) throw BudgetMismatch("argument over a different generator budget");
    if (a.p() != args[0].p()) throw DimensionMismatch("arguments have different (p, q) shapes");
  }
  std::vector<GrassmannElement> out(t.n(), GrassmannElement(t.budget()));
  for (const auto& [key, c] : t.entries()) {
    GrassmannElement term = c;
    for (std::size_t s = 0; s < key.second.size() && !term.is_zero(); ++s) term = term * args[s][key.second[s]];
    out[key.first] += term;
  }
  return SuperVector(args[0].p(), args[0].q(), std::move(out));
}

FlowSpec build_system(const StructureTensor& t, const std::vector<Variable>& vars, Policy policy) {
  if (vars.size() != t.n())
    throw DimensionMismatch("tensor on " + std::to_string(t.n()) + " slots, " + std::to_string(vars.size()) +
                            " variables given");
  std::map<std::string, NCPolynomial> rhs;
  for (const auto& v : vars) rhs.emplace(v.name, NCPolynomial(policy, t.budget()));
  for (const auto& [key, c] : t.entries()) {
    std::vector<Variable> letters;
    for (auto k : key.second) letters.push_back(vars[k]);
    rhs.at(vars[key.first].name).add_term(Word(std::move(letters)), c);
  }
  return FlowSpec(policy, t.budget(), vars, std::move(rhs));
}

StructureTensor tensor_from_flow(const FlowSpec& flow) {
  std::optional<std::size_t> degree;
  for (const auto& [name, p] : flow.equations())
    for (const auto& [w, c] : p.terms()) {
      if (degree && *degree != w.size()) throw InputError("flow is not homogeneous; no structure tensor");
      degree = w.size();
    }
  const auto& vars = flow.variables();
  StructureTensor t(vars.size(), degree.value_or(1), flow.budget());
  if (degree && *degree == 0) throw InputError("constant flow has no structure tensor");
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == name) return i;
    throw InputError("letter '" + name + "' is not a flow variable");
  };
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (const auto& [w, c] : flow.rhs(vars[i].name).terms()) {
      std::vector<std::size_t> k;
      for (const auto& l : w.letters()) k.push_back(index_of(l.name));
      t.add(i, k, c);
    }
  return t;
}

// ----------------------------------------------------------------- reduction

namespace {

struct Split {
  int sign = 1;
  Word left;
  Word right;
};

class Reducer {
 public:
  Reducer(const FlowSpec& flow, const ReductionOptions& opt) : flow_(flow), opt_(opt) {
    n_ = flow.degree();
    homogeneous_ = true;
    for (const auto& [name, p] : flow.equations())
      for (const auto& [w, c] : p.terms())
        if (w.size() != n_) homogeneous_ = false;
  }

  ReductionResult run() {
    for (const auto& v : flow_.variables()) rewrite(Word{v}, flow_.rhs(v.name));
    while (!queue_.empty()) {
      Word w = queue_.front();
      queue_.pop_front();
      const GrassmannElement one = GrassmannElement::scalar(flow_.budget(), Rational(1));
      rewrite(w, derivation_apply(flow_, NCPolynomial::monomial(flow_.policy(), one, w)));
    }
    return assemble();
  }

 private:
  bool part_allowed(std::size_t len) const {
    if (len == 1) return true;
    if (len < 2 || len + 1 > n_) return false;
    return !homogeneous_ || len + 1 == n_;
  }

  bool available(const Word& w) const { return w.size() == 1 || words_.count(w); }

  std::vector<Split> candidates(const Word& w) const {
    std::vector<Split> out;
    const std::size_t len = w.size();
    if (flow_.policy() == Policy::free) {
      for (std::size_t cut = 1; cut < len; ++cut)
        if (part_allowed(cut) && part_allowed(len - cut)) out.push_back({1, w.slice(0, cut), w.slice(cut, len)});
      return out;
    }
    std::set<std::pair<Word, Word>> seen;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << len); ++mask) {
      std::vector<Variable> a, b;
      for (std::size_t i = 0; i < len; ++i) (mask >> i & 1 ? a : b).push_back(w[i]);
      if (!part_allowed(a.size()) || !part_allowed(b.size())) continue;
      Word wa(std::move(a)), wb(std::move(b));
      if (!seen.insert({wa, wb}).second) continue;
      auto normal = Word::normalize(wa * wb, flow_.policy());
      if (!normal) continue;
      out.push_back({normal->first, std::move(wa), std::move(wb)});
    }
    return out;
  }

  void need(const Word& w) {
    if (w.size() < 2 || words_.count(w)) return;
    if (words_.size() >= opt_.max_new_variables)
      throw InputError("reduction needs more than " + std::to_string(opt_.max_new_variables) + " new variables");
    words_.insert(w);
    queue_.push_back(w);
  }

  void rewrite(const Word& key, const NCPolynomial& p) {
    auto& out = rewritten_[key];
    for (const auto& [w, c] : p.terms()) {
      if (w.size() <= 2) {
        out.push_back({c, w, Word{}, false});
        continue;
      }
      auto cands = candidates(w);
      if (cands.empty()) throw InputError("word " + w.to_string() + " cannot be split into available parts");
      auto cost = [&](const Split& s) { return int(!available(s.left)) + int(!available(s.right)); };
      auto best = std::min_element(cands.begin(), cands.end(), [&](const Split& x, const Split& y) {
        const int cx = cost(x), cy = cost(y);
        if (cx != cy) return cx < cy;
        if (x.left != y.left) return x.left < y.left;
        return x.right < y.right;
      });
      need(best->left);
      need(best->right);
      out.push_back({best->sign < 0 ? -c : c, best->left, best->right, true});
    }
  }

  ReductionResult assemble() const {
    std::set<std::string> taken;
    for (const auto& v : flow_.variables()) taken.insert(v.name);
    std::map<Word, Variable> names;
    std::size_t counter = 0;
    for (const auto& w : words_) {
      std::string name;
      do name = opt_.prefix + std::to_string(++counter);
      while (taken.count(name));
      taken.insert(name);
      names.emplace(w, Variable{name, w.parity(), Role::dynamic});
    }
    auto letter = [&](const Word& w) { return w.size() == 1 ? w[0] : names.at(w); };

    std::vector<Variable> vars = flow_.variables();
    for (const auto& [w, v] : names) vars.push_back(v);
    std::map<std::string, NCPolynomial> rhs;
    ReductionResult result{FlowSpec(flow_.policy(), flow_.budget()), {}};
    for (const auto& [key, terms] : rewritten_) {
      NCPolynomial p(flow_.policy(), flow_.budget());
      for (const auto& t : terms) {
        if (!t.split)
          p.add_term(t.left, t.coeff);
        else
          p.add_term(Word{letter(t.left), letter(t.right)}, t.coeff);
      }
      rhs.emplace(letter(key).name, std::move(p));
    }
    for (const auto& [w, v] : names) result.dictionary.emplace(v.name, w);
    result.reduced = FlowSpec(flow_.policy(), flow_.budget(), std::move(vars), std::move(rhs));
    return result;
  }

  struct Term {
    GrassmannElement coeff;
    Word left;
    Word right;
    bool split;
  };

  const FlowSpec& flow_;
  const ReductionOptions& opt_;
  std::size_t n_ = 0;
  bool homogeneous_ = true;
  std::set<Word> words_;
  std::deque<Word> queue_;
  std::map<Word, std::vector<Term>> rewritten_;
};

std::string first_difference(const NCPolynomial& want, const NCPolynomial& got) {
  NCPolynomial diff = got - want;
  if (diff.is_zero()) return {};
  const auto& [w, c] = *diff.terms().begin();
  return "term " + w.to_string() + ": expected " + want.coefficient(w).to_string() + ", got " +
         got.coefficient(w).to_string();
}

}  // namespace

ReductionResult reduce_to_quadratic(const FlowSpec& flow, const ReductionOptions& options) {
  if (flow.degree() <= 2) return {flow, {}};
  return Reducer(flow, options).run();
}

VerificationReport verify_reduction(const FlowSpec& original, const ReductionResult& r) {
  VerificationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.counterexample = std::move(msg);
    return rep;
  };
  const auto& reduced = r.reduced;
  if (reduced.policy() != original.policy()) return fail("reduced system uses a different policy");
  Substitution sigma;
  const GrassmannElement one = GrassmannElement::scalar(original.budget(), Rational(1));
  for (const auto& [name, w] : r.dictionary) {
    if (!reduced.has(name)) return fail("dictionary variable " + name + " has no equation");
    for (const auto& l : w.letters())
      if (!original.has(l.name)) return fail("dictionary word for " + name + " uses unknown letter " + l.name);
    sigma.emplace(name, NCPolynomial::monomial(original.policy(), one, w));
  }
  for (const auto& [name, p] : reduced.equations())
    if (p.degree() > 2) return fail("d/dt " + name + " has degree " + std::to_string(p.degree()));
  try {
    for (const auto& v : original.variables()) {
      if (!reduced.has(v.name)) return fail("variable " + v.name + " missing from the reduced system");
      auto got = substitute(reduced.rhs(v.name), sigma, SubstitutionMode::partial);
      if (auto d = first_difference(original.rhs(v.name), got); !d.empty()) return fail("d/dt " + v.name + ": " + d);
    }
    for (const auto& [name, w] : r.dictionary) {
      auto want = derivation_apply(original, sigma.at(name));
      auto got = substitute(reduced.rhs(name), sigma, SubstitutionMode::partial);
      if (auto d = first_difference(want, got); !d.empty())
        return fail("d/dt " + name + " (= " + w.to_string() + "): " + d);
    }
  } catch (const Error& e) {
    return fail(e.what());
  }
  return rep;
}

QuadraticSystem homogenize(const QuadraticSystem& s, const std::string& u_name) {
  if (s.slot(u_name)) throw InputError("variable '" + u_name + "' already exists");
  const std::size_t p = s.p(), n = s.dim(), L = s.budget();
  std::vector<Variable> vars(s.variables().begin(), s.variables().begin() + static_cast<std::ptrdiff_t>(p));
  vars.push_back({u_name, Parity::even, Role::dynamic});
  vars.insert(vars.end(), s.variables().begin() + static_cast<std::ptrdiff_t>(p), s.variables().end());
  auto map = [&](std::size_t i) { return i < p ? i : i + 1; };
  const std::size_t u = p;

  StructureTensor beta(n + 1, 2, L);
  for (const auto& [key, c] : s.beta().entries()) beta.set(map(key.first), {map(key.second[0]), map(key.second[1])}, c);
  const Rational half(1, 2);
  for (std::size_t i = 0; i < n; ++i) {
    beta.add(map(i), {u, u}, s.C()[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (s.T()(i, j).is_zero()) continue;
      beta.add(map(i), {map(j), u}, s.T()(i, j) * half);
      beta.add(map(i), {u, map(j)}, s.T()(i, j) * half);
    }
  }
  return QuadraticSystem(std::move(vars), SuperVector::zero(p + 1, n - p, L), LinearMap(n + 1, n + 1, GrassmannElement(L)),
                         std::move(beta));
}

FlowSpec homogenize_flow(const FlowSpec& flow, const std::string& u_name) {
  if (flow.degree() > 2) throw InputError("homogenization needs a flow of degree at most 2");
  for (const auto& v : flow.variables())
    if (v.name == u_name) throw InputError("variable '" + u_name + "' already exists");
  const Variable u{u_name, Parity::even, Role::dynamic};
  std::vector<Variable> vars;
  bool placed = false;
  for (const auto& v : flow.variables()) {
    if (!placed && is_odd(v.parity)) {
      vars.push_back(u);
      placed = true;
    }
    vars.push_back(v);
  }
  if (!placed) vars.push_back(u);
  std::map<std::string, NCPolynomial> rhs;
  for (const auto& [name, p] : flow.equations()) {
    NCPolynomial out(flow.policy(), flow.budget());
    for (const auto& [w, c] : p.terms()) {
      std::vector<Variable> letters(2 - w.size(), u);
      letters.insert(letters.end(), w.letters().begin(), w.letters().end());
      out.add_term(Word(std::move(letters)), c);
    }
    rhs.emplace(name, std::move(out));
  }
  return FlowSpec(flow.policy(), flow.budget(), std::move(vars), std::move(rhs));
}

}  // namespace superode
