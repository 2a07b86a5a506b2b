#include "superode/freepoly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace superode {

const char* to_string(Policy p) noexcept { return p == Policy::free ? "free" : "supercommutative"; }

Policy parse_policy(const std::string& s) {
  if (s == "free") return Policy::free;
  if (s == "supercommutative") return Policy::supercommutative;
  throw InputError("policy must be 'free' or 'supercommutative', got '" + s + "'");
}

// ---------------------------------------------------------------------- Word

Parity Word::parity() const noexcept {
  Parity p = Parity::even;
  for (const auto& l : letters_) p = p + l.parity;
  return p;
}

std::size_t Word::count(const std::string& name) const {
  return static_cast<std::size_t>(
      std::count_if(letters_.begin(), letters_.end(), [&](const Variable& v) { return v.name == name; }));
}

Word Word::slice(std::size_t from, std::size_t to) const {
  return Word(std::vector<Variable>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                                    letters_.begin() + static_cast<std::ptrdiff_t>(to)));
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Variable> out = a.letters_;
  out.insert(out.end(), b.letters_.begin(), b.letters_.end());
  return Word(std::move(out));
}

std::optional<std::pair<int, Word>> Word::normalize(Word w, Policy policy) {
  if (policy == Policy::free) return std::pair{1, std::move(w)};
  auto& l = w.letters_;
  int sign = 1;
  // Insertion sort; each adjacent transposition contributes its Koszul sign.
  for (std::size_t i = 1; i < l.size(); ++i) {
    for (std::size_t j = i; j > 0 && l[j].name < l[j - 1].name; --j) {
      sign *= koszul_sign(l[j].parity, l[j - 1].parity);
      std::swap(l[j], l[j - 1]);
    }
  }
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i].name == l[i - 1].name && is_odd(l[i].parity)) return std::nullopt;
  return std::pair{sign, std::move(w)};
}

std::strong_ordering Word::operator<=>(const Word& o) const {
  if (auto c = letters_.size() <=> o.letters_.size(); c != 0) return c;
  for (std::size_t i = 0; i < letters_.size(); ++i)
    if (auto c = letters_[i].name <=> o.letters_[i].name; c != 0) return c;
  return std::strong_ordering::equal;
}

bool Word::operator==(const Word& o) const { return (*this <=> o) == 0; }

std::string Word::to_string() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j].name == letters_[i].name) ++j;
    if (!first) os << '*';
    first = false;
    os << letters_[i].name;
    if (j - i > 1) os << '^' << (j - i);
    i = j;
  }
  return os.str();
}

// -------------------------------------------------------------- NCPolynomial

NCPolynomial NCPolynomial::constant(Policy policy, const GrassmannElement& c) {
  NCPolynomial out(policy, c.budget());
  out.add_term(Word{}, c);
  return out;
}

NCPolynomial NCPolynomial::scalar(Policy policy, std::size_t budget, const Rational& q) {
  return constant(policy, GrassmannElement::scalar(budget, q));
}

NCPolynomial NCPolynomial::variable(Policy policy, std::size_t budget, const Variable& v) {
  NCPolynomial out(policy, budget);
  out.add_term(Word{v}, GrassmannElement::scalar(budget, Rational(1)));
  return out;
}

NCPolynomial NCPolynomial::monomial(Policy policy, const GrassmannElement& c, const Word& w) {
  NCPolynomial out(policy, c.budget());
  out.add_term(w, c);
  return out;
}

void NCPolynomial::add_term(const Word& w, const GrassmannElement& c) {
  if (c.budget() != budget_)
    throw BudgetMismatch("coefficient budget L=" + std::to_string(c.budget()) + " in polynomial over L=" +
                         std::to_string(budget_));
  if (c.is_zero()) return;
  auto normal = Word::normalize(w, policy_);
  if (!normal) return;
  auto [it, inserted] = terms_.try_emplace(normal->second, normal->first < 0 ? -c : c);
  if (!inserted) {
    if (normal->first < 0)
      it->second -= c;
    else
      it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GrassmannElement NCPolynomial::coefficient(const Word& w) const {
  auto normal = Word::normalize(w, policy_);
  if (!normal) return GrassmannElement(budget_);
  auto it = terms_.find(normal->second);
  if (it == terms_.end()) return GrassmannElement(budget_);
  return normal->first < 0 ? -it->second : it->second;
}

std::size_t NCPolynomial::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, w.size());
  return d;
}

std::optional<std::size_t> NCPolynomial::homogeneous_degree_in(const std::vector<std::string>& names) const {
  std::optional<std::size_t> deg;
  for (const auto& [w, c] : terms_) {
    std::size_t d = 0;
    for (const auto& l : w.letters())
      if (std::find(names.begin(), names.end(), l.name) != names.end()) ++d;
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg;
}

Grade NCPolynomial::grade() const noexcept {
  bool has_even = false, has_odd = false;
  for (const auto& [w, c] : terms_) {
    const GrassmannElement ce = c.even_part();
    const GrassmannElement co = c.odd_part();
    const bool word_odd = is_odd(w.parity());
    if (!ce.is_zero()) (word_odd ? has_odd : has_even) = true;
    if (!co.is_zero()) (word_odd ? has_even : has_odd) = true;
  }
  if (has_even && has_odd) return Grade::mixed;
  if (has_odd) return Grade::odd;
  return has_even ? Grade::even : Grade::zero;
}

std::map<std::string, Variable> NCPolynomial::letters() const {
  std::map<std::string, Variable> out;
  for (const auto& [w, c] : terms_)
    for (const auto& l : w.letters()) out.emplace(l.name, l);
  return out;
}

void NCPolynomial::check_compatible(const NCPolynomial& o, const char* op) const {
  if (policy_ != o.policy_)
    throw PolicyMismatch(std::string("polynomial ") + op + " mixes " + superode::to_string(policy_) + " and " +
                         superode::to_string(o.policy_) + " policies");
  if (budget_ != o.budget_) throw BudgetMismatch(std::string("polynomial ") + op + " mixes generator budgets");
}

NCPolynomial& NCPolynomial::operator+=(const NCPolynomial& o) {
  check_compatible(o, "sum");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NCPolynomial& NCPolynomial::operator-=(const NCPolynomial& o) {
  check_compatible(o, "difference");
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

NCPolynomial& NCPolynomial::operator*=(const Rational& q) {
  if (superode::is_zero(q)) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= q;
  return *this;
}

NCPolynomial NCPolynomial::operator-() const {
  NCPolynomial out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b) {
  a.check_compatible(b, "product");
  NCPolynomial out(a.policy_, a.budget_);
  for (const auto& [wa, ca] : a.terms_) {
    const Parity pa = wa.parity();
    for (const auto& [wb, cb] : b.terms_) {
      // ca wa cb wb = ca (twist cb) wa wb
      GrassmannElement c = ca * cb.twisted(pa);
      out.add_term(wa * wb, c);
    }
  }
  return out;
}

bool NCPolynomial::operator==(const NCPolynomial& o) const {
  return policy_ == o.policy_ && budget_ == o.budget_ && terms_ == o.terms_;
}

std::string NCPolynomial::to_string(const CoefficientPrinter& printer) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    std::string coeff;
    bool negative = false;
    if (c.terms().size() == 1 && c.terms().begin()->first.empty()) {
      Rational q = c.body();
      negative = sgn(q) < 0;
      Rational mag = abs(q);
      coeff = (mag == 1 && !w.empty()) ? "" : mag.get_str();
    } else {
      coeff = "(" + (printer ? printer(c) : c.to_string()) + ")";
    }
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    os << coeff;
    if (!w.empty()) os << (coeff.empty() ? "" : "*") << w.to_string();
  }
  return os.str();
}

// ------------------------------------------------------------------ FlowSpec

FlowSpec::FlowSpec(Policy policy, std::size_t budget, std::vector<Variable> variables,
                   std::map<std::string, NCPolynomial> rhs)
    : policy_(policy), budget_(budget), variables_(std::move(variables)) {
  std::set<std::string> names;
  for (const auto& v : variables_)
    if (!names.insert(v.name).second) throw InputError("variable '" + v.name + "' declared twice");
  for (auto& [name, p] : rhs)
    if (!names.count(name)) throw InputError("equation given for undeclared variable '" + name + "'");
  for (const auto& v : variables_) {
    auto it = rhs.find(v.name);
    NCPolynomial p = it == rhs.end() ? NCPolynomial(policy, budget) : it->second;
    if (p.policy() != policy) throw PolicyMismatch("rhs of '" + v.name + "' uses a different policy");
    if (p.budget() != budget) throw BudgetMismatch("rhs of '" + v.name + "' uses a different generator budget");
    for (const auto& [lname, letter] : p.letters()) {
      auto decl = std::find_if(variables_.begin(), variables_.end(), [&](const Variable& u) { return u.name == lname; });
      if (decl == variables_.end() && letter.role != Role::direction)
        throw InputError("rhs of '" + v.name + "' uses undeclared variable '" + lname + "'");
      if (decl != variables_.end() && decl->parity != letter.parity)
        throw ParityError("letter '" + lname + "' used with the wrong parity");
    }
    const Grade g = p.grade();
    if (g == Grade::mixed || (g != Grade::zero && (g == Grade::odd) != is_odd(v.parity)))
      throw ParityError("rhs of " + std::string(superode::to_string(v.parity)) + " variable '" + v.name +
                        "' has parity " + superode::to_string(g));
    rhs_.emplace(v.name, std::move(p));
  }
}

const Variable& FlowSpec::variable(const std::string& name) const {
  for (const auto& v : variables_)
    if (v.name == name) return v;
  throw InputError("unknown variable '" + name + "'");
}

const NCPolynomial& FlowSpec::rhs(const std::string& name) const {
  auto it = rhs_.find(name);
  if (it == rhs_.end()) throw InputError("unknown variable '" + name + "'");
  return it->second;
}

std::size_t FlowSpec::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& [n, p] : rhs_) d = std::max(d, p.degree());
  return d;
}

// ------------------------------------------------------------------ calculus

NCPolynomial substitute(const NCPolynomial& p, const Substitution& sigma, SubstitutionMode mode) {
  for (const auto& [name, image] : sigma) {
    if (image.policy() != p.policy()) throw PolicyMismatch("image of '" + name + "' uses a different policy");
    if (image.budget() != p.budget()) throw BudgetMismatch("image of '" + name + "' uses a different budget");
  }
  const auto letters = p.letters();
  for (const auto& [name, letter] : letters) {
    auto it = sigma.find(name);
    if (it == sigma.end()) {
      if (mode == SubstitutionMode::total) throw InputError("no assignment for letter '" + name + "'");
      continue;
    }
    const Grade g = it->second.grade();
    if (g == Grade::mixed || (g != Grade::zero && (g == Grade::odd) != is_odd(letter.parity)))
      throw ParityError("image of " + std::string(to_string(letter.parity)) + " letter '" + name + "' has parity " +
                        to_string(g));
  }
  NCPolynomial out(p.policy(), p.budget());
  for (const auto& [w, c] : p.terms()) {
    NCPolynomial acc = NCPolynomial::constant(p.policy(), c);
    for (const auto& l : w.letters()) {
      auto it = sigma.find(l.name);
      acc = acc * (it == sigma.end() ? NCPolynomial::variable(p.policy(), p.budget(), l) : it->second);
      if (acc.is_zero()) break;
    }
    out += acc;
  }
  return out;
}

NCPolynomial derivation_apply(const FlowSpec& flow, const NCPolynomial& p) {
  if (p.policy() != flow.policy()) throw PolicyMismatch("derivation and polynomial use different policies");
  if (p.budget() != flow.budget()) throw BudgetMismatch("derivation and polynomial use different budgets");
  const GrassmannElement one = GrassmannElement::scalar(p.budget(), Rational(1));
  NCPolynomial out(p.policy(), p.budget());
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Variable& l = w[i];
      if (!flow.has(l.name)) {
        if (l.role == Role::direction) continue;
        throw InputError("derivation has no equation for '" + l.name + "'");
      }
      NCPolynomial left = NCPolynomial::monomial(p.policy(), c, w.slice(0, i));
      NCPolynomial right = NCPolynomial::monomial(p.policy(), one, w.slice(i + 1, w.size()));
      out += left * flow.rhs(l.name) * right;
    }
  }
  return out;
}

NCPolynomial frechet(const NCPolynomial& p, const std::vector<Variable>& vars, const std::vector<Variable>& directions) {
  if (vars.size() != directions.size()) throw DimensionMismatch("one direction per variable is required");
  const auto letters = p.letters();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].parity != directions[i].parity)
      throw ParityError("direction '" + directions[i].name + "' must share the parity of '" + vars[i].name + "'");
    if (letters.count(directions[i].name))
      throw InputError("direction '" + directions[i].name + "' already occurs in the polynomial");
  }
  NCPolynomial out(p.policy(), p.budget());
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      auto it = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == w[pos].name; });
      if (it == vars.end()) continue;
      std::vector<Variable> letters_copy = w.letters();
      letters_copy[pos] = directions[static_cast<std::size_t>(it - vars.begin())];
      out.add_term(Word(std::move(letters_copy)), c);
    }
  }
  return out;
}

NCPolynomial polarize(const NCPolynomial& q, const std::vector<Variable>& vars, const std::vector<Variable>& copies) {
  if (vars.size() != copies.size()) throw DimensionMismatch("one copy per variable is required");
  std::vector<std::string> names;
  for (const auto& v : vars) names.push_back(v.name);
  if (!q.is_zero()) {
    auto d = q.homogeneous_degree_in(names);
    if (!d || *d != 2) throw InputError("polarization needs a polynomial homogeneous of degree 2");
  }
  const auto letters = q.letters();
  Substitution sum, only_copy;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].parity != copies[i].parity) throw ParityError("copy '" + copies[i].name + "' changes parity");
    if (letters.count(copies[i].name)) throw InputError("copy '" + copies[i].name + "' is not fresh");
    auto x = NCPolynomial::variable(q.policy(), q.budget(), vars[i]);
    auto y = NCPolynomial::variable(q.policy(), q.budget(), copies[i]);
    sum.emplace(vars[i].name, x + y);
    only_copy.emplace(vars[i].name, y);
  }
  NCPolynomial out = substitute(q, sum, SubstitutionMode::partial) - q -
                     substitute(q, only_copy, SubstitutionMode::partial);
  return out * Rational(1, 2);
}

// -------------------------------------------------------------- ProductTable

ProductTable::ProductTable(std::size_t dim)
    : dim_(dim), table_(dim * dim, std::vector<Rational>(dim, Rational(0))) {}

void ProductTable::set(std::size_t i, std::size_t j, std::vector<Rational> image) {
  if (i >= dim_ || j >= dim_ || image.size() != dim_) throw DimensionMismatch("product table entry out of range");
  table_[i * dim_ + j] = std::move(image);
}

const std::vector<Rational>& ProductTable::get(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw DimensionMismatch("product table entry out of range");
  return table_[i * dim_ + j];
}

std::vector<Rational> ProductTable::apply(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
  if (a.size() != dim_ || b.size() != dim_) throw DimensionMismatch("product table operand size");
  std::vector<Rational> out(dim_, Rational(0));
  for (std::size_t i = 0; i < dim_; ++i) {
    if (superode::is_zero(a[i])) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (superode::is_zero(b[j])) continue;
      const Rational s = a[i] * b[j];
      const auto& img = table_[i * dim_ + j];
      for (std::size_t k = 0; k < dim_; ++k)
        if (!superode::is_zero(img[k])) out[k] += s * img[k];
    }
  }
  return out;
}

bool ProductTable::is_associative() const {
  auto unit = [&](std::size_t i) {
    std::vector<Rational> e(dim_, Rational(0));
    e[i] = 1;
    return e;
  };
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        if (apply(apply(unit(i), unit(j)), unit(k)) != apply(unit(i), apply(unit(j), unit(k)))) return false;
  return true;
}

bool ProductTable::is_commutative() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      if (get(i, j) != get(j, i)) return false;
  return true;
}

ProductTable ProductTable::matrix_units(std::size_t n) {
  ProductTable t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d) {
        std::vector<Rational> img(n * n, Rational(0));
        img[a * n + d] = 1;
        t.set(a * n + b, b * n + d, std::move(img));
      }
  return t;
}

}  // namespace superode
