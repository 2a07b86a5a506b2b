#include "superode/grassmann.hpp"

#include <algorithm>
#include <sstream>

namespace superode {

const char* to_string(Parity p) noexcept { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw InputError("parity must be 'even' or 'odd', got '" + s + "'");
}

const char* to_string(Grade g) noexcept {
  switch (g) {
    case Grade::zero: return "zero";
    case Grade::even: return "even";
    case Grade::odd: return "odd";
    case Grade::mixed: return "mixed";
  }
  return "?";
}

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::initializer_list<std::uint32_t> gens)
    : MultiIndex(std::vector<std::uint32_t>(gens)) {}

MultiIndex::MultiIndex(std::vector<std::uint32_t> gens) : gens_(std::move(gens)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i] == 0) throw InputError("generator labels start at 1");
    if (i > 0 && gens_[i] <= gens_[i - 1])
      throw InputError("multi-index must be strictly increasing: " + to_string());
  }
}

std::optional<std::pair<int, MultiIndex>> MultiIndex::multiply(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out;
  out.gens_.reserve(a.size() + b.size());
  // Each time an element of b overtakes the remaining elements of a we pay
  // one transposition per remaining element.
  std::size_t i = 0, j = 0, inversions = 0;
  while (i < a.gens_.size() && j < b.gens_.size()) {
    if (a.gens_[i] == b.gens_[j]) return std::nullopt;
    if (a.gens_[i] < b.gens_[j]) {
      out.gens_.push_back(a.gens_[i++]);
    } else {
      inversions += a.gens_.size() - i;
      out.gens_.push_back(b.gens_[j++]);
    }
  }
  out.gens_.insert(out.gens_.end(), a.gens_.begin() + static_cast<std::ptrdiff_t>(i), a.gens_.end());
  out.gens_.insert(out.gens_.end(), b.gens_.begin() + static_cast<std::ptrdiff_t>(j), b.gens_.end());
  return std::pair{inversions % 2 ? -1 : 1, std::move(out)};
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = gens_.size() <=> other.gens_.size(); c != 0) return c;
  return gens_ <=> other.gens_;
}

std::string MultiIndex::to_string() const {
  if (gens_.empty()) return "[]";
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < gens_.size(); ++i) os << (i ? "," : "") << gens_[i];
  os << ']';
  return os.str();
}

// ---------------------------------------------------------- GrassmannElement

GrassmannElement GrassmannElement::scalar(std::size_t budget, const Rational& q) {
  GrassmannElement out(budget);
  out.add_term(MultiIndex{}, q);
  return out;
}

GrassmannElement GrassmannElement::generator(std::size_t budget, std::uint32_t i) {
  if (i == 0 || i > budget)
    throw BudgetExhausted("generator " + std::to_string(i) + " outside budget L=" + std::to_string(budget));
  return monomial(budget, MultiIndex{i}, Rational(1));
}

GrassmannElement GrassmannElement::monomial(std::size_t budget, const MultiIndex& idx, const Rational& q) {
  if (idx.max_generator() > budget)
    throw BudgetExhausted("monomial " + idx.to_string() + " outside budget L=" + std::to_string(budget));
  GrassmannElement out(budget);
  out.add_term(idx, q);
  return out;
}

Grade GrassmannElement::grade() const noexcept {
  if (terms_.empty()) return Grade::zero;
  bool has_even = false, has_odd = false;
  for (const auto& [idx, q] : terms_) (idx.size() % 2 ? has_odd : has_even) = true;
  if (has_even && has_odd) return Grade::mixed;
  return has_odd ? Grade::odd : Grade::even;
}

Rational GrassmannElement::body() const { return coefficient(MultiIndex{}); }

Rational GrassmannElement::coefficient(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? Rational(0) : it->second;
}

GrassmannElement GrassmannElement::even_part() const {
  GrassmannElement out(budget_);
  for (const auto& [idx, q] : terms_)
    if (idx.parity() == Parity::even) out.terms_.emplace(idx, q);
  return out;
}

GrassmannElement GrassmannElement::odd_part() const {
  GrassmannElement out(budget_);
  for (const auto& [idx, q] : terms_)
    if (idx.parity() == Parity::odd) out.terms_.emplace(idx, q);
  return out;
}

GrassmannElement GrassmannElement::twisted(Parity p) const {
  if (p == Parity::even) return *this;
  GrassmannElement out = *this;
  for (auto& [idx, q] : out.terms_)
    if (idx.parity() == Parity::odd) q = -q;
  return out;
}

GrassmannElement GrassmannElement::with_budget(std::size_t budget) const {
  GrassmannElement out(budget);
  for (const auto& [idx, q] : terms_) {
    if (idx.max_generator() > budget)
      throw BudgetExhausted("element uses generator " + std::to_string(idx.max_generator()) +
                            " beyond L=" + std::to_string(budget));
    out.terms_.emplace(idx, q);
  }
  return out;
}

void GrassmannElement::add_term(const MultiIndex& idx, const Rational& q) {
  if (superode::is_zero(q)) return;
  if (idx.max_generator() > budget_)
    throw BudgetExhausted("monomial " + idx.to_string() + " outside budget L=" + std::to_string(budget_));
  auto [it, inserted] = terms_.try_emplace(idx, q);
  if (!inserted) {
    it->second += q;
    if (superode::is_zero(it->second)) terms_.erase(it);
  }
}

void GrassmannElement::check_budget(const GrassmannElement& other, const char* op) const {
  if (budget_ != other.budget_)
    throw BudgetMismatch(std::string("generator budgets differ in ") + op + ": L=" +
                         std::to_string(budget_) + " vs L=" + std::to_string(other.budget_));
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& other) {
  check_budget(other, "addition");
  for (const auto& [idx, q] : other.terms_) add_term(idx, q);
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& other) {
  check_budget(other, "subtraction");
  for (const auto& [idx, q] : other.terms_) add_term(idx, -q);
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(const Rational& q) {
  if (superode::is_zero(q)) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, c] : terms_) c *= q;
  return *this;
}

GrassmannElement GrassmannElement::operator-() const {
  GrassmannElement out = *this;
  for (auto& [idx, c] : out.terms_) c = -c;
  return out;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  a.check_budget(b, "multiplication");
  GrassmannElement out(a.budget_);
  for (const auto& [ia, qa] : a.terms_) {
    for (const auto& [ib, qb] : b.terms_) {
      auto prod = MultiIndex::multiply(ia, ib);
      if (!prod) continue;
      Rational q = qa * qb;
      if (prod->first < 0) q = -q;
      out.add_term(prod->second, q);
    }
  }
  return out;
}

bool GrassmannElement::operator==(const GrassmannElement& other) const {
  return budget_ == other.budget_ && terms_ == other.terms_;
}

std::string GrassmannElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, q] : terms_) {
    Rational mag = abs(q);
    if (first) {
      if (sgn(q) < 0) os << '-';
    } else {
      os << (sgn(q) < 0 ? " - " : " + ");
    }
    first = false;
    if (idx.empty()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << '*';
      os << 'b';
      for (auto g : idx.generators()) os << '_' << g;
    }
  }
  return os.str();
}

std::vector<MultiIndex> monomials_over(const std::vector<std::uint32_t>& generators, std::optional<Parity> parity) {
  std::vector<std::uint32_t> gens = generators;
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<MultiIndex> out;
  const std::size_t n = gens.size();
  if (n >= 8 * sizeof(std::size_t)) throw BudgetExhausted("too many generators to enumerate monomials");
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::uint32_t> idx;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (std::size_t{1} << k)) idx.push_back(gens[k]);
    if (parity && parity_of_length(idx.size()) != *parity) continue;
    out.emplace_back(std::move(idx));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> basis_monomials(std::size_t budget, std::optional<Parity> parity) {
  std::vector<std::uint32_t> gens(budget);
  for (std::size_t i = 0; i < budget; ++i) gens[i] = static_cast<std::uint32_t>(i + 1);
  return monomials_over(gens, parity);
}

// --------------------------------------------------------------- SuperVector

SuperVector::SuperVector(std::size_t p, std::size_t q, std::vector<GrassmannElement> entries)
    : p_(p), q_(q), entries_(std::move(entries)) {
  if (entries_.size() != p + q)
    throw DimensionMismatch("superspace point needs " + std::to_string(p + q) + " entries, got " +
                            std::to_string(entries_.size()));
  budget_ = entries_.empty() ? 0 : entries_.front().budget();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].budget() != budget_) throw BudgetMismatch("superspace entries use different budgets");
    Grade g = entries_[i].grade();
    Parity want = slot_parity(i);
    if (g == Grade::zero) continue;
    if (g == Grade::mixed || (g == Grade::even) != (want == Parity::even))
      throw ParityError("entry " + std::to_string(i) + " must be " + superode::to_string(want) + ", got " +
                        superode::to_string(g));
  }
}

SuperVector SuperVector::zero(std::size_t p, std::size_t q, std::size_t budget) {
  return SuperVector(p, q, std::vector<GrassmannElement>(p + q, GrassmannElement(budget)));
}

void SuperVector::set(std::size_t i, GrassmannElement value) {
  if (i >= entries_.size()) throw DimensionMismatch("superspace index out of range");
  if (value.budget() != budget_) throw BudgetMismatch("superspace entry budget mismatch");
  Grade g = value.grade();
  Parity want = slot_parity(i);
  if (g == Grade::mixed || (g != Grade::zero && (g == Grade::even) != (want == Parity::even)))
    throw ParityError("entry " + std::to_string(i) + " must be " + superode::to_string(want));
  entries_[i] = std::move(value);
}

bool SuperVector::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_zero(); });
}

void SuperVector::check_shape(const SuperVector& other) const {
  if (p_ != other.p_ || q_ != other.q_)
    throw DimensionMismatch("superspace shapes differ: (" + std::to_string(p_) + "," + std::to_string(q_) +
                            ") vs (" + std::to_string(other.p_) + "," + std::to_string(other.q_) + ")");
}

SuperVector& SuperVector::operator+=(const SuperVector& other) {
  check_shape(other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

SuperVector& SuperVector::operator-=(const SuperVector& other) {
  check_shape(other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

SuperVector& SuperVector::operator*=(const Rational& q) {
  for (auto& e : entries_) e *= q;
  return *this;
}

SuperVector operator*(const GrassmannElement& s, const SuperVector& v) {
  Grade g = s.grade();
  if (g == Grade::odd || g == Grade::mixed) throw ParityError("superspace points scale by even elements only");
  std::vector<GrassmannElement> out;
  out.reserve(v.size());
  for (const auto& e : v.entries()) out.push_back(s * e);
  return SuperVector(v.p(), v.q(), std::move(out));
}

bool SuperVector::operator==(const SuperVector& other) const {
  return p_ == other.p_ && q_ == other.q_ && entries_ == other.entries_;
}

std::string SuperVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "; " : "") << entries_[i].to_string();
  os << ')';
  return os.str();
}

// ---------------------------------------------------------- ConstantRegistry

const GrassmannElement& ConstantRegistry::declare(const std::string& name, Parity parity) {
  if (entries_.count(name)) throw InputError("constant '" + name + "' declared twice");
  const std::uint32_t needed = parity == Parity::odd ? 1 : 2;
  if (next_ + needed - 1 > budget_)
    throw BudgetExhausted("declaring '" + name + "' needs generator " + std::to_string(next_ + needed - 1) +
                          " but L=" + std::to_string(budget_));
  Entry e{GrassmannElement(budget_), parity, {}};
  if (parity == Parity::odd) {
    e.generators = {next_};
    e.value = GrassmannElement::generator(budget_, next_);
  } else {
    e.generators = {next_, next_ + 1};
    e.value = GrassmannElement::monomial(budget_, MultiIndex{next_, next_ + 1}, Rational(1));
  }
  next_ += needed;
  order_.push_back(name);
  return entries_.emplace(name, std::move(e)).first->second.value;
}

const GrassmannElement* ConstantRegistry::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second.value;
}

const std::vector<std::uint32_t>& ConstantRegistry::generators_of(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw InputError("unknown constant '" + name + "'");
  return it->second.generators;
}

Parity ConstantRegistry::parity_of(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw InputError("unknown constant '" + name + "'");
  return it->second.parity;
}

}  // namespace superode
