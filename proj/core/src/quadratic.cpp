#include "superode/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "superode/series.hpp"

namespace superode {

LinearMap identity_map(std::size_t n, std::size_t budget) {
  return LinearMap::identity(n, GrassmannElement(budget), GrassmannElement::scalar(budget, Rational(1)));
}

SuperVector apply(const LinearMap& m, const SuperVector& x) {
  if (m.cols() != x.size() || m.rows() != x.size())
    throw DimensionMismatch("linear map " + m.shape() + " applied to a vector of size " + std::to_string(x.size()));
  std::vector<GrassmannElement> out(x.size(), GrassmannElement(x.budget()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && !x[j].is_zero()) out[i] += m(i, j) * x[j];
  return SuperVector(x.p(), x.q(), std::move(out));
}

namespace {

Parity slot_parity(const std::vector<Variable>& vars, std::size_t i) { return vars[i].parity; }

bool parity_fits(const GrassmannElement& c, Parity want) {
  const Grade g = c.grade();
  if (g == Grade::zero) return true;
  if (g == Grade::mixed) return false;
  return (g == Grade::odd) == is_odd(want);
}

}  // namespace

QuadraticSystem::QuadraticSystem(std::vector<Variable> vars, SuperVector c, LinearMap t, StructureTensor beta)
    : vars_(std::move(vars)), budget_(c.budget()), c_(std::move(c)), t_(std::move(t)), beta_(beta.n(), 2, beta.budget()) {
  const std::size_t n = vars_.size();
  while (p_ < n && !is_odd(vars_[p_].parity)) ++p_;
  for (std::size_t i = p_; i < n; ++i)
    if (!is_odd(vars_[i].parity)) throw InputError("even variables must precede odd ones");
  if (c_.size() != n || c_.p() != p_) throw DimensionMismatch("constant term does not match the variables");
  if (t_.rows() != n || t_.cols() != n) throw DimensionMismatch("linear part must be " + std::to_string(n) + "x" + std::to_string(n));
  if (beta.n() != n || beta.arity() != 2) throw DimensionMismatch("quadratic part must be a 2-tensor on the variables");
  if (beta.budget() != budget_) throw BudgetMismatch("quadratic part over a different generator budget");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (t_(i, j).budget() != budget_) throw BudgetMismatch("linear part over a different generator budget");
      if (!parity_fits(t_(i, j), slot_parity(vars_, i) + slot_parity(vars_, j)))
        throw ParityError("T(" + vars_[i].name + ", " + vars_[j].name + ") has the wrong parity");
    }
  const Rational half(1, 2);
  for (const auto& [key, coeff] : beta.entries()) {
    const std::size_t i = key.first, j = key.second[0], k = key.second[1];
    if (!parity_fits(coeff, slot_parity(vars_, i) + slot_parity(vars_, j) + slot_parity(vars_, k)))
      throw ParityError("quadratic coefficient of " + vars_[j].name + "*" + vars_[k].name + " in d/dt " + vars_[i].name +
                        " has the wrong parity");
    const int s = koszul_sign(vars_[j].parity, vars_[k].parity);
    beta_.add(i, {j, k}, coeff * half);
    beta_.add(i, {k, j}, s < 0 ? -(coeff * half) : coeff * half);
  }
}

QuadraticSystem QuadraticSystem::from_flow(const FlowSpec& flow) {
  if (flow.degree() > 2) throw InputError("flow of degree " + std::to_string(flow.degree()) + " is not quadratic");
  std::vector<Variable> vars;
  for (const auto& v : flow.variables())
    if (!is_odd(v.parity)) vars.push_back(v);
  const std::size_t p = vars.size();
  for (const auto& v : flow.variables())
    if (is_odd(v.parity)) vars.push_back(v);
  const std::size_t n = vars.size(), L = flow.budget();
  auto index = [&](const std::string& name) {
    for (std::size_t i = 0; i < n; ++i)
      if (vars[i].name == name) return i;
    throw InputError("letter '" + name + "' is not a flow variable");
  };
  std::vector<GrassmannElement> c(n, GrassmannElement(L));
  LinearMap t(n, n, GrassmannElement(L));
  StructureTensor q(n, 2, L);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [w, coeff] : flow.rhs(vars[i].name).terms()) {
      if (w.size() == 0)
        c[i] += coeff;
      else if (w.size() == 1)
        t(i, index(w[0].name)) += coeff;
      else
        q.add(i, {index(w[0].name), index(w[1].name)}, coeff);
    }
  return QuadraticSystem(std::move(vars), SuperVector(p, n - p, std::move(c)), std::move(t), std::move(q));
}

FlowSpec QuadraticSystem::to_flow(Policy policy) const {
  std::map<std::string, NCPolynomial> rhs;
  for (std::size_t i = 0; i < dim(); ++i) {
    NCPolynomial r(policy, budget_);
    r.add_term(Word{}, c_[i]);
    for (std::size_t j = 0; j < dim(); ++j) r.add_term(Word{vars_[j]}, t_(i, j));
    rhs.emplace(vars_[i].name, std::move(r));
  }
  for (const auto& [key, coeff] : beta_.entries())
    rhs.at(vars_[key.first].name).add_term(Word{vars_[key.second[0]], vars_[key.second[1]]}, coeff);
  return FlowSpec(policy, budget_, vars_, std::move(rhs));
}

std::optional<std::size_t> QuadraticSystem::slot(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

void QuadraticSystem::check(const SuperVector& x) const {
  if (x.size() != dim() || x.p() != p_)
    throw DimensionMismatch("vector of shape (" + std::to_string(x.p()) + ", " + std::to_string(x.q()) +
                            ") for a system of shape (" + std::to_string(p_) + ", " + std::to_string(q()) + ")");
  if (x.budget() != budget_) throw BudgetMismatch("vector over a different generator budget");
}

SuperVector QuadraticSystem::beta(const SuperVector& x, const SuperVector& y) const {
  check(x);
  check(y);
  std::vector<GrassmannElement> out(dim(), GrassmannElement(budget_));
  for (const auto& [key, coeff] : beta_.entries()) {
    const auto& a = x[key.second[0]];
    const auto& b = y[key.second[1]];
    if (a.is_zero() || b.is_zero()) continue;
    out[key.first] += coeff * a * b;
  }
  return SuperVector(p_, q(), std::move(out));
}

SuperVector QuadraticSystem::E(const SuperVector& x) const { return c_ + linear(x) + beta(x, x); }

bool QuadraticSystem::is_homogeneous() const {
  if (!c_.is_zero()) return false;
  return std::all_of(t_.data().begin(), t_.data().end(), [](const GrassmannElement& e) { return e.is_zero(); });
}

std::vector<SuperVector> QuadraticSystem::real_basis() const {
  std::vector<SuperVector> out;
  for (std::size_t i = 0; i < dim(); ++i)
    for (const auto& idx : basis_monomials(budget_, vars_[i].parity)) {
      SuperVector v = zero();
      v.set(i, GrassmannElement::monomial(budget_, idx, Rational(1)));
      out.push_back(std::move(v));
    }
  return out;
}

SuperVector circ(const QuadraticSystem& s, const SuperVector& x, const SuperVector& y) { return s.beta(x, y); }

// ------------------------------------------------------------------ witnesses

namespace {

SuperVector random_combination(const std::vector<SuperVector>& basis, const SuperVector& zero, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(-1, 1);
  SuperVector v = zero;
  for (const auto& b : basis) {
    const int c = coin(rng);
    if (c != 0) v += Rational(c) * b;
  }
  return v;
}

}  // namespace

std::optional<std::array<SuperVector, 3>> associativity_witness(const QuadraticSystem& s, const WitnessOptions& opt) {
  const auto basis = s.real_basis();
  const std::size_t b = std::min(basis.size(), opt.basis_bound);
  std::vector<SuperVector> prod(b * b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) prod[i * b + j] = circ(s, basis[i], basis[j]);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t k = 0; k < b; ++k)
        if (circ(s, prod[i * b + j], basis[k]) != circ(s, basis[i], prod[j * b + k]))
          return std::array<SuperVector, 3>{basis[i], basis[j], basis[k]};
  std::mt19937_64 rng(opt.seed);
  for (std::size_t n = 0; n < opt.samples; ++n) {
    SuperVector x = random_combination(basis, s.zero(), rng);
    SuperVector y = random_combination(basis, s.zero(), rng);
    SuperVector z = random_combination(basis, s.zero(), rng);
    if (circ(s, circ(s, x, y), z) != circ(s, x, circ(s, y, z))) return std::array<SuperVector, 3>{x, y, z};
  }
  return std::nullopt;
}

std::optional<SuperVector> power_associativity_witness(const QuadraticSystem& s, const WitnessOptions& opt) {
  auto broken = [&](const SuperVector& x) {
    const SuperVector x2 = circ(s, x, x);
    return circ(s, x2, x2) != circ(s, circ(s, x2, x), x);
  };
  const auto basis = s.real_basis();
  const std::size_t b = std::min(basis.size(), opt.power_basis_bound);
  std::vector<int> digits(b, -1);
  for (;;) {
    SuperVector x = s.zero();
    for (std::size_t i = 0; i < b; ++i)
      if (digits[i] != 0) x += Rational(digits[i]) * basis[i];
    if (!x.is_zero() && broken(x)) return x;
    std::size_t pos = 0;
    while (pos < b && digits[pos] == 1) digits[pos++] = -1;
    if (pos == b) break;
    ++digits[pos];
  }
  std::mt19937_64 rng(opt.seed);
  for (std::size_t n = 0; n < opt.samples; ++n) {
    SuperVector x = random_combination(basis, s.zero(), rng);
    if (broken(x)) return x;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- idempotents

const char* to_string(IdempotentKind k) noexcept {
  switch (k) {
    case IdempotentKind::idempotent: return "idempotent";
    case IdempotentKind::scaled: return "scaled";
    case IdempotentKind::nilpotent: return "nilpotent";
    case IdempotentKind::other: return "other";
  }
  return "other";
}

IdempotentClass idempotent_check(const QuadraticSystem& s, const SuperVector& x) {
  if (x.is_zero()) throw DomainError("idempotent classification needs a nonzero vector");
  const SuperVector xx = circ(s, x, x);
  if (xx.is_zero()) return {IdempotentKind::nilpotent, Rational(0)};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    const auto& [idx, q] = *x[i].terms().begin();
    const Rational a = xx[i].coefficient(idx) / q;
    if (is_zero(a) || xx != a * x) return {IdempotentKind::other, Rational(0)};
    return {a == 1 ? IdempotentKind::idempotent : IdempotentKind::scaled, a};
  }
  return {IdempotentKind::other, Rational(0)};
}

SuperVector blowup_solution(const SuperVector& p, const Rational& a, const Rational& t) {
  const Rational d = 1 - a * t;
  if (is_zero(d)) throw DomainError("blow-up solution has a pole at t = " + to_string(t));
  return Rational(1 / d) * p;
}

double blowup_factor(double a, double t) {
  const double d = 1.0 - a * t;
  if (d == 0.0) throw DomainError("blow-up solution has a pole at t = " + std::to_string(t));
  return 1.0 / d;
}

// ------------------------------------------------------- linear-map checks

namespace {

std::string vec_str(const SuperVector& v) { return v.to_string(); }

}  // namespace

CheckReport automorphism_check(const QuadraticSystem& s, const LinearMap& phi) {
  const std::size_t n = s.dim();
  if (phi.rows() != n || phi.cols() != n) throw DimensionMismatch("map of shape " + phi.shape());
  RationalMatrix body(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) body(i, j) = phi(i, j).body();
  if (is_zero(determinant(body))) throw SingularMatrix("map is not invertible (singular body)");
  CheckReport rep;
  if (phi * s.T() != s.T() * phi) return {false, "phi T != T phi"};
  const auto basis = s.real_basis();
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a; b < basis.size(); ++b) {
      const SuperVector lhs = apply(phi, circ(s, basis[a], basis[b]));
      const SuperVector rhs = circ(s, apply(phi, basis[a]), apply(phi, basis[b]));
      if (lhs != rhs)
        return {false, "phi(X o Y) != phi X o phi Y for X = " + vec_str(basis[a]) + ", Y = " + vec_str(basis[b])};
    }
  if (!s.C().is_zero() && apply(phi, s.C()) != s.C()) return {false, "phi C != C"};
  return rep;
}

CheckReport derivation_check(const QuadraticSystem& s, const LinearMap& d) {
  const std::size_t n = s.dim();
  if (d.rows() != n || d.cols() != n) throw DimensionMismatch("map of shape " + d.shape());
  if (s.T() * d != d * s.T()) return {false, "T D != D T"};
  const auto basis = s.real_basis();
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a; b < basis.size(); ++b) {
      const SuperVector lhs = apply(d, circ(s, basis[a], basis[b]));
      const SuperVector rhs = circ(s, apply(d, basis[a]), basis[b]) + circ(s, basis[a], apply(d, basis[b]));
      if (lhs != rhs)
        return {false, "D(X o Y) != DX o Y + X o DY for X = " + vec_str(basis[a]) + ", Y = " + vec_str(basis[b])};
    }
  return {};
}

Prop1Report prop1_check(const QuadraticSystem& s, const LinearMap& g, const SuperVector& p, std::size_t order) {
  Prop1Report rep;
  const SuperVector gc = apply(g, s.C());
  if (!gc.is_zero()) {
    rep.premise_detail = "G C != 0";
  } else {
    auto d = derivation_check(s, g);
    rep.premise = d.ok;
    rep.premise_detail = d.detail;
  }
  rep.conclusion = apply(g, p) == s.E(p);
  const SeriesSolution sol = taylor_coeffs(s, p, order);
  SuperVector term = p;
  rep.series_agree = true;
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 0) term = Rational(1, static_cast<long>(k)) * apply(g, term);
    if (term != sol.coeffs[k]) {
      rep.series_agree = false;
      rep.first_mismatch_order = k;
      break;
    }
  }
  return rep;
}

std::vector<std::vector<double>> find_real_idempotents(const QuadraticSystem& s, const NewtonOptions& opt) {
  const std::size_t m = s.p();
  if (m > 4) throw DomainError("idempotent search is limited to real dimension 4");
  for (const auto& [key, c] : s.beta().entries()) {
    if (c.terms().size() != 1 || !c.terms().begin()->first.empty())
      throw DomainError("idempotent search needs real coefficients");
    if (key.first >= m || key.second[0] >= m || key.second[1] >= m)
      throw DomainError("idempotent search needs a purely even algebra");
  }
  std::vector<double> b(m * m * m, 0.0);
  for (const auto& [key, c] : s.beta().entries())
    b[(key.first * m + key.second[0]) * m + key.second[1]] = c.body().get_d();
  auto residual = [&](const std::vector<double>& x) {
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      double v = -x[i];
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) v += b[(i * m + j) * m + k] * x[j] * x[k];
      f[i] = v;
    }
    return f;
  };
  auto norm = [](const std::vector<double>& v) {
    double s2 = 0;
    for (double e : v) s2 += e * e;
    return std::sqrt(s2);
  };

  std::vector<std::vector<double>> found;
  if (m == 0) return found;
  std::vector<std::size_t> digit(m, 0);
  const std::size_t base = opt.lattice.size();
  for (;;) {
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = opt.lattice[digit[i]];
    std::vector<double> f = residual(x);
    for (std::size_t it = 0; it < opt.max_iterations && norm(f) > opt.tolerance; ++it) {
      RealMatrix jac(m, m, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          double v = i == k ? -1.0 : 0.0;
          for (std::size_t j = 0; j < m; ++j) v += (b[(i * m + j) * m + k] + b[(i * m + k) * m + j]) * x[j];
          jac(i, k) = v;
        }
      RealMatrix inv;
      try {
        inv = inverse(jac);
      } catch (const SingularMatrix&) {
        break;
      }
      std::vector<double> dx(m, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) dx[i] -= inv(i, k) * f[k];
      double lambda = 1.0;
      const double f0 = norm(f);
      for (;;) {
        std::vector<double> trial(m);
        for (std::size_t i = 0; i < m; ++i) trial[i] = x[i] + lambda * dx[i];
        std::vector<double> ft = residual(trial);
        if (norm(ft) < f0 || lambda < 1e-4) {
          x = std::move(trial);
          f = std::move(ft);
          break;
        }
        lambda /= 2;
      }
    }
    if (norm(f) <= opt.tolerance && norm(x) > 1e-8) {
      const bool dup = std::any_of(found.begin(), found.end(), [&](const std::vector<double>& y) {
        double d = 0;
        for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(y[i] - x[i]));
        return d < 1e-6;
      });
      if (!dup) found.push_back(x);
    }
    std::size_t pos = 0;
    while (pos < m && digit[pos] + 1 == base) digit[pos++] = 0;
    if (pos == m) break;
    ++digit[pos];
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace superode
