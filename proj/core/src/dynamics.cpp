#include "superode/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace superode {

double RealPolynomial::eval(const std::vector<double>& x) const {
  double s = 0;
  for (const auto& [mono, q] : terms) {
    double v = q.get_d();
    for (auto i : mono) v *= x[i];
    s += v;
  }
  return s;
}

std::size_t RealPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [mono, q] : terms) d = std::max(d, mono.size());
  return d;
}

std::size_t RealSystem::index(const std::string& variable, const MultiIndex& idx) const {
  for (std::size_t i = 0; i < origin.size(); ++i)
    if (origin[i].first == variable && origin[i].second == idx) return i;
  throw InputError("no coordinate " + variable + idx.to_string());
}

void RealSystem::eval(const std::vector<double>& x, std::vector<double>& dx) const {
  dx.resize(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) dx[i] = rhs[i].eval(x);
}

std::vector<double> RealSystem::state(const std::map<std::string, GrassmannElement>& values) const {
  std::vector<double> x(size(), 0.0);
  for (const auto& [name, g] : values)
    for (const auto& [idx, q] : g.terms()) x[index(name, idx)] = q.get_d();
  return x;
}

namespace {

std::string coordinate_name(const std::string& var, const MultiIndex& idx) {
  if (idx.empty()) return var;
  const bool wide = idx.max_generator() > 9;
  std::string s = var + "_";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (wide && i) s += '.';
    s += std::to_string(idx.generators()[i]);
  }
  return s;
}

}  // namespace

RealSystem expand_to_real(const FlowSpec& flow) {
  RealSystem sys;
  const std::size_t L = flow.budget();
  std::map<std::string, std::vector<std::pair<MultiIndex, std::size_t>>> coords_of;
  for (const auto& v : flow.variables())
    for (const auto& idx : basis_monomials(L, v.parity)) {
      coords_of[v.name].emplace_back(idx, sys.coords.size());
      sys.coords.push_back(coordinate_name(v.name, idx));
      sys.origin.emplace_back(v.name, idx);
    }
  sys.rhs.resize(sys.coords.size());

  struct Partial {
    MultiIndex idx;
    Rational q;
    std::vector<std::size_t> mono;
  };
  for (const auto& v : flow.variables()) {
    for (const auto& [w, c] : flow.rhs(v.name).terms()) {
      std::vector<Partial> layer;
      for (const auto& [idx, q] : c.terms()) layer.push_back({idx, q, {}});
      for (const auto& letter : w.letters()) {
        auto it = coords_of.find(letter.name);
        if (it == coords_of.end()) throw InputError("letter '" + letter.name + "' has no coordinates");
        std::vector<Partial> next;
        for (const auto& part : layer)
          for (const auto& [mu, coord] : it->second) {
            auto prod = MultiIndex::multiply(part.idx, mu);
            if (!prod) continue;
            Partial np{prod->second, prod->first < 0 ? Rational(-part.q) : part.q, part.mono};
            np.mono.push_back(coord);
            next.push_back(std::move(np));
          }
        layer = std::move(next);
      }
      for (auto& part : layer) {
        std::sort(part.mono.begin(), part.mono.end());
        auto& terms = sys.rhs[sys.index(v.name, part.idx)].terms;
        auto [t, fresh] = terms.try_emplace(part.mono, part.q);
        if (!fresh) {
          t->second += part.q;
          if (is_zero(t->second)) terms.erase(t);
        }
      }
    }
  }
  return sys;
}

// ---------------------------------------------------------------------- RK4

Trajectory rk4_integrate(const VectorField& f, std::vector<double> x, double t0, double t_end, double step) {
  if (!(step > 0)) throw InputError("step must be positive");
  if (t_end < t0) throw InputError("end time precedes start time");
  Trajectory traj;
  traj.scheme = "rk4";
  traj.times.push_back(t0);
  traj.states.push_back(x);
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = t0;
  const double eps = step * 1e-9;
  while (t < t_end - eps) {
    const double h = std::min(step, t_end - t);
    f(t, x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (!std::all_of(tmp.begin(), tmp.end(), [](double v) { return std::isfinite(v); }))
      throw DivergenceError("non-finite state after t = " + std::to_string(t), t);
    x = tmp;
    // Summing steps drifts; snap to the grid point when close.
    t = (t_end - (t + h) < eps) ? t_end : t + h;
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory rk4_integrate(const RealSystem& sys, std::vector<double> x0, double t_end, double step) {
  if (x0.size() != sys.size()) throw DimensionMismatch("initial state has the wrong size");
  return rk4_integrate([&](double, const std::vector<double>& x, std::vector<double>& dx) { sys.eval(x, dx); },
                       std::move(x0), 0.0, t_end, step);
}

AbelReport abel_correspondence_check(const RealSystem& sys, const Trajectory& traj, std::size_t x_index,
                                     const std::function<double(double)>& f) {
  const std::size_t n = traj.states.size();
  if (n < 3) throw DomainError("trajectory too short for centered differences");
  std::vector<double> x(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = traj.states[k].at(x_index);
    w[k] = sys.rhs.at(x_index).eval(traj.states[k]);
    if (w[k] == 0.0 || (k && (w[k] > 0) != (w[0] > 0)))
      throw DomainError("x' vanishes inside the window; split it at t = " + std::to_string(traj.times[k]));
    if (k && (x[k] - x[k - 1] == 0.0 || ((x[k] - x[k - 1]) > 0) != (w[0] > 0)))
      throw DomainError("x is not strictly monotone near t = " + std::to_string(traj.times[k]));
  }
  AbelReport rep;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double dx = x[k + 1] - x[k - 1];
    const double dw = (w[k + 1] - w[k - 1]) / dx;
    const double du = (1.0 / w[k + 1] - 1.0 / w[k - 1]) / dx;
    const double u = 1.0 / w[k];
    rep.second_kind = std::max(rep.second_kind, std::abs(w[k] * dw - w[k] - f(x[k])));
    rep.first_kind = std::max(rep.first_kind, std::abs(du + f(x[k]) * u * u * u + u * u));
    ++rep.samples;
  }
  return rep;
}

// --------------------------------------------------------------- difference

DifferenceResult difference_iterate(const StructureTensor& t, const SuperVector& x0, const Rational& h, std::size_t steps) {
  if (is_zero(h)) throw InputError("difference step h must be nonzero");
  DifferenceResult res;
  auto mu = [&](const SuperVector& x) { return mu_eval(t, std::vector<SuperVector>(t.arity(), x)); };
  const SuperVector m0 = mu(x0);
  res.equilibrium_start = m0.is_zero();
  res.idempotent_start = !x0.is_zero() && m0 == x0;
  res.states.push_back(x0);
  for (std::size_t k = 0; k < steps; ++k) {
    const SuperVector& x = res.states.back();
    res.states.push_back(x + h * mu(x));
  }
  return res;
}

Trajectory difference_real(const RealSystem& sys, std::vector<double> x, double h, std::size_t steps) {
  if (h == 0.0) throw InputError("difference step h must be nonzero");
  Trajectory traj;
  traj.scheme = "difference";
  traj.times.push_back(0);
  traj.states.push_back(x);
  std::vector<double> dx;
  for (std::size_t k = 0; k < steps; ++k) {
    sys.eval(x, dx);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * dx[i];
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); }))
      throw DivergenceError("non-finite state at step " + std::to_string(k + 1), static_cast<double>(k));
    traj.times.push_back(static_cast<double>(k + 1));
    traj.states.push_back(x);
  }
  return traj;
}

bool delta_product_rule_check(const std::vector<RationalMatrix>& f, const std::vector<RationalMatrix>& g,
                              const Rational& h, ProductRule rule) {
  if (f.size() != g.size()) throw DimensionMismatch("sequences have different lengths");
  if (is_zero(h)) throw InputError("difference step h must be nonzero");
  const Rational inv = 1 / h;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const RationalMatrix df = (f[k + 1] - f[k]).scaled(inv);
    const RationalMatrix dg = (g[k + 1] - g[k]).scaled(inv);
    const RationalMatrix lhs = (f[k + 1] * g[k + 1] - f[k] * g[k]).scaled(inv);
    RationalMatrix rhs;
    switch (rule) {
      case ProductRule::shifted_right: rhs = df * g[k + 1] + f[k] * dg; break;
      case ProductRule::shifted_left: rhs = f[k + 1] * dg + df * g[k]; break;
      case ProductRule::naive: rhs = df * g[k] + f[k] * dg; break;
    }
    if (lhs != rhs) return false;
  }
  return true;
}

// ------------------------------------------------------------------ Riccati

void RiccatiSpec::validate() const {
  auto want = [](const RationalMatrix& m, std::size_t r, std::size_t c, const char* name) {
    if (m.rows() != r || m.cols() != c)
      throw DimensionMismatch(std::string(name) + " is " + m.shape() + ", expected " + std::to_string(r) + "x" +
                              std::to_string(c));
  };
  want(A, q, p, "A");
  want(B, p, p, "B");
  want(C, q, q, "C");
  want(D, p, q, "D");
}

RationalMatrix riccati_linearize(const RiccatiSpec& s) {
  s.validate();
  RationalMatrix m(s.p + s.q, s.p + s.q, Rational(0));
  m.set_block(0, 0, s.B);
  m.set_block(0, s.p, s.D);
  m.set_block(s.p, 0, s.A.scaled(Rational(-1)));
  m.set_block(s.p, s.p, s.C.scaled(Rational(-1)));
  return m;
}

namespace {

std::vector<double> flatten(const RealMatrix& m) { return m.data(); }

RealMatrix unflatten(const std::vector<double>& v, std::size_t off, std::size_t r, std::size_t c) {
  RealMatrix m(r, c, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v[off + i * c + j];
  return m;
}

}  // namespace

RealMatrix riccati_rhs(const RiccatiSpec& s, const RealMatrix& x) {
  const RealMatrix a = to_real(s.A), b = to_real(s.B), c = to_real(s.C), d = to_real(s.D);
  return x * a * x + b * x + x * c + d;
}

RealMatrix riccati_direct(const RiccatiSpec& s, const RealMatrix& x0, double t_end, double step) {
  s.validate();
  const RealMatrix a = to_real(s.A), b = to_real(s.B), c = to_real(s.C), d = to_real(s.D);
  auto f = [&](double, const std::vector<double>& v, std::vector<double>& dv) {
    const RealMatrix x = unflatten(v, 0, s.p, s.q);
    dv = flatten(x * a * x + b * x + x * c + d);
  };
  auto traj = rk4_integrate(f, flatten(x0), 0.0, t_end, step);
  return unflatten(traj.states.back(), 0, s.p, s.q);
}

RealMatrix riccati_via_linear(const RiccatiSpec& s, const RealMatrix& x0, double t_end, double step) {
  const RealMatrix m = to_real(riccati_linearize(s));
  const std::size_t n = s.p + s.q;
  RealMatrix uv(n, s.q, 0.0);
  uv.set_block(0, 0, x0);
  uv.set_block(s.p, 0, RealMatrix::identity(s.q, 0.0, 1.0));
  auto f = [&](double, const std::vector<double>& v, std::vector<double>& dv) {
    dv = flatten(m * unflatten(v, 0, n, s.q));
  };
  auto traj = rk4_integrate(f, flatten(uv), 0.0, t_end, step);
  const RealMatrix end = unflatten(traj.states.back(), 0, n, s.q);
  return end.block(0, 0, s.p, s.q) * inverse(end.block(s.p, 0, s.q, s.q));
}

RiccatiDifferenceResult riccati_difference(const RiccatiSpec& s, const RationalMatrix& x0, const Rational& h,
                                           std::size_t steps) {
  s.validate();
  if (is_zero(h)) throw InputError("difference step h must be nonzero");
  if (x0.rows() != s.p || x0.cols() != s.q) throw DimensionMismatch("x0 is " + x0.shape());
  const std::size_t n = s.p + s.q;
  RationalMatrix step(n, n, Rational(0));
  step.set_block(0, 0, RationalMatrix::identity(s.p, Rational(0), Rational(1)) - s.B.scaled(h));
  step.set_block(0, s.p, s.D.scaled(Rational(-h)));
  step.set_block(s.p, 0, s.A.scaled(h));
  step.set_block(s.p, s.p, RationalMatrix::identity(s.q, Rational(0), Rational(1)) + s.C.scaled(h));
  RationalMatrix advance;
  try {
    advance = inverse(step);
  } catch (const SingularMatrix&) {
    throw DomainError("implicit step matrix is singular (step 0)");
  }
  RiccatiDifferenceResult res;
  RationalMatrix uv(n, s.q, Rational(0));
  uv.set_block(0, 0, x0);
  uv.set_block(s.p, 0, RationalMatrix::identity(s.q, Rational(0), Rational(1)));
  res.states.push_back(x0);
  const Rational inv_h = 1 / h;
  for (std::size_t k = 0; k < steps; ++k) {
    uv = advance * uv;
    RationalMatrix vinv;
    try {
      vinv = inverse(uv.block(s.p, 0, s.q, s.q));
    } catch (const SingularMatrix&) {
      throw DomainError("v is singular at step " + std::to_string(k + 1));
    }
    RationalMatrix x1 = uv.block(0, 0, s.p, s.q) * vinv;
    const RationalMatrix& x = res.states.back();
    const RationalMatrix lhs = (x1 - x).scaled(inv_h);
    const RationalMatrix rhs = x * s.A * x1 + s.B * x1 + x * s.C + s.D;
    if (lhs != rhs && res.identity_holds) {
      res.identity_holds = false;
      res.first_failure = k;
    }
    res.states.push_back(std::move(x1));
  }
  return res;
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& names) {
  os << 't';
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << traj.times[k];
    for (double v : traj.states[k]) os << ',' << v;
    os << '\n';
  }
}

}  // namespace superode
