#include "superode/series.hpp"

#include <cmath>

namespace superode {

SuperVector SeriesSolution::derivative(std::size_t k) const {
  Rational f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<long>(i);
  return f * coeffs.at(k);
}

SeriesSolution taylor_coeffs(const QuadraticSystem& s, const SuperVector& x0, std::size_t order) {
  SeriesSolution sol;
  sol.coeffs.reserve(order + 1);
  sol.coeffs.push_back(x0);
  s.E(x0);  // shape and budget checks
  for (std::size_t k = 0; k < order; ++k) {
    SuperVector next = s.linear(sol.coeffs[k]);
    if (k == 0) next += s.C();
    for (std::size_t j = 0; j <= k; ++j) {
      if (sol.coeffs[j].is_zero() || sol.coeffs[k - j].is_zero()) continue;
      next += s.beta(sol.coeffs[j], sol.coeffs[k - j]);
    }
    next *= Rational(1, static_cast<long>(k + 1));
    sol.coeffs.push_back(std::move(next));
  }
  return sol;
}

SeriesSolution closed_form_truncated(const QuadraticSystem& s, const SuperVector& x0, std::size_t max_order) {
  SeriesSolution sol = taylor_coeffs(s, x0, max_order);
  // Zeros on D+1..2D+1 force zeros everywhere after: a nonzero c_{k+1} with
  // k >= 2D+1 would need c_j, c_{k-j} both of index <= D.
  for (std::size_t d = 0; 2 * d + 1 <= max_order; ++d) {
    bool zero = true;
    for (std::size_t k = d + 1; k <= 2 * d + 1 && zero; ++k) zero = sol.coeffs[k].is_zero();
    if (zero) {
      sol.coeffs.resize(d + 1);
      sol.exact_truncation = true;
      return sol;
    }
  }
  return sol;
}

SuperVector series_eval(const SeriesSolution& sol, const Rational& t) {
  if (sol.coeffs.empty()) throw InputError("empty series");
  SuperVector acc = sol.coeffs.back();
  for (std::size_t k = sol.coeffs.size() - 1; k-- > 0;) {
    acc *= t;
    acc += sol.coeffs[k];
  }
  return acc;
}

double max_norm(const SuperVector& v) {
  double m = 0;
  for (const auto& e : v.entries())
    for (const auto& [idx, q] : e.terms()) m = std::max(m, std::abs(q.get_d()));
  return m;
}

std::optional<double> radius_estimate(const SeriesSolution& sol) {
  for (std::size_t k = sol.coeffs.size(); k-- > 1;) {
    const double hi = max_norm(sol.coeffs[k]);
    const double lo = max_norm(sol.coeffs[k - 1]);
    if (hi > 0 && lo > 0) return lo / hi;
  }
  return std::nullopt;
}

}  // namespace superode
