#ifndef SUPERODE_SERIES_HPP
#define SUPERODE_SERIES_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "superode/quadratic.hpp"

namespace superode {

/// X(t) = sum_k coeffs[k] t^k. Coefficients are raw Taylor coefficients
/// X^(k)(0)/k!.
struct SeriesSolution {
  std::vector<SuperVector> coeffs;
  bool exact_truncation = false;

  std::size_t order() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  /// k-th derivative at 0, i.e. k! * coeffs[k].
  SuperVector derivative(std::size_t k) const;
};

/// Coefficients c_0..c_K from (k+1) c_{k+1} = [k=0] C + T c_k + sum_j beta(c_j, c_{k-j}).
SeriesSolution taylor_coeffs(const QuadraticSystem& s, const SuperVector& x0, std::size_t order);

/// Looks for the smallest D with c_{D+1} .. c_{2D+1} all zero; the recursion
/// then keeps every later coefficient zero. Gives up past max_order.
SeriesSolution closed_form_truncated(const QuadraticSystem& s, const SuperVector& x0, std::size_t max_order = 64);

SuperVector series_eval(const SeriesSolution& sol, const Rational& t);

/// Ratio estimate |c_k| / |c_{k+1}| from the last pair of nonzero
/// coefficients (max-norm over all Grassmann coordinates). Informational.
std::optional<double> radius_estimate(const SeriesSolution& sol);

/// Largest absolute rational coefficient of v, as a double.
double max_norm(const SuperVector& v);

}  // namespace superode

#endif  // SUPERODE_SERIES_HPP
