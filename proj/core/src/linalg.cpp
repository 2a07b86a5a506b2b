#include "superode/linalg.hpp"

#include <cmath>
#include <utility>

namespace superode {

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m) {
  RationalMatrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const RationalMatrix& m) {
  RationalMatrix r = m;
  return rref(r).size();
}

Rational determinant(RationalMatrix m) {
  if (!m.square()) throw DimensionMismatch("determinant of non-square " + m.shape());
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && is_zero(m(piv, c))) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

RationalMatrix solve(const RationalMatrix& a, const RationalMatrix& b) {
  if (!a.square() || a.rows() != b.rows())
    throw DimensionMismatch("solve " + a.shape() + " with rhs " + b.shape());
  const std::size_t n = a.rows();
  RationalMatrix aug(n, n + b.cols(), Rational(0));
  aug.set_block(0, 0, a);
  aug.set_block(0, n, b);
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix("matrix " + a.shape() + " is singular");
  return aug.block(0, n, n, b.cols());
}

RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.square()) throw DimensionMismatch("inverse of non-square " + m.shape());
  return solve(m, RationalMatrix::identity(m.rows(), Rational(0), Rational(1)));
}

RealMatrix inverse(const RealMatrix& m) {
  if (!m.square()) throw DimensionMismatch("inverse of non-square " + m.shape());
  const std::size_t n = m.rows();
  RealMatrix a = m;
  RealMatrix inv = RealMatrix::identity(n, 0.0, 1.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a(i, c)) > std::abs(a(piv, c))) piv = i;
    if (a(piv, c) == 0.0) throw SingularMatrix("matrix " + m.shape() + " is singular");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(piv, j), a(c, j));
      std::swap(inv(piv, j), inv(c, j));
    }
    const double d = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0.0) continue;
      const double f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

RealMatrix to_real(const RationalMatrix& m) {
  RealMatrix out(m.rows(), m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

}  // namespace superode
