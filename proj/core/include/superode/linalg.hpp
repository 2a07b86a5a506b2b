#ifndef SUPERODE_LINALG_HPP
#define SUPERODE_LINALG_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "superode/errors.hpp"
#include "superode/rational.hpp"

namespace superode {

/// Dense row-major matrix over any ring-like element type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o, "addition");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o, "subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
    Matrix out(a.rows_, b.cols_, a.zero_like());
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
  }

  template <class S>
  Matrix scaled(const S& s) const {
    Matrix out = *this;
    for (auto& v : out.data_) v = s * v;
    return out;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    Matrix out(nr, nc, zero_like());
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  T zero_like() const {
    if (data_.empty()) return T();
    T z = data_.front();
    z -= data_.front();
    return z;
  }
  void check_same(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatch(std::string("matrix ") + op + " " + shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using RealMatrix = Matrix<double>;

/// Reduced row echelon form computed in place; returns pivot columns in row order.
std::vector<std::size_t> rref(RationalMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column, with the free entry set to 1.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

Rational determinant(RationalMatrix m);

/// Throws SingularMatrix when m is not invertible.
RationalMatrix inverse(const RationalMatrix& m);

/// Solves a x = b for a square invertible a (b may have several columns).
RationalMatrix solve(const RationalMatrix& a, const RationalMatrix& b);

/// Partial-pivot Gaussian elimination in doubles.
RealMatrix inverse(const RealMatrix& m);

RealMatrix to_real(const RationalMatrix& m);

}  // namespace superode

#endif  // SUPERODE_LINALG_HPP
