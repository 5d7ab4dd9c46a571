#ifndef NILGEN_MATRIX_HPP
#define NILGEN_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

#include "nilgen/field.hpp"

namespace nilgen {

/// Dense matrix over an exact field. Row-major, value semantics.
template <CoefficientField F>
class Matrix {
 public:
  using Elem = typename F::Elem;

  Matrix(F fld, std::size_t rows, std::size_t cols)
      : fld_(std::move(fld)), rows_(rows), cols_(cols), a_(rows * cols, fld_.zero()) {}

  static Matrix identity(F fld, std::size_t n) {
    Matrix m(fld, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = fld.one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const F& field() const { return fld_; }

  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Elem& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<Elem> row(std::size_t i) const {
    return {a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_};
  }
  void set_row(std::size_t i, const std::vector<Elem>& r) {
    assert(r.size() == cols_);
    std::copy(r.begin(), r.end(), a_.begin() + i * cols_);
  }
  void append_row(const std::vector<Elem>& r) {
    assert(r.size() == cols_ || rows_ == 0);
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  Matrix operator+(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = r.a_[k] + o.a_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = r.a_[k] - o.a_[k];
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    assert(cols_ == o.rows_);
    Matrix r(fld_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Elem& aik = (*this)(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = r(i, j) + aik * o(k, j);
      }
    return r;
  }
  std::vector<Elem> apply(const std::vector<Elem>& v) const {
    assert(v.size() == cols_);
    std::vector<Elem> r(rows_, fld_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero()) r[i] = r[i] + (*this)(i, j) * v[j];
    return r;
  }

  Matrix transpose() const {
    Matrix r(fld_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix scaled(const Elem& c) const {
    Matrix r = *this;
    for (auto& x : r.a_) x = x * c;
    return r;
  }

  /// In-place reduced row echelon form; returns pivot column indices.
  std::vector<std::size_t> rref_in_place() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t sel = r;
      while (sel < rows_ && (*this)(sel, c).is_zero()) ++sel;
      if (sel == rows_) continue;
      if (sel != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(r, j), (*this)(sel, j));
      Elem inv = (*this)(r, c).inverse();
      for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) = (*this)(r, j) * inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        Elem f = (*this)(i, c);
        if (f.is_zero()) continue;
        for (std::size_t j = c; j < cols_; ++j)
          (*this)(i, j) = (*this)(i, j) - f * (*this)(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    Matrix tmp = *this;
    return tmp.rref_in_place().size();
  }

  /// Basis of the right null space {x : A x = 0}, one vector per row of the result.
  Matrix null_space() const {
    Matrix red = *this;
    auto pivots = red.rref_in_place();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols_; ++c)
      if (!is_pivot[c]) free_cols.push_back(c);
    Matrix ns(fld_, free_cols.size(), cols_);
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      std::size_t fc = free_cols[k];
      ns(k, fc) = fld_.one();
      for (std::size_t r = 0; r < pivots.size(); ++r)
        ns(k, pivots[r]) = -red(r, fc);
    }
    return ns;
  }

  /// Inverse of a square matrix; throws if singular.
  Matrix inverse() const {
    assert(rows_ == cols_);
    Matrix aug(fld_, rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = fld_.one();
    }
    auto piv = aug.rref_in_place();
    if (piv.size() != rows_ || piv.back() >= cols_)
      throw precondition_error("matrix is singular");
    Matrix inv(fld_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
    return inv;
  }

  bool is_invertible() const {
    return rows_ == cols_ && rank() == rows_;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  /// True if this equals lambda * I for some lambda (returned through out).
  bool is_scalar(Elem* out = nullptr) const {
    if (rows_ != cols_ || rows_ == 0) return false;
    Elem lam = (*this)(0, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const Elem& want = (i == j) ? lam : fld_.zero();
        if ((*this)(i, j) != want) return false;
      }
    if (out) *out = lam;
    return true;
  }

 private:
  F fld_;
  std::size_t rows_, cols_;
  std::vector<Elem> a_;
};

/// Stack rows of b under a.
template <CoefficientField F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  assert(a.cols() == b.cols() || a.rows() == 0 || b.rows() == 0);
  Matrix<F> r(a.field(), a.rows() + b.rows(), a.rows() ? a.cols() : b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, j) = b(i, j);
  return r;
}

}  // namespace nilgen

#endif
