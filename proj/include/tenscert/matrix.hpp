#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "tenscert/errors.hpp"
#include "tenscert/field.hpp"

namespace tenscert {

// Dense row-major matrix over an exact field element type. Zero-row and
// zero-column matrices are legal (rank 0).
template <class F>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const F& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // Element-free construction, for empty matrices only.
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows * cols != 0)
      throw InternalError("matrix with entries needs a fill element");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
  }

  Matrix transposed() const {
    Matrix t(0, 0);
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.data_.reserve(rows_ * cols_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i)
        t.data_.push_back(data_[i * cols_ + j]);
    return t;
  }

  Matrix submatrix(std::size_t row0, std::size_t col0, std::size_t nrows,
                   std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_)
      throw InternalError("submatrix out of bounds");
    Matrix s(0, 0);
    s.rows_ = nrows;
    s.cols_ = ncols;
    s.data_.reserve(nrows * ncols);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < ncols; ++j)
        s.data_.push_back((*this)(row0 + i, col0 + j));
    return s;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<F> data_;
};

template <class F>
std::ostream& operator<<(std::ostream& os, const Matrix<F>& m) {
  os << "[" << m.rows() << "x" << m.cols() << "]";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "\n";
    for (std::size_t j = 0; j < m.cols(); ++j) os << m(i, j) << " ";
  }
  return os;
}

template <class K>
Matrix<typename K::Element> identity(const K& field, std::size_t n) {
  Matrix<typename K::Element> m(n, n, field.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

template <class F>
Matrix<F> hconcat(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw InternalError("hconcat row mismatch");
  const std::size_t cols = a.cols() + b.cols();
  if (a.rows() == 0 || cols == 0) return Matrix<F>(a.rows(), cols);
  Matrix<F> out(a.rows(), cols, a.cols() > 0 ? a(0, 0) : b(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

template <class K>
Matrix<typename K::Element> multiply(const K& field,
                                     const Matrix<typename K::Element>& a,
                                     const Matrix<typename K::Element>& b) {
  if (a.cols() != b.rows()) throw InternalError("multiply dimension mismatch");
  Matrix<typename K::Element> out(a.rows(), b.cols(), field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

template <class F>
bool is_zero_matrix(const Matrix<F>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

template <class F>
struct EchelonResult {
  Matrix<F> matrix;
  std::size_t rank;
  std::vector<std::size_t> pivot_cols;
};

// Row echelon form by row operations only: pivots are the first nonzero entry
// scanning downward, pivot-free columns are skipped, columns are never swapped.
// Only columns in [0, pivot_cols) are eliminated; pass cols() for a full pass.
template <class F>
EchelonResult<F> row_echelon_partial(Matrix<F> m, std::size_t pivot_cols) {
  const std::size_t rows = m.rows();
  std::vector<std::size_t> pivots;
  std::size_t pr = 0;
  for (std::size_t pc = 0; pc < pivot_cols && pr < rows; ++pc) {
    std::size_t piv = pr;
    while (piv < rows && m(piv, pc).is_zero()) ++piv;
    if (piv == rows) continue;
    m.swap_rows(piv, pr);
    const F pivot = m(pr, pc);
    for (std::size_t i = pr + 1; i < rows; ++i) {
      if (m(i, pc).is_zero()) continue;
      const F f = m(i, pc) / pivot;
      for (std::size_t j = pc; j < m.cols(); ++j) m(i, j) -= f * m(pr, j);
    }
    pivots.push_back(pc);
    ++pr;
  }
  return {std::move(m), pr, std::move(pivots)};
}

template <class F>
EchelonResult<F> row_echelon(Matrix<F> m) {
  const std::size_t cols = m.cols();
  return row_echelon_partial(std::move(m), cols);
}

template <class F>
std::size_t rank_of(Matrix<F> m) {
  return row_echelon(std::move(m)).rank;
}

template <class F>
struct KernelWithRank {
  Matrix<F> kernel;  // rows (left) or columns (right) form a kernel basis
  std::size_t rank;
};

// Basis of {k : k^T M = 0}, one vector per row, obtained by reducing the
// augmented matrix [M | I] and reading the rows whose left block is zero.
template <class K>
KernelWithRank<typename K::Element> left_kernel_with_rank(
    const K& field, const Matrix<typename K::Element>& m) {
  using F = typename K::Element;
  const std::size_t rows = m.rows();
  auto reduced = row_echelon_partial(hconcat(m, identity(field, rows)), m.cols());
  const std::size_t rank = reduced.rank;
  Matrix<F> kernel = reduced.matrix.submatrix(rank, m.cols(), rows - rank, rows);
  return {std::move(kernel), rank};
}

template <class K>
Matrix<typename K::Element> left_kernel(const K& field,
                                        const Matrix<typename K::Element>& m) {
  return left_kernel_with_rank(field, m).kernel;
}

// Basis of {x : M x = 0}, one vector per column.
template <class K>
KernelWithRank<typename K::Element> right_kernel_with_rank(
    const K& field, const Matrix<typename K::Element>& m) {
  auto res = left_kernel_with_rank(field, m.transposed());
  return {res.kernel.transposed(), res.rank};
}

template <class K>
Matrix<typename K::Element> right_kernel(const K& field,
                                         const Matrix<typename K::Element>& m) {
  return right_kernel_with_rank(field, m).kernel;
}

template <class K>
std::optional<Matrix<typename K::Element>> try_inverse(
    const K& field, const Matrix<typename K::Element>& m) {
  using F = typename K::Element;
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  Matrix<F> aug = hconcat(m, identity(field, n));
  // Gauss-Jordan, no column pivoting needed for an invertible matrix
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && aug(piv, c).is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    aug.swap_rows(piv, c);
    const F pivot = aug(c, c);
    for (std::size_t j = c; j < 2 * n; ++j) aug(c, j) /= pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || aug(i, c).is_zero()) continue;
      const F f = aug(i, c);
      for (std::size_t j = c; j < 2 * n; ++j) aug(i, j) -= f * aug(c, j);
    }
  }
  return aug.submatrix(0, n, n, n);
}

// Fraction-free (Bareiss) elimination: every intermediate entry is an exact
// minor of the input, so all divisions below are exact integer divisions.
// Returns the rank over the rationals.
inline std::size_t bareiss_rank(Matrix<BigInt> m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  BigInt prev = 1;
  std::size_t pr = 0;
  for (std::size_t pc = 0; pc < cols && pr < rows; ++pc) {
    std::size_t piv = pr;
    while (piv < rows && m(piv, pc) == 0) ++piv;
    if (piv == rows) continue;
    m.swap_rows(piv, pr);
    for (std::size_t i = pr + 1; i < rows; ++i) {
      for (std::size_t j = pc + 1; j < cols; ++j)
        m(i, j) = (m(pr, pc) * m(i, j) - m(i, pc) * m(pr, j)) / prev;
      m(i, pc) = 0;
    }
    prev = m(pr, pc);
    ++pr;
  }
  return pr;
}

// Rational matrices are scaled row-wise to integers first; row scaling by a
// nonzero constant does not change the rank.
inline std::size_t bareiss_rank(const Matrix<Rational>& m) {
  Matrix<BigInt> z(m.rows(), m.cols(), BigInt(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt scale = 1;
    for (std::size_t j = 0; j < m.cols(); ++j)
      scale = boost::multiprecision::lcm(scale, m(i, j).denominator());
    for (std::size_t j = 0; j < m.cols(); ++j)
      z(i, j) = m(i, j).numerator() * (scale / m(i, j).denominator());
  }
  return bareiss_rank(std::move(z));
}

}  // namespace tenscert
