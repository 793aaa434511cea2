// Copyright 2026 The mwcalc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense row-major matrices over a semiring.

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mw/error.hpp"
#include "mw/semiring.hpp"

namespace mw {

template <Semiring S>
class Matrix {
 public:
  using T = typename S::T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, S::zero()) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw ShapeError("matrix data size mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S::one();
    return m;
  }
  /// The 1x1 matrix (1).
  static Matrix unit() { return identity(1); }
  /// Rows given as nested lists of already-converted scalars.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw ShapeError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Sub-matrix on the given row and column index lists.
  Matrix select(const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) const {
    Matrix m(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = (*this)(r[i], c[j]);
    return m;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!S::is_zero(x)) return false;
    return true;
  }

  /// One row per line, entries separated by two spaces.
  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << "  ";
        os << S::str((*this)(i, j));
      }
      os << "\n";
    }
    return os.str();
  }

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ",";
        os << S::str((*this)(i, j));
      }
      os << "\n";
    }
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Semiring S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  Matrix<S> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& x = a(i, k);
      if (S::is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = S::add(c(i, j), S::mul(x, b(k, j)));
    }
  return c;
}

/// Kronecker product, left operand most significant.
template <Semiring S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& x = a(i, j);
      if (S::is_zero(x)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = S::mul(x, b(k, l));
    }
  return c;
}

template <Semiring S>
Matrix<S> add(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add shape mismatch");
  Matrix<S> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = S::add(a(i, j), b(i, j));
  return c;
}

template <Semiring S>
Matrix<S> scalar_mul(const typename S::T& s, const Matrix<S>& a) {
  Matrix<S> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = S::mul(s, a(i, j));
  return c;
}

/// target[rows[i], cols[j]] += block[i, j]; rows/cols are index lists so the
/// same call serves contiguous ranges and scattered Kronecker positions.
template <Semiring S>
void write_block(Matrix<S>& target, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols, const Matrix<S>& block,
                 bool accumulate = true) {
  if (rows.size() != block.rows() || cols.size() != block.cols())
    throw ShapeError("block shape does not match index ranges");
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (rows[i] >= target.rows() || cols[j] >= target.cols())
        throw ShapeError("block index out of range");
      auto& t = target(rows[i], cols[j]);
      t = accumulate ? S::add(t, block(i, j)) : block(i, j);
    }
}

template <Semiring S>
bool equal(const Matrix<S>& a, const Matrix<S>& b, double tol = 1e-9) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (!S::approx_equal(a.data()[i], b.data()[i], tol)) return false;
  return true;
}

/// Entry-wise conversion between semirings.
template <Semiring To, Semiring From, class F>
Matrix<To> convert(const Matrix<From>& m, F&& f) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f(m(i, j));
  return out;
}

template <Semiring S>
std::ostream& operator<<(std::ostream& os, const Matrix<S>& m) {
  return os << m.str();
}

}  // namespace mw
