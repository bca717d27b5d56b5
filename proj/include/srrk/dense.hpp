#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "srrk/error.hpp"
#include "srrk/types.hpp"

namespace srrk {

// Small dense complex matrix, column-major. Column-major so that appending a
// basis column is a contiguous push and columns can be handed out as spans.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // checked constructor for user-supplied data (rejects NaN/Inf)
  static DenseMatrix from_data(std::size_t rows, std::size_t cols,
                               std::span<const Complex> column_major) {
    if (column_major.size() != rows * cols)
      throw Error(ErrorCode::dimension_mismatch, "matrix data size mismatch");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < column_major.size(); ++i) {
      const Complex v = column_major[i];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorCode::invalid_argument, "matrix entries must be finite");
      m.data_[i] = v;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<Complex> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  void append_col(std::span<const Complex> column) {
    if (column.size() != rows_) throw Error(ErrorCode::dimension_mismatch, "append_col size");
    data_.insert(data_.end(), column.begin(), column.end());
    ++cols_;
  }

  void drop_last_col() {
    data_.resize(data_.size() - rows_);
    --cols_;
  }

  DenseMatrix leading(std::size_t r, std::size_t c) const {
    DenseMatrix out(r, c);
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t i = 0; i < r; ++i) out(i, j) = (*this)(i, j);
    return out;
  }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline DenseMatrix adjoint(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = std::conj(a(i, j));
  return out;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::dimension_mismatch, "matmul");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex bkj = b(k, j);
      if (bkj == Complex{0.0, 0.0}) continue;
      auto ac = a.col(k);
      auto oc = out.col(j);
      for (std::size_t i = 0; i < a.rows(); ++i) oc[i] += ac[i] * bkj;
    }
  return out;
}

// y = A x
inline Vector matvec(const DenseMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::dimension_mismatch, "matvec");
  Vector y(a.rows(), Complex{0.0, 0.0});
  for (std::size_t j = 0; j < a.cols(); ++j) axpy(x[j], a.col(j), y);
  return y;
}

// y = A^H x
inline Vector adjoint_matvec(const DenseMatrix& a, std::span<const Complex> x) {
  if (a.rows() != x.size()) throw Error(ErrorCode::dimension_mismatch, "adjoint_matvec");
  Vector y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = dot(a.col(j), x);
  return y;
}

inline double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (const Complex& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline std::vector<Complex> diagonal(const DenseMatrix& a) {
  const std::size_t n = std::min(a.rows(), a.cols());
  std::vector<Complex> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  return d;
}

}  // namespace srrk
