#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "srrk/dense.hpp"
#include "srrk/operator.hpp"
#include "srrk/scalar_function.hpp"
#include "srrk/types.hpp"

namespace srrk {

enum class TransformKind { fft, dct, random_orthogonal };

// What spectrum the synthetic core carries. `spreads` are standard
// deviations; paper-style N(mu, variance) parameters enter as sqrt(variance).
struct SpectrumSpec {
  enum class Kind { equispaced_transform, clustered_gaussian, custom_list };
  Kind kind = Kind::equispaced_transform;

  // equispaced_transform: eigenvalues f(a_i), a_i equispaced in [a_lo, a_hi]
  ScalarFunction function;
  double a_lo = 2.0;
  double a_hi = 10.0;

  // clustered_gaussian
  std::vector<double> centers;
  std::vector<double> spreads;
  std::vector<std::size_t> sizes;

  // custom_list
  std::vector<Complex> values;

  // gaussian superdiagonal coupling; 0 keeps the core diagonal (normal A)
  double superdiagonal_variance = 0.0;
};

struct SyntheticSpec {
  std::size_t n = 0;
  SpectrumSpec spectrum;
  TransformKind transform = TransformKind::random_orthogonal;
  std::uint64_t seed = 0;
  std::size_t reflectors = 20;  // Householder count for random_orthogonal
};

// A = T^{-1} B T with B bidiagonal (planted diagonal + optional Gaussian
// superdiagonal) and T a fast unitary/orthogonal transform. The spectrum of A
// is exactly the planted diagonal.
struct SyntheticOperator {
  std::size_t n = 0;
  TransformKind transform = TransformKind::random_orthogonal;
  Vector planted;                 // diagonal of the core
  std::vector<double> superdiag;  // empty when coupling is none
  std::vector<std::vector<double>> reflectors;  // real Householder directions
  bool hermitian = false;

  void apply_transform(std::span<const Complex> x, std::span<Complex> y) const;
  void apply_inverse_transform(std::span<const Complex> x, std::span<Complex> y) const;
  void apply(std::span<const Complex> x, std::span<Complex> y) const;

  double spectral_scale() const;  // max |planted eigenvalue|
};

std::shared_ptr<SyntheticOperator> synthetic_operator(const SyntheticSpec& spec);
LinearOperator make_operator(std::shared_ptr<const SyntheticOperator> op);

// Real sparse matrix in CSR form.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  void apply_adjoint(std::span<const Complex> x, std::span<Complex> y) const;
};

// Matrix Market coordinate reader: real/integer/pattern fields, general or
// symmetric storage (symmetric input is expanded). Duplicate entries sum.
SparseMatrix load_matrix_market(const std::string& path);

// coordinate-format writer, `general` symmetry, 1-based indices
void write_matrix_market(const std::string& path, const SparseMatrix& m);

// L = D_out - A on the unweighted pattern of a square adjacency matrix;
// loops dropped, duplicate edges collapsed.
SparseMatrix graph_laplacian(const SparseMatrix& adjacency);

LinearOperator make_operator(std::shared_ptr<const SparseMatrix> m, bool hermitian = false);

// apply to unit vectors; tests and small dense references only
DenseMatrix materialize(const LinearOperator& op);

}  // namespace srrk
