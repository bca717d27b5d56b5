#pragma once

#include <functional>
#include <span>
#include <vector>

#include "srrk/dense.hpp"
#include "srrk/scalar_function.hpp"
#include "srrk/types.hpp"

namespace srrk {

struct QrResult {
  DenseMatrix q;  // orthonormal columns, same shape as the input
  DenseMatrix r;  // upper triangular, nonnegative real diagonal
};

// Householder QR of an m x k matrix, m >= k. Rank deficiency shows up as zero
// diagonal entries of R and is not an error.
QrResult householder_qr(const DenseMatrix& m);

// Lower Cholesky factor of a Hermitian positive definite matrix. The input is
// symmetrized as (G + G^H)/2 before factoring. Pivots at or below
// m*u*trace(G) raise not_positive_definite, the signature of an
// ill-conditioned basis.
DenseMatrix cholesky(const DenseMatrix& gram);

enum class Which {
  largest_magnitude,
  largest_real,
  smallest_real,
};

struct SchurForm {
  DenseMatrix v;            // unitary
  DenseMatrix s;            // upper triangular, complex diagonal
  std::size_t selected = 0; // leading diagonal entries flagged by the ordering
};

// Complex Schur decomposition H V = V S via Hessenberg reduction and shifted
// QR. Complex arithmetic throughout, so reordering is a chain of 1x1 swaps.
SchurForm schur(const DenseMatrix& h);

// Schur form with the `ell` eigenvalues ranked first by `which` moved to the
// leading diagonal, in rank order. Ties break by original position.
SchurForm schur_ordered(const DenseMatrix& h, Which which, std::size_t ell);

// In-place reordering of an existing Schur form under the same ranking.
void reorder_selected(SchurForm& sf, Which which, std::size_t ell);

// Stable ranking of eigenvalues under a selection criterion.
std::vector<std::size_t> rank_eigenvalues(std::span<const Complex> values, Which which);

// Unitary similarity swapping adjacent diagonal entries p and p+1 of an upper
// triangular S, with the same rotation applied to the columns of V.
void swap_adjacent_eigenvalues(DenseMatrix& s, DenseMatrix& v, std::size_t p);

// f applied to an upper triangular matrix through the (unblocked) Parlett
// recurrence. Diagonal entries closer than 1e-8*||T||_F are perturbed apart
// and the computation retried; `perturbations`, when given, receives how many
// entries were moved.
DenseMatrix triangular_function(const DenseMatrix& t, const ScalarFunction& f,
                                int* perturbations = nullptr);

// Unit eigenvector of an upper triangular matrix for the eigenvalue at
// diagonal `position` (entries below `position` are zero).
Vector triangular_eigenvector(const DenseMatrix& s, std::size_t position);

// Rectangular operator with adjoint, the least-squares solver contract.
struct LsqrOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const Complex>, std::span<Complex>)> apply;
  std::function<void(std::span<const Complex>, std::span<Complex>)> apply_adjoint;
};

struct LsqrResult {
  Vector x;
  std::size_t iterations = 0;
  bool converged = false;
};

// Paige-Saunders LSQR for min ||A x - b||. Stops when the estimated
// ||A^H r|| <= tol * ||A|| * ||r||; hitting maxit returns the best iterate
// with converged = false.
LsqrResult lsqr(const LsqrOperator& op, std::span<const Complex> rhs, double tol,
                std::size_t maxit);

// Singular values (descending) by one-sided Jacobi, rows >= cols.
std::vector<double> svd_small(const DenseMatrix& m);

// sigma_max / sigma_min
double condition_number(const DenseMatrix& m);

// Dense solve A x = b by LU with partial pivoting.
Vector solve_dense(const DenseMatrix& a, std::span<const Complex> b);

// x with R x = b, R upper triangular.
Vector solve_upper_triangular(const DenseMatrix& r, std::span<const Complex> b);

// x with L x = b, L lower triangular.
Vector solve_lower_triangular(const DenseMatrix& l, std::span<const Complex> b);

inline std::vector<Complex> eigenvalues(const DenseMatrix& h) { return diagonal(schur(h).s); }

}  // namespace srrk
