#pragma once

#include <optional>
#include <string>

#include "srrk/counters.hpp"
#include "srrk/krylov.hpp"

namespace srrk {

// How the correction least-squares problem min ||U h - u_{m+1}|| is solved.
struct CorrectionSolver {
  enum class Method { cholesky_gram, lsqr };
  Method method = Method::cholesky_gram;
  double lsqr_tol = 1e-12;
  std::size_t lsqr_maxit = 1000;

  static CorrectionSolver cholesky() { return {}; }
  static CorrectionSolver lsqr_with(double tol, std::size_t maxit = 1000) {
    CorrectionSolver s;
    s.method = Method::lsqr;
    s.lsqr_tol = tol;
    s.lsqr_maxit = maxit;
    return s;
  }
};

struct CorrectionReport {
  CorrectionSolver::Method method = CorrectionSolver::Method::cholesky_gram;
  std::size_t iterations = 0;  // LSQR iterations, 0 for Cholesky
  bool inner_converged = true;
};

// A U = U Hhat + uhat c^H with U^H uhat = 0: the similarity-restored Krylov
// decomposition. U is the (unchanged) Omega-orthonormal basis.
struct CorrectedKrylovDecomposition {
  DenseMatrix u;
  DenseMatrix su;
  DenseMatrix hhat;
  Vector uhat;
  Vector sketched_uhat;
  Vector c;
  Vector correction;  // the least-squares solution h_m, kept for diagnostics
  std::shared_ptr<const SparseSignSketch> sketch;
  CorrectionReport solver_report;

  std::size_t order() const { return u.cols(); }
};

// Algorithm: solve hhat_m = U^dagger u_{m+1}, set uhat = u_{m+1} - U hhat_m
// and Hhat = H + hhat_m c^H. Only the last column of H changes when c is the
// Arnoldi residual coefficient vector. Cholesky failures surface as
// ill_conditioned_basis (rebuild with a larger d).
CorrectedKrylovDecomposition correct(const RandomizedKrylovDecomposition& dec,
                                     const CorrectionSolver& solver,
                                     Counters* counters = nullptr);

// Orthonormal Krylov decomposition sharing the corrected one's subspace:
// Qhat = qr(U).q, Ghat = R Hhat R^{-1}, chat = R^{-H} c. Test oracle for the
// similarity claim.
OrthonormalKrylovDecomposition associated_orthonormal(const CorrectedKrylovDecomposition& cor);

// FOM solution x_m = beta * U * Hhat^{-1} e_1, assuming u_1 = b / beta.
Vector fom_solve(const CorrectedKrylovDecomposition& cor, Complex beta,
                 Counters* counters = nullptr);

// || U^H uhat || / ||uhat||, the defining property of the correction
double orthogonality_defect(const CorrectedKrylovDecomposition& cor);

}  // namespace srrk
