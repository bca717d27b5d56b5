#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srrk/counters.hpp"
#include "srrk/kernels.hpp"
#include "srrk/krylov.hpp"
#include "srrk/restore.hpp"

namespace srrk {

enum class EigVariant { ks, rks, srr_ks };

struct EigConfig {
  std::size_t k = 10;    // wanted eigenpairs
  std::size_t m = 40;    // order after expansion
  std::size_t ell = 20;  // order after restarting
  Which which = Which::largest_magnitude;
  double tol = 1e-7;
  std::size_t max_matvecs = 100000;
  std::size_t max_cycles = 500;
  EigVariant variant = EigVariant::srr_ks;

  std::size_t d = 100;  // sketch size (randomized variants)
  std::size_t xi = 8;
  std::uint64_t sketch_seed = 0;
  RandomizedOrtho ortho = RandomizedOrtho::rgs;
  StandardOrtho standard_ortho = StandardOrtho::cgs2;

  bool reorthogonalize = false;  // optional sketched reorthogonalization step
  CorrectionSolver solver;
  std::uint64_t seed = 0;  // Gaussian initial vector

  bool check_convergence = true;   // false: run exactly max_cycles (cost experiments)
  bool trace_conditioning = true;  // record kappa(U_m) and measured distortion per cycle
};

struct RitzSet {
  std::vector<Complex> values;  // ranked by the selection criterion
  DenseMatrix basis;            // n x k approximate invariant-subspace basis
  std::vector<double> residuals;
  std::size_t cycles = 0;
  std::int64_t matvecs = 0;
  bool converged = false;
};

struct EigCycleRow {
  std::size_t cycle = 0;
  std::vector<Complex> ritz;
  std::vector<double> residuals;
  double kappa_u = 0.0;     // 0 when not traced
  double epsilon = 0.0;
  double kappa_eps = 0.0;
  std::size_t converged_count = 0;
  Counters totals;  // cumulative counters at the end of the cycle
};

struct EigTrace {
  std::vector<EigCycleRow> rows;
  std::vector<std::string> warnings;
};

struct EigResult {
  RitzSet ritz;
  EigTrace trace;
  Counters counters;
};

// Restarted Krylov-Schur. The three variants share selection, convergence
// checking and restart logic; they differ in the basis arithmetic (orthonormal
// vs Omega-orthonormal) and in whether the similarity-restoring correction
// runs before the Schur step. A run is deterministic given (config, initial).
EigResult krylov_schur(const LinearOperator& a, const EigConfig& cfg,
                       std::optional<Vector> initial = std::nullopt);

// Compression of an order-m decomposition to order ell through the leading
// Schur vectors: basis -> basis * V_ell, projected matrix -> S_ell,
// coefficients -> V_ell^H c. The residual direction is untouched.
RandomizedKrylovDecomposition compress(const CorrectedKrylovDecomposition& cor,
                                       const SchurForm& sf, std::size_t ell,
                                       RandomizedOrtho ortho);
RandomizedKrylovDecomposition compress(const RandomizedKrylovDecomposition& dec,
                                       const SchurForm& sf, std::size_t ell);
OrthonormalKrylovDecomposition compress(const OrthonormalKrylovDecomposition& dec,
                                        const SchurForm& sf, std::size_t ell);

// One randomized Gram-Schmidt pass on the flagged column (the corrected
// residual kept through a restart), restoring Omega-orthonormality of the
// whole basis. The projected matrix and coefficients absorb the similarity
// transformation, so the decomposition identity and range(U) are preserved.
void sketched_reorthogonalize(RandomizedKrylovDecomposition& dec, std::size_t index);

// ||residual_dir|| * |c^H y_i| / ||basis y_i|| for the Ritz pairs at the
// leading `count` positions of the ordered Schur form; this is the exact
// residual norm implied by the decomposition identity.
std::vector<double> residual_estimates(const DenseMatrix& basis, const SchurForm& sf,
                                       std::span<const Complex> c,
                                       std::span<const Complex> residual_dir, std::size_t count,
                                       bool basis_orthonormal = false);

inline std::vector<double> residual_estimates(const CorrectedKrylovDecomposition& cor,
                                              const SchurForm& sf, std::size_t count) {
  return residual_estimates(cor.u, sf, cor.c, cor.uhat, count, false);
}

}  // namespace srrk
