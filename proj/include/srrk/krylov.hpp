#pragma once

#include <memory>

#include "srrk/counters.hpp"
#include "srrk/dense.hpp"
#include "srrk/operator.hpp"
#include "srrk/sketch.hpp"
#include "srrk/types.hpp"

namespace srrk {

// relative threshold declaring a vanished residual an exact invariant subspace
inline constexpr double breakdown_threshold = 1e-12;

enum class StandardOrtho { cgs, cgs2 };
enum class RandomizedOrtho { rgs, rcgs2 };

// A Q = Q G + next c^H with Q^H Q = I and Q^H next = 0. After a plain Arnoldi
// build c = residual_scale * e_j and G is upper Hessenberg; after a
// Krylov-Schur compression c is a general vector and G is not Hessenberg.
struct OrthonormalKrylovDecomposition {
  DenseMatrix q;   // n x j
  DenseMatrix g;   // j x j
  Vector next;     // q_{j+1}, unit norm
  Vector c;        // residual coefficients, length j
  double residual_scale = 0.0;  // g_{j+1,j} from the latest Arnoldi step
  StandardOrtho ortho = StandardOrtho::cgs2;
  bool invariant_subspace_found = false;

  std::size_t order() const { return q.cols(); }
};

// A U = U H + next c^H with Omega U having orthonormal columns. The QR
// factors (p, r) of the cached sketched basis realize (Omega U)^dagger for
// the randomized Gram-Schmidt projections; they also absorb the one column
// that stops being Omega-orthonormal after a similarity-restoring restart.
struct RandomizedKrylovDecomposition {
  DenseMatrix u;          // n x j
  DenseMatrix su;         // d x j, Omega U, updated incrementally
  DenseMatrix h;          // j x j
  Vector next;            // u_{j+1}
  Vector sketched_next;   // Omega u_{j+1}
  Vector c;               // residual coefficients, length j
  double residual_scale = 0.0;  // h_{j+1,j} from the latest Arnoldi step
  std::shared_ptr<const SparseSignSketch> sketch;
  RandomizedOrtho ortho = RandomizedOrtho::rgs;

  DenseMatrix p;  // d x j orthonormal factor of su
  DenseMatrix r;  // j x j upper triangular factor of su

  bool next_not_omega_normalized = false;  // next is the corrected residual direction
  bool has_flagged_col = false;            // basis holds one non-Omega-orthonormal column
  bool invariant_subspace_found = false;

  std::size_t order() const { return u.cols(); }
};

// Order-0 state holding q_1 = b/||b||; `steps` expansions make an order-steps
// decomposition. Throws zero_initial_vector.
OrthonormalKrylovDecomposition arnoldi_init(const LinearOperator& a, std::span<const Complex> b,
                                            StandardOrtho ortho, Counters* counters = nullptr);

// Grows the decomposition by `steps` Arnoldi iterations, orthogonalizing each
// new direction against every existing column. Breakdown flags the
// decomposition and stops early.
void arnoldi_expand(OrthonormalKrylovDecomposition& dec, const LinearOperator& a,
                    std::size_t steps, Counters* counters = nullptr);

OrthonormalKrylovDecomposition arnoldi(const LinearOperator& a, std::span<const Complex> b,
                                       std::size_t m, StandardOrtho ortho,
                                       Counters* counters = nullptr);

RandomizedKrylovDecomposition randomized_arnoldi_init(
    const LinearOperator& a, std::span<const Complex> b,
    std::shared_ptr<const SparseSignSketch> sketch, RandomizedOrtho ortho,
    Counters* counters = nullptr);

void randomized_expand(RandomizedKrylovDecomposition& dec, const LinearOperator& a,
                       std::size_t steps, Counters* counters = nullptr);

RandomizedKrylovDecomposition randomized_arnoldi(const LinearOperator& a,
                                                 std::span<const Complex> b, std::size_t m,
                                                 std::shared_ptr<const SparseSignSketch> sketch,
                                                 RandomizedOrtho ortho,
                                                 Counters* counters = nullptr);

// Rebuilds the QR factors of the sketched basis from scratch (used after a
// compression replaced the basis columns).
void rebuild_sketched_qr(RandomizedKrylovDecomposition& dec);

// --- diagnostics, shared by tests and traces ---

// max over columns of ||A u_j - (U H + next c^H)_j|| / ||A||_est
double decomposition_residual(const RandomizedKrylovDecomposition& dec, const LinearOperator& a);
double decomposition_residual(const OrthonormalKrylovDecomposition& dec, const LinearOperator& a);

// || (Omega U)^H (Omega U) - I ||_F, flagged column excluded when present
double omega_orthonormality_defect(const RandomizedKrylovDecomposition& dec,
                                   std::size_t skip_col = static_cast<std::size_t>(-1));

double orthonormality_defect(const DenseMatrix& q);

}  // namespace srrk
