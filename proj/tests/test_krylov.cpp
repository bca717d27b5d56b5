#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "srrk/error.hpp"
#include "srrk/kernels.hpp"
#include "srrk/krylov.hpp"

using namespace srrk;

namespace {

LinearOperator dense_operator(std::shared_ptr<DenseMatrix> m, bool hermitian = false) {
  LinearOperator op;
  op.n = m->rows();
  op.hermitian = hermitian;
  op.apply = [m](std::span<const Complex> x, std::span<Complex> y) {
    Vector t = matvec(*m, x);
    std::copy(t.begin(), t.end(), y.begin());
  };
  op.apply_adjoint = [m](std::span<const Complex> x, std::span<Complex> y) {
    Vector t = adjoint_matvec(*m, x);
    std::copy(t.begin(), t.end(), y.begin());
  };
  return op;
}

LinearOperator diag_operator(std::shared_ptr<Vector> d) {
  LinearOperator op;
  op.n = d->size();
  op.hermitian = true;
  op.apply = [d](std::span<const Complex> x, std::span<Complex> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (*d)[i] * x[i];
  };
  return op;
}

Vector random_vec(std::size_t n, std::uint64_t seed) {
  auto m = oracle::random_matrix(n, 1, seed, false);
  return Vector(m.col(0).begin(), m.col(0).end());
}

}  // namespace

TEST_CASE("arnoldi breaks down immediately on the identity") {
  auto id = std::make_shared<DenseMatrix>(DenseMatrix::identity(6));
  auto op = dense_operator(id, true);
  Vector b = random_vec(6, 1);
  auto dec = arnoldi(op, b, 4, StandardOrtho::cgs2);
  CHECK(dec.invariant_subspace_found);
  CHECK(dec.order() == 1);
  CHECK(std::abs(dec.g(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("arnoldi reaches the full space of a 2x2 diagonal") {
  auto d = std::make_shared<Vector>(Vector{1.0, 2.0});
  auto op = diag_operator(d);
  Vector b = {Complex{1.0 / std::sqrt(2.0), 0.0}, Complex{1.0 / std::sqrt(2.0), 0.0}};
  auto dec = arnoldi(op, b, 2, StandardOrtho::cgs2);
  CHECK(dec.order() == 2);
  auto vals = eigenvalues(dec.g);
  CHECK(oracle::eigenvalue_match_error(vals, {Complex{1.0, 0.0}, Complex{2.0, 0.0}}) < 1e-12);
}

TEST_CASE("arnoldi projected matrix matches a brute-force Gram-Schmidt oracle") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(6, 6, 9));
  auto op = dense_operator(a);
  Vector b = random_vec(6, 2);
  auto dec = arnoldi(op, b, 4, StandardOrtho::cgs2);

  // independent orthonormal basis of K_4(A,b) by QR of the Krylov matrix
  DenseMatrix kry(6, 4);
  Vector v(b.begin(), b.end());
  for (std::size_t j = 0; j < 4; ++j) {
    std::copy(v.begin(), v.end(), kry.col(j).begin());
    v = matvec(*a, v);
  }
  auto qr = householder_qr(kry);
  DenseMatrix g_ref = matmul(adjoint(qr.q), matmul(*a, qr.q));

  // G equals Q^H A Q up to the unitary change of basis between the two
  // orthonormal bases of the same space; compare spectra and the subspace
  CHECK(oracle::eigenvalue_match_error(eigenvalues(dec.g), eigenvalues(g_ref)) < 1e-12);
  CHECK(oracle::max_principal_angle(dec.q, qr.q) < 1e-10);

  // and entrywise: project A onto the computed basis directly
  DenseMatrix g_direct = matmul(adjoint(dec.q), matmul(*a, dec.q));
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(dec.g(i, j) - g_direct(i, j)) < 1e-12);

  CHECK(decomposition_residual(dec, op) < 1e-12);
  CHECK(orthonormality_defect(dec.q) < 1e-12);
}

TEST_CASE("hessenberg structure of freshly built decompositions") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(20, 20, 33));
  auto op = dense_operator(a);
  Vector b = random_vec(20, 3);
  auto dec = arnoldi(op, b, 8, StandardOrtho::cgs2);
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t i = j + 2; i < 8; ++i) CHECK(std::abs(dec.g(i, j)) == 0.0);

  auto sketch = std::make_shared<SparseSignSketch>(16, 20, 4, 5);
  auto rdec = randomized_arnoldi(op, b, 8, sketch, RandomizedOrtho::rgs);
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t i = j + 2; i < 8; ++i) CHECK(std::abs(rdec.h(i, j)) == 0.0);
}

TEST_CASE("randomized arnoldi with the identity sketch coincides with standard arnoldi") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(12, 12, 21));
  auto op = dense_operator(a);
  Vector b = random_vec(12, 4);
  auto dec = arnoldi(op, b, 5, StandardOrtho::cgs2);
  auto sketch = std::make_shared<SparseSignSketch>(SparseSignSketch::identity(12));
  auto rdec = randomized_arnoldi(op, b, 5, sketch, RandomizedOrtho::rcgs2);
  for (std::size_t j = 0; j < 5; ++j) {
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(rdec.u(i, j) - dec.q(i, j)) < 1e-12);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(rdec.h(i, j) - dec.g(i, j)) < 1e-11);
  }
}

TEST_CASE("randomized arnoldi invariants on a 100x100 instance") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(100, 100, 55));
  auto op = dense_operator(a);
  Vector b = random_vec(100, 5);
  auto sketch = std::make_shared<SparseSignSketch>(40, 100, 8, 17);
  for (auto ortho : {RandomizedOrtho::rgs, RandomizedOrtho::rcgs2}) {
    auto dec = randomized_arnoldi(op, b, 10, sketch, ortho);
    CHECK(omega_orthonormality_defect(dec) <= 1e-10);
    CHECK(decomposition_residual(dec, op) <= 1e-12);
    // cached sketched basis agrees with a fresh sketch of U
    for (std::size_t j = 0; j < dec.order(); ++j) {
      Vector fresh = sketch->apply(dec.u.col(j));
      for (std::size_t i = 0; i < 40; ++i) CHECK(std::abs(fresh[i] - dec.su(i, j)) < 1e-13);
    }
  }
}

TEST_CASE("RGS and RCGS2 span the same subspace") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(80, 80, 66));
  auto op = dense_operator(a);
  Vector b = random_vec(80, 6);
  auto sketch = std::make_shared<SparseSignSketch>(40, 80, 8, 3);
  auto d1 = randomized_arnoldi(op, b, 8, sketch, RandomizedOrtho::rgs);
  auto d2 = randomized_arnoldi(op, b, 8, sketch, RandomizedOrtho::rcgs2);
  CHECK(oracle::max_principal_angle(d1.u, d2.u) < 1e-8);
}

TEST_CASE("expand is incremental: batch equals init plus two expansions") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(50, 50, 77));
  auto op = dense_operator(a);
  Vector b = random_vec(50, 7);
  auto sketch = std::make_shared<SparseSignSketch>(30, 50, 6, 9);

  auto batch = randomized_arnoldi(op, b, 5, sketch, RandomizedOrtho::rgs);
  auto inc = randomized_arnoldi(op, b, 3, sketch, RandomizedOrtho::rgs);
  randomized_expand(inc, op, 0);
  CHECK(inc.order() == 3);
  randomized_expand(inc, op, 2);
  CHECK(inc.order() == 5);

  for (std::size_t j = 0; j < 5; ++j) {
    for (std::size_t i = 0; i < 50; ++i) CHECK(std::abs(inc.u(i, j) - batch.u(i, j)) < 1e-13);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(inc.h(i, j) - batch.h(i, j)) < 1e-13);
  }
  CHECK(decomposition_residual(inc, op) < 1e-12);
}

TEST_CASE("zero initial vector and sketch-too-small are rejected") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(10, 10, 88));
  auto op = dense_operator(a);
  Vector zero(10, Complex{0.0, 0.0});
  CHECK_THROWS_AS(arnoldi(op, zero, 3, StandardOrtho::cgs2), Error);
  auto sketch = std::make_shared<SparseSignSketch>(5, 10, 2, 0);
  CHECK_THROWS_AS(randomized_arnoldi(op, zero, 3, sketch, RandomizedOrtho::rgs), Error);
  Vector b = random_vec(10, 9);
  CHECK_THROWS_AS(randomized_arnoldi(op, b, 6, sketch, RandomizedOrtho::rgs), Error);
}

TEST_CASE("basis conditioning stays within the embedding bound") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(150, 150, 91));
  auto op = dense_operator(a);
  Vector b = random_vec(150, 10);
  auto sketch = std::make_shared<SparseSignSketch>(60, 150, 8, 31);
  auto dec = randomized_arnoldi(op, b, 12, sketch, RandomizedOrtho::rgs);

  auto qr = householder_qr(dec.u);
  EmbeddingQuality q = measure_distortion(*sketch, qr.q);
  const double kappa = condition_number(dec.u);
  if (std::isfinite(q.kappa_eps)) {
    CHECK(kappa <= q.kappa_eps * (1.0 + 1e-10));
  }
  CHECK(kappa < 10.0);
}
