#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "srrk/error.hpp"
#include "srrk/kernels.hpp"
#include "srrk/restore.hpp"

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
  return op;
}

Vector random_vec(std::size_t n, std::uint64_t seed) {
  auto m = oracle::random_matrix(n, 1, seed, false);
  return Vector(m.col(0).begin(), m.col(0).end());
}

std::shared_ptr<DenseMatrix> hermitian_matrix(std::size_t n, std::uint64_t seed) {
  auto g = oracle::random_matrix(n, n, seed);
  auto h = std::make_shared<DenseMatrix>(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) (*h)(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  return h;
}

std::shared_ptr<DenseMatrix> spd_matrix(std::size_t n, std::uint64_t seed) {
  auto g = oracle::random_matrix(n, n, seed, false);
  auto a = std::make_shared<DenseMatrix>(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) s += g(k, i) * g(k, j);
      (*a)(i, j) = s / static_cast<double>(n);
    }
  for (std::size_t i = 0; i < n; ++i) (*a)(i, i) += 1.0;
  return a;
}

}  // namespace

TEST_CASE("correct is a no-op on an orthonormal basis with orthogonal residual") {
  // standard Arnoldi produces exactly that structure; feed it through a
  // randomized decomposition with the identity sketch
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(20, 20, 1));
  auto op = dense_operator(a);
  Vector b = random_vec(20, 2);
  auto sketch = std::make_shared<SparseSignSketch>(SparseSignSketch::identity(20));
  auto dec = randomized_arnoldi(op, b, 5, sketch, RandomizedOrtho::rcgs2);
  auto cor = correct(dec, CorrectionSolver::cholesky());
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(cor.correction[i]) < 1e-12);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(cor.hhat(i, j) - dec.h(i, j)) < 1e-12);
  for (std::size_t i = 0; i < 20; ++i) CHECK(std::abs(cor.uhat[i] - dec.next[i]) < 1e-12);
}

TEST_CASE("correction coefficients match the dense pseudoinverse oracle") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(60, 60, 3));
  auto op = dense_operator(a);
  Vector b = random_vec(60, 4);
  auto sketch = std::make_shared<SparseSignSketch>(30, 60, 8, 5);
  auto dec = randomized_arnoldi(op, b, 6, sketch, RandomizedOrtho::rgs);

  auto cor = correct(dec, CorrectionSolver::cholesky());
  Vector ref = oracle::pinv_solve(dec.u, dec.next);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(cor.correction[i] - ref[i]) < 1e-12);

  auto cor_lsqr = correct(dec, CorrectionSolver::lsqr_with(1e-12));
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(cor_lsqr.correction[i] - ref[i]) < 1e-10);
}

TEST_CASE("orthogonal residual after correction, both solver paths") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(120, 120, 7));
  auto op = dense_operator(a);
  Vector b = random_vec(120, 8);
  auto sketch = std::make_shared<SparseSignSketch>(50, 120, 8, 9);
  auto dec = randomized_arnoldi(op, b, 12, sketch, RandomizedOrtho::rgs);

  CHECK(orthogonality_defect(correct(dec, CorrectionSolver::cholesky())) <= 1e-10);
  CHECK(orthogonality_defect(correct(dec, CorrectionSolver::lsqr_with(1e-12))) <= 1e-10);

  // decomposition identity still holds after the rearrangement
  auto cor = correct(dec, CorrectionSolver::cholesky());
  RandomizedKrylovDecomposition as_dec;
  as_dec.u = cor.u;
  as_dec.h = cor.hhat;
  as_dec.next = cor.uhat;
  as_dec.c = cor.c;
  CHECK(decomposition_residual(as_dec, op) < 1e-11);
}

TEST_CASE("similarity restoration: eigenvalues of Hhat match standard Arnoldi") {
  for (std::uint64_t seed : {11u, 12u}) {
    const bool hermitian = seed == 12u;
    std::shared_ptr<DenseMatrix> a =
        hermitian ? hermitian_matrix(100, seed) : std::make_shared<DenseMatrix>(
                                                      oracle::random_matrix(100, 100, seed));
    auto op = dense_operator(a, hermitian);
    Vector b = random_vec(100, seed + 50);

    auto std_dec = arnoldi(op, b, 10, StandardOrtho::cgs2);
    auto sketch = std::make_shared<SparseSignSketch>(40, 100, 8, seed);
    auto rnd_dec = randomized_arnoldi(op, b, 10, sketch, RandomizedOrtho::rgs);
    auto cor = correct(rnd_dec, CorrectionSolver::cholesky());

    const double err =
        oracle::eigenvalue_match_error(eigenvalues(cor.hhat), eigenvalues(std_dec.g));
    CHECK(err < 1e-8);

    if (hermitian) {
      // eigenvalues of Hhat lie in the numerical range of A
      auto avals = oracle::dense_eigenvalues(*a);
      double lo = 1e300, hi = -1e300, scale = 0.0;
      for (auto z : avals) {
        lo = std::min(lo, z.real());
        hi = std::max(hi, z.real());
        scale = std::max(scale, std::abs(z));
      }
      for (auto z : eigenvalues(cor.hhat)) {
        CHECK(std::abs(z.imag()) <= 1e-9 * scale);
        CHECK(z.real() >= lo - 1e-9 * scale);
        CHECK(z.real() <= hi + 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("associated orthonormal decomposition") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(80, 80, 17));
  auto op = dense_operator(a);
  Vector b = random_vec(80, 18);
  auto sketch = std::make_shared<SparseSignSketch>(40, 80, 8, 19);
  auto dec = randomized_arnoldi(op, b, 8, sketch, RandomizedOrtho::rgs);
  auto cor = correct(dec, CorrectionSolver::cholesky());
  auto aokd = associated_orthonormal(cor);

  CHECK(orthonormality_defect(aokd.q) < 1e-12);
  // Ghat similar to Hhat
  CHECK(oracle::eigenvalue_match_error(eigenvalues(aokd.g), eigenvalues(cor.hhat)) < 1e-10);
  // residual orthogonal to the basis and decomposition identity holds
  Vector qhu = adjoint_matvec(aokd.q, aokd.next);
  CHECK(norm2(qhu) / norm2(aokd.next) < 1e-10);
  CHECK(decomposition_residual(aokd, op) < 1e-11);
}

TEST_CASE("associated orthonormal of an already-orthonormal basis") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(30, 30, 23));
  auto op = dense_operator(a);
  Vector b = random_vec(30, 24);
  auto sketch = std::make_shared<SparseSignSketch>(SparseSignSketch::identity(30));
  auto dec = randomized_arnoldi(op, b, 5, sketch, RandomizedOrtho::rcgs2);
  auto cor = correct(dec, CorrectionSolver::cholesky());
  auto aokd = associated_orthonormal(cor);
  // Q equals U up to the QR sign convention (here R has positive diagonal, so exactly)
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(aokd.q(i, j) - cor.u(i, j)) < 1e-12);
}

TEST_CASE("fom_solve is exact for A = I") {
  auto id = std::make_shared<DenseMatrix>(DenseMatrix::identity(15));
  auto op = dense_operator(id, true);
  Vector b = random_vec(15, 31);
  auto sketch = std::make_shared<SparseSignSketch>(10, 15, 4, 32);
  auto dec = randomized_arnoldi(op, b, 5, sketch, RandomizedOrtho::rgs);
  CHECK(dec.invariant_subspace_found);
  CHECK(dec.order() == 1);
  Vector sb = sketch->apply(b);  // beta = ||Omega b||
  auto cor = correct(dec, CorrectionSolver::cholesky());
  Vector x = fom_solve(cor, norm2(sb));
  for (std::size_t i = 0; i < 15; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-12);
}

TEST_CASE("fom_solve matches the dense solver on an SPD full-rank run") {
  const std::size_t n = 200;
  auto a = spd_matrix(n, 41);
  auto op = dense_operator(a, true);
  Vector b = random_vec(n, 42);
  auto sketch = std::make_shared<SparseSignSketch>(n, n, 8, 43);
  Vector sb = sketch->apply(b);
  auto dec = randomized_arnoldi_init(op, b, sketch, RandomizedOrtho::rgs);
  randomized_expand(dec, op, n);

  auto cor = correct(dec, CorrectionSolver::cholesky());
  Vector x = fom_solve(cor, norm2(sb));
  Vector x_ref = solve_dense(*a, b);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(x[i] - x_ref[i]));
    scale = std::max(scale, std::abs(x_ref[i]));
  }
  CHECK(err <= 1e-10 * scale);
}

TEST_CASE("Galerkin residual of FOM iterates") {
  const std::size_t n = 150;
  auto a = spd_matrix(n, 51);
  auto op = dense_operator(a, true);
  Vector b = random_vec(n, 52);
  auto sketch = std::make_shared<SparseSignSketch>(60, n, 8, 53);
  Vector sb = sketch->apply(b);
  auto dec = randomized_arnoldi(op, b, 20, sketch, RandomizedOrtho::rgs);
  auto cor = correct(dec, CorrectionSolver::cholesky());
  Vector x = fom_solve(cor, norm2(sb));

  Vector r = matvec(*a, x);
  for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
  Vector ur = adjoint_matvec(cor.u, r);
  CHECK(norm2(ur) / norm2(b) <= 1e-10);
}

TEST_CASE("backward-stability surrogate of the corrected decomposition") {
  auto a = std::make_shared<DenseMatrix>(oracle::random_matrix(90, 90, 61));
  auto op = dense_operator(a);
  Vector b = random_vec(90, 62);
  auto sketch = std::make_shared<SparseSignSketch>(45, 90, 8, 63);
  auto dec = randomized_arnoldi(op, b, 9, sketch, RandomizedOrtho::rgs);
  auto cor = correct(dec, CorrectionSolver::cholesky());

  // unit-residual form: A U = U Hhat + u_n c_n^H with ||u_n|| = 1
  const double nu = norm2(cor.uhat);
  Vector u_n = cor.uhat;
  scal(1.0 / nu, u_n);
  Vector c_n = cor.c;
  scal(nu, c_n);

  const std::size_t n = 90, m = 9;
  // R_res = A U - U Hhat - u_n c_n^H
  DenseMatrix r_res(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector au = matvec(*a, cor.u.col(j));
    for (std::size_t i = 0; i < m; ++i) axpy(-cor.hhat(i, j), cor.u.col(i), au);
    axpy(-std::conj(c_n[j]), u_n, au);
    std::copy(au.begin(), au.end(), r_res.col(j).begin());
  }

  // u_star = normalized (I - U U^dagger) u_n
  Vector proj = oracle::pinv_solve(cor.u, u_n);
  Vector u_star = u_n;
  for (std::size_t i = 0; i < m; ++i) axpy(-proj[i], cor.u.col(i), u_star);
  scal(1.0 / norm2(u_star), u_star);

  // E = (-R_res - u_n c_n^H + u_star c_n^H) U^dagger; bound via norms
  DenseMatrix delta(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      delta(i, j) = -r_res(i, j) + (u_star[i] - u_n[i]) * std::conj(c_n[j]);
  }
  auto sigma_u = svd_small(cor.u);
  const double u_pinv_norm = 1.0 / sigma_u.back();
  auto sigma_delta = svd_small(delta);
  const double e_norm_bound = sigma_delta.front() * u_pinv_norm;

  const double a_norm = oracle::dense_singular_values(*a).front();
  const double kappa_u = sigma_u.front() / sigma_u.back();
  CHECK(e_norm_bound <= 1e3 * kappa_u * kappa_u * unit_roundoff * a_norm);
}

TEST_CASE("ill-conditioned basis is reported") {
  // a basis with a nearly repeated column makes the Gram matrix singular
  DenseMatrix u(20, 3);
  auto g = oracle::random_matrix(20, 2, 71);
  for (std::size_t i = 0; i < 20; ++i) {
    u(i, 0) = g(i, 0);
    u(i, 1) = g(i, 1);
    u(i, 2) = g(i, 0) * (1.0 + 1e-16);
  }
  RandomizedKrylovDecomposition dec;
  dec.u = u;
  dec.su = DenseMatrix(5, 3);
  dec.h = DenseMatrix(3, 3);
  dec.next = random_vec(20, 72);
  dec.sketched_next = Vector(5, Complex{0.0, 0.0});
  dec.c = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(correct(dec, CorrectionSolver::cholesky()), Error);
}
