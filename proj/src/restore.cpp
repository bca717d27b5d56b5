#include "srrk/restore.hpp"

#include <cmath>

#include "srrk/error.hpp"
#include "srrk/kernels.hpp"

namespace srrk {

namespace {

// upper triangle of U^H U, mirrored down
DenseMatrix gram_matrix(const DenseMatrix& u, Counters* counters) {
  const std::size_t m = u.cols();
  DenseMatrix g(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const Complex v = dot(u.col(i), u.col(j));
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  if (counters) {
    const auto m64 = static_cast<std::int64_t>(m);
    const auto n64 = static_cast<std::int64_t>(u.rows());
    counters->gram_flops += m64 * (m64 + 1) * n64;
    counters->inner_products += m64 * (m64 + 1) / 2;
  }
  return g;
}

}  // namespace

CorrectedKrylovDecomposition correct(const RandomizedKrylovDecomposition& dec,
                                     const CorrectionSolver& solver, Counters* counters) {
  const std::size_t m = dec.order();
  const std::size_t n = dec.u.rows();
  if (m == 0) throw Error(ErrorCode::invalid_argument, "correct on an empty decomposition");

  const std::int64_t corr_before = counters ? counters->correction_flops : 0;
  Vector h;  // U^dagger u_{m+1}
  CorrectionReport report;
  report.method = solver.method;

  if (solver.method == CorrectionSolver::Method::cholesky_gram) {
    DenseMatrix g = gram_matrix(dec.u, counters);
    DenseMatrix l;
    try {
      l = cholesky(g);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::not_positive_definite)
        throw Error(ErrorCode::ill_conditioned_basis,
                    "Gram matrix not numerically positive definite; rebuild with larger d");
      throw;
    }
    Vector rhs = adjoint_matvec(dec.u, dec.next);  // U^H u_{m+1}
    Vector y = solve_lower_triangular(l, rhs);
    // L^H x = y via conjugated back substitution
    DenseMatrix lh = adjoint(l);
    h = solve_upper_triangular(lh, y);
    if (counters) {
      const auto m64 = static_cast<std::int64_t>(m);
      const auto n64 = static_cast<std::int64_t>(n);
      counters->inner_products += m64;
      counters->correction_flops += m64 * (m64 + 1) * n64  // Gram
                                    + m64 * m64 * m64 / 3  // Cholesky
                                    + 2 * m64 * n64        // U^H u
                                    + 2 * m64 * m64;       // two triangular solves
    }
  } else {
    LsqrOperator op;
    op.rows = n;
    op.cols = m;
    op.apply = [&dec](std::span<const Complex> x, std::span<Complex> y) {
      Vector t = matvec(dec.u, x);
      std::copy(t.begin(), t.end(), y.begin());
    };
    op.apply_adjoint = [&dec](std::span<const Complex> x, std::span<Complex> y) {
      Vector t = adjoint_matvec(dec.u, x);
      std::copy(t.begin(), t.end(), y.begin());
    };
    LsqrResult res = lsqr(op, dec.next, solver.lsqr_tol, solver.lsqr_maxit);
    h = std::move(res.x);
    report.iterations = res.iterations;
    report.inner_converged = res.converged;
    if (counters) {
      const auto iters = static_cast<std::int64_t>(res.iterations);
      counters->inner_solver_iters += iters;
      counters->correction_flops += 4 * iters * static_cast<std::int64_t>(m) *
                                    static_cast<std::int64_t>(n);
    }
  }

  CorrectedKrylovDecomposition cor;
  cor.u = dec.u;
  cor.su = dec.su;
  cor.sketch = dec.sketch;
  cor.c = dec.c;
  cor.solver_report = report;

  // uhat = u_{m+1} - U h, sketched image updated consistently
  cor.uhat = dec.next;
  for (std::size_t i = 0; i < m; ++i) axpy(-h[i], dec.u.col(i), cor.uhat);
  cor.sketched_uhat = dec.sketched_next;
  for (std::size_t i = 0; i < m; ++i) axpy(-h[i], dec.su.col(i), cor.sketched_uhat);
  if (counters) {
    counters->vector_updates += static_cast<std::int64_t>(m);
    counters->correction_flops += 2 * static_cast<std::int64_t>(m) * static_cast<std::int64_t>(n);
  }

  // Hhat = H + h c^H (rank-1; for c = h_{m+1,m} e_m only the last column moves)
  cor.hhat = dec.h;
  for (std::size_t j = 0; j < m; ++j) {
    const Complex cj = std::conj(dec.c[j]);
    if (cj == Complex{0.0, 0.0}) continue;
    for (std::size_t i = 0; i < m; ++i) cor.hhat(i, j) += h[i] * cj;
  }
  cor.correction = std::move(h);

  if (counters) counters->orth_flops += counters->correction_flops - corr_before;
  return cor;
}

OrthonormalKrylovDecomposition associated_orthonormal(const CorrectedKrylovDecomposition& cor) {
  const std::size_t m = cor.order();
  QrResult qr = householder_qr(cor.u);

  // rank check: a collapsed diagonal entry of R means U lost full rank
  double rmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) rmax = std::max(rmax, std::abs(qr.r(i, i)));
  for (std::size_t i = 0; i < m; ++i)
    if (std::abs(qr.r(i, i)) <= m * unit_roundoff * rmax)
      throw Error(ErrorCode::rank_deficient_basis, "basis is numerically rank deficient");

  // Ghat = R Hhat R^{-1}: solve Ghat R = R Hhat column by column
  const DenseMatrix rh = matmul(qr.r, cor.hhat);
  DenseMatrix ghat(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    // column j of Ghat R is rh(:,j); forward-substitute across columns
    Vector col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = rh(i, j);
    for (std::size_t k = 0; k < j; ++k) axpy(-qr.r(k, j), ghat.col(k), col);
    scal(1.0 / qr.r(j, j), col);
    std::copy(col.begin(), col.end(), ghat.col(j).begin());
  }

  // chat = R^{-H} c
  DenseMatrix rhh = adjoint(qr.r);
  Vector chat = solve_lower_triangular(rhh, cor.c);

  OrthonormalKrylovDecomposition out;
  out.q = std::move(qr.q);
  out.g = std::move(ghat);
  out.next = cor.uhat;
  out.c = std::move(chat);
  out.residual_scale = norm2(cor.uhat);
  return out;
}

Vector fom_solve(const CorrectedKrylovDecomposition& cor, Complex beta, Counters* counters) {
  const std::size_t m = cor.order();
  Vector e1 = unit_vector(m, 0);
  Vector y;
  try {
    y = solve_dense(cor.hhat, e1);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::singular_matrix)
      throw Error(ErrorCode::singular_projected_matrix, "FOM breakdown: Hhat is singular");
    throw;
  }
  Vector x = zeros(cor.u.rows());
  for (std::size_t i = 0; i < m; ++i) axpy(beta * y[i], cor.u.col(i), x);
  if (counters) counters->vector_updates += static_cast<std::int64_t>(m);
  return x;
}

double orthogonality_defect(const CorrectedKrylovDecomposition& cor) {
  Vector g = adjoint_matvec(cor.u, cor.uhat);
  const double nu = norm2(cor.uhat);
  if (nu == 0.0) return 0.0;
  return norm2(g) / nu;
}

}  // namespace srrk
