#include "srrk/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "srrk/error.hpp"
#include "srrk/kernels.hpp"

namespace srrk {

namespace {

// Borders the projected matrix when column j+1 joins: old residual
// coefficients become row j, the new column is filled by the caller.
DenseMatrix border_projected(const DenseMatrix& h, std::span<const Complex> c) {
  const std::size_t j = h.rows();
  DenseMatrix out(j + 1, j + 1);
  for (std::size_t col = 0; col < j; ++col) {
    for (std::size_t row = 0; row < j; ++row) out(row, col) = h(row, col);
    out(j, col) = std::conj(c[col]);
  }
  return out;
}

// CGS2 update of the QR factors of the sketched basis with a new column s.
void qr_append(DenseMatrix& p, DenseMatrix& r, std::span<const Complex> s, Counters* counters) {
  const std::size_t d = s.size();
  const std::size_t j = p.cols();
  Vector work(s.begin(), s.end());
  Vector coeff(j, Complex{0.0, 0.0});
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < j; ++k) {
      const Complex ck = dot(p.col(k), work);
      coeff[k] += ck;
      axpy(-ck, p.col(k), work);
    }
  }
  const double rho = norm2(work);
  if (rho > 0.0) scal(1.0 / rho, work);
  if (counters) counters->orth_flops += 8 * static_cast<std::int64_t>(j) * d + 2 * d;

  p.append_col(work);
  DenseMatrix r_new(j + 1, j + 1);
  for (std::size_t col = 0; col < j; ++col)
    for (std::size_t row = 0; row <= col; ++row) r_new(row, col) = r(row, col);
  for (std::size_t row = 0; row < j; ++row) r_new(row, j) = coeff[row];
  r_new(j, j) = rho;
  r = std::move(r_new);
}

// h = R^{-1} P^H s, the pseudoinverse of the sketched basis applied to s
Vector pinv_apply(const DenseMatrix& p, const DenseMatrix& r, std::span<const Complex> s,
                  Counters* counters) {
  Vector y = adjoint_matvec(p, s);
  if (counters) {
    const auto k = static_cast<std::int64_t>(p.cols());
    counters->orth_flops += 2 * k * static_cast<std::int64_t>(p.rows()) + k * k;
  }
  return solve_upper_triangular(r, y);
}

}  // namespace

OrthonormalKrylovDecomposition arnoldi_init(const LinearOperator& a, std::span<const Complex> b,
                                            StandardOrtho ortho, Counters* counters) {
  if (b.size() != a.n) throw Error(ErrorCode::dimension_mismatch, "arnoldi initial vector");
  const double nb = norm2(b);
  if (nb == 0.0) throw Error(ErrorCode::zero_initial_vector, "arnoldi");
  OrthonormalKrylovDecomposition dec;
  dec.ortho = ortho;
  dec.q = DenseMatrix(a.n, 0);
  dec.g = DenseMatrix(0, 0);
  dec.next.assign(b.begin(), b.end());
  scal(1.0 / nb, dec.next);
  dec.residual_scale = nb;  // ||b||, the beta the FOM driver needs
  if (counters) counters->inner_products += 1;
  return dec;
}

void arnoldi_expand(OrthonormalKrylovDecomposition& dec, const LinearOperator& a,
                    std::size_t steps, Counters* counters) {
  const std::size_t n = a.n;
  Vector w(n);
  for (std::size_t step = 0; step < steps; ++step) {
    if (dec.invariant_subspace_found) return;
    // column j+1 joins the basis
    dec.q.append_col(dec.next);
    dec.g = border_projected(dec.g, dec.c);
    const std::size_t k = dec.q.cols();

    a.apply(dec.q.col(k - 1), w);
    if (counters) counters->matvecs += 1;
    const double w_norm = norm2(w);

    const int passes = dec.ortho == StandardOrtho::cgs2 ? 2 : 1;
    Vector coeff(k, Complex{0.0, 0.0});
    for (int pass = 0; pass < passes; ++pass) {
      for (std::size_t i = 0; i < k; ++i) {
        const Complex ci = dot(dec.q.col(i), w);
        coeff[i] += ci;
        axpy(-ci, dec.q.col(i), w);
      }
    }
    if (counters) {
      counters->inner_products += passes * static_cast<std::int64_t>(k);
      counters->vector_updates += passes * static_cast<std::int64_t>(k);
      counters->orth_flops +=
          passes * 4 * static_cast<std::int64_t>(k) * static_cast<std::int64_t>(n) +
          2 * static_cast<std::int64_t>(n);
    }

    for (std::size_t i = 0; i < k; ++i) dec.g(i, k - 1) = coeff[i];

    const double scale = norm2(w);
    if (scale <= breakdown_threshold * w_norm) {
      dec.invariant_subspace_found = true;
      dec.next = zeros(n);
      dec.c = zeros(k);
      dec.residual_scale = 0.0;
      return;
    }
    dec.next = w;
    scal(1.0 / scale, dec.next);
    dec.residual_scale = scale;
    dec.c = zeros(k);
    dec.c[k - 1] = scale;
  }
}

OrthonormalKrylovDecomposition arnoldi(const LinearOperator& a, std::span<const Complex> b,
                                       std::size_t m, StandardOrtho ortho, Counters* counters) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "arnoldi needs m >= 1");
  auto dec = arnoldi_init(a, b, ortho, counters);
  arnoldi_expand(dec, a, m, counters);
  return dec;
}

RandomizedKrylovDecomposition randomized_arnoldi_init(
    const LinearOperator& a, std::span<const Complex> b,
    std::shared_ptr<const SparseSignSketch> sketch, RandomizedOrtho ortho, Counters* counters) {
  if (b.size() != a.n) throw Error(ErrorCode::dimension_mismatch, "initial vector");
  if (!sketch || sketch->ambient_dim() != a.n)
    throw Error(ErrorCode::dimension_mismatch, "sketch ambient dimension");

  RandomizedKrylovDecomposition dec;
  dec.sketch = std::move(sketch);
  dec.ortho = ortho;
  const std::size_t d = dec.sketch->embedded_dim();

  Vector sb = dec.sketch->apply(b);
  if (counters) counters->sketch_applies += 1;
  const double nb = norm2(sb);
  if (nb == 0.0) throw Error(ErrorCode::zero_initial_vector, "randomized arnoldi");

  dec.u = DenseMatrix(a.n, 0);
  dec.su = DenseMatrix(d, 0);
  dec.h = DenseMatrix(0, 0);
  dec.p = DenseMatrix(d, 0);
  dec.r = DenseMatrix(0, 0);
  dec.next.assign(b.begin(), b.end());
  scal(1.0 / nb, dec.next);
  dec.sketched_next = std::move(sb);
  scal(1.0 / nb, dec.sketched_next);
  dec.residual_scale = nb;  // ||Omega b||, the beta the FOM driver needs
  return dec;
}

void randomized_expand(RandomizedKrylovDecomposition& dec, const LinearOperator& a,
                       std::size_t steps, Counters* counters) {
  const std::size_t n = a.n;
  const std::size_t d = dec.sketch->embedded_dim();
  if (dec.order() + steps > d)
    throw Error(ErrorCode::sketch_too_small, "decomposition order would exceed d");

  const bool maintain_qr = dec.ortho == RandomizedOrtho::rgs || dec.has_flagged_col ||
                           dec.next_not_omega_normalized;
  if (maintain_qr && dec.p.cols() != dec.su.cols()) rebuild_sketched_qr(dec);

  const auto xi = static_cast<std::int64_t>(dec.sketch->nonzeros_per_column());
  const auto sketch_cost = 2 * xi * static_cast<std::int64_t>(n);

  Vector w(n);
  for (std::size_t step = 0; step < steps; ++step) {
    if (dec.invariant_subspace_found) return;

    dec.u.append_col(dec.next);
    dec.su.append_col(dec.sketched_next);
    if (maintain_qr) qr_append(dec.p, dec.r, dec.sketched_next, counters);
    if (dec.next_not_omega_normalized) {
      dec.has_flagged_col = true;
      dec.next_not_omega_normalized = false;
    }
    dec.h = border_projected(dec.h, dec.c);
    const std::size_t k = dec.u.cols();

    a.apply(dec.u.col(k - 1), w);
    if (counters) counters->matvecs += 1;
    Vector sw = dec.sketch->apply(w);
    if (counters) {
      counters->sketch_applies += 1;
      counters->orth_flops += sketch_cost;
    }
    const double sw_norm = norm2(sw);

    Vector coeff;
    const bool use_pinv = dec.ortho == RandomizedOrtho::rgs || dec.has_flagged_col;
    if (dec.ortho == RandomizedOrtho::rgs) {
      coeff = pinv_apply(dec.p, dec.r, sw, counters);
      for (std::size_t i = 0; i < k; ++i) axpy(-coeff[i], dec.u.col(i), w);
      if (counters) {
        counters->vector_updates += static_cast<std::int64_t>(k);
        counters->orth_flops += 2 * static_cast<std::int64_t>(k) * static_cast<std::int64_t>(n);
      }
    } else {
      // two sketched classical Gram-Schmidt passes; coefficients accumulate
      coeff = zeros(k);
      for (int pass = 0; pass < 2; ++pass) {
        Vector ci = use_pinv ? pinv_apply(dec.p, dec.r, sw, counters)
                             : adjoint_matvec(dec.su, sw);
        for (std::size_t i = 0; i < k; ++i) {
          coeff[i] += ci[i];
          axpy(-ci[i], dec.u.col(i), w);
        }
        if (counters) {
          counters->vector_updates += static_cast<std::int64_t>(k);
          counters->orth_flops +=
              2 * static_cast<std::int64_t>(k) * static_cast<std::int64_t>(n) +
              (use_pinv ? 0 : 2 * static_cast<std::int64_t>(k) * static_cast<std::int64_t>(d));
        }
        if (pass == 0) {
          sw = dec.sketch->apply(w);
          if (counters) {
            counters->sketch_applies += 1;
            counters->orth_flops += sketch_cost;
          }
        }
      }
    }

    Vector su_new = dec.sketch->apply(w);
    if (counters) {
      counters->sketch_applies += 1;
      counters->orth_flops += sketch_cost;
    }
    const double scale = norm2(su_new);

    for (std::size_t i = 0; i < k; ++i) dec.h(i, k - 1) = coeff[i];

    if (scale <= breakdown_threshold * sw_norm) {
      dec.invariant_subspace_found = true;
      dec.next = zeros(n);
      dec.sketched_next = zeros(d);
      dec.c = zeros(k);
      dec.residual_scale = 0.0;
      return;
    }

    dec.next = w;
    scal(1.0 / scale, dec.next);
    dec.sketched_next = std::move(su_new);
    scal(1.0 / scale, dec.sketched_next);
    if (counters) counters->orth_flops += 2 * static_cast<std::int64_t>(n);
    dec.residual_scale = scale;
    dec.c = zeros(k);
    dec.c[k - 1] = scale;
  }
}

RandomizedKrylovDecomposition randomized_arnoldi(const LinearOperator& a,
                                                 std::span<const Complex> b, std::size_t m,
                                                 std::shared_ptr<const SparseSignSketch> sketch,
                                                 RandomizedOrtho ortho, Counters* counters) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "randomized_arnoldi needs m >= 1");
  if (sketch && m > sketch->embedded_dim())
    throw Error(ErrorCode::sketch_too_small, "m > d");
  auto dec = randomized_arnoldi_init(a, b, std::move(sketch), ortho, counters);
  randomized_expand(dec, a, m, counters);
  return dec;
}

void rebuild_sketched_qr(RandomizedKrylovDecomposition& dec) {
  const std::size_t d = dec.su.rows();
  dec.p = DenseMatrix(d, 0);
  dec.r = DenseMatrix(0, 0);
  for (std::size_t j = 0; j < dec.su.cols(); ++j) qr_append(dec.p, dec.r, dec.su.col(j), nullptr);
}

namespace {

template <typename Dec>
double residual_impl(const Dec& dec, const LinearOperator& a, const DenseMatrix& basis,
                     const DenseMatrix& projected) {
  const std::size_t n = a.n;
  const std::size_t m = basis.cols();
  Vector au(n);
  double worst = 0.0;
  double a_scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    a.apply(basis.col(j), au);
    a_scale = std::max(a_scale, norm2(au) / std::max(norm2(basis.col(j)), 1e-300));
    for (std::size_t i = 0; i < m; ++i) axpy(-projected(i, j), basis.col(i), au);
    axpy(-std::conj(dec.c[j]), dec.next, au);
    worst = std::max(worst, norm2(au));
  }
  return worst / std::max(a_scale, 1e-300);
}

}  // namespace

double decomposition_residual(const RandomizedKrylovDecomposition& dec, const LinearOperator& a) {
  return residual_impl(dec, a, dec.u, dec.h);
}

double decomposition_residual(const OrthonormalKrylovDecomposition& dec, const LinearOperator& a) {
  return residual_impl(dec, a, dec.q, dec.g);
}

double omega_orthonormality_defect(const RandomizedKrylovDecomposition& dec,
                                   std::size_t skip_col) {
  double sum = 0.0;
  for (std::size_t i = 0; i < dec.su.cols(); ++i) {
    if (i == skip_col) continue;
    for (std::size_t j = 0; j < dec.su.cols(); ++j) {
      if (j == skip_col) continue;
      const Complex g = dot(dec.su.col(i), dec.su.col(j));
      sum += std::norm(g - (i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0}));
    }
  }
  return std::sqrt(sum);
}

double orthonormality_defect(const DenseMatrix& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < q.cols(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) {
      const Complex g = dot(q.col(i), q.col(j));
      sum += std::norm(g - (i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0}));
    }
  return std::sqrt(sum);
}

}  // namespace srrk
