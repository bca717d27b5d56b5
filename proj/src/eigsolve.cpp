#include "srrk/eigsolve.hpp"

#include <chrono>
#include <cmath>

#include "srrk/error.hpp"
#include "srrk/rng.hpp"

namespace srrk {

namespace {

// Widens ell when the selection boundary would split an eigenvalue cluster
// (relative gap < 1e-12), keeping the selected and unselected spectra
// disjoint. Appends a warning when it fires.
std::size_t widen_selection(std::span<const Complex> values, Which which, std::size_t ell,
                            std::vector<std::string>* warnings) {
  const std::size_t order = values.size();
  const auto ranked = rank_eigenvalues(values, which);
  std::size_t eff = ell;
  while (eff < order - 1) {
    const Complex a = values[ranked[eff - 1]];
    const Complex b = values[ranked[eff]];
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    if (std::abs(a - b) >= 1e-12 * scale) break;
    ++eff;
  }
  if (eff != ell && warnings)
    warnings->push_back("selection boundary split a cluster; widened ell from " +
                        std::to_string(ell) + " to " + std::to_string(eff) + " for this cycle");
  return eff;
}

}  // namespace

std::vector<double> residual_estimates(const DenseMatrix& basis, const SchurForm& sf,
                                       std::span<const Complex> c,
                                       std::span<const Complex> residual_dir, std::size_t count,
                                       bool basis_orthonormal) {
  const std::size_t m = sf.s.rows();
  count = std::min(count, m);
  const double resid_norm = norm2(residual_dir);
  const Vector cvec(c.begin(), c.end());
  std::vector<double> out(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const Vector ytri = triangular_eigenvector(sf.s, i);
    const Vector y = matvec(sf.v, ytri);
    const Complex cy = dot(cvec, y);
    double den = 1.0;
    if (!basis_orthonormal) den = norm2(matvec(basis, y));
    out[i] = den > 0.0 ? resid_norm * std::abs(cy) / den : 0.0;
  }
  return out;
}

RandomizedKrylovDecomposition compress(const CorrectedKrylovDecomposition& cor,
                                       const SchurForm& sf, std::size_t ell,
                                       RandomizedOrtho ortho) {
  if (ell > cor.order()) throw Error(ErrorCode::invalid_argument, "compress: ell > order");
  const DenseMatrix v_ell = sf.v.leading(sf.v.rows(), ell);

  RandomizedKrylovDecomposition out;
  out.u = matmul(cor.u, v_ell);
  out.su = matmul(cor.su, v_ell);
  out.h = sf.s.leading(ell, ell);
  out.c = adjoint_matvec(v_ell, cor.c);
  out.next = cor.uhat;
  out.sketched_next = cor.sketched_uhat;
  out.sketch = cor.sketch;
  out.ortho = ortho;
  out.next_not_omega_normalized = true;
  return out;
}

RandomizedKrylovDecomposition compress(const RandomizedKrylovDecomposition& dec,
                                       const SchurForm& sf, std::size_t ell) {
  if (ell > dec.order()) throw Error(ErrorCode::invalid_argument, "compress: ell > order");
  const DenseMatrix v_ell = sf.v.leading(sf.v.rows(), ell);

  RandomizedKrylovDecomposition out;
  out.u = matmul(dec.u, v_ell);
  out.su = matmul(dec.su, v_ell);
  out.h = sf.s.leading(ell, ell);
  out.c = adjoint_matvec(v_ell, dec.c);
  out.next = dec.next;
  out.sketched_next = dec.sketched_next;
  out.sketch = dec.sketch;
  out.ortho = dec.ortho;
  return out;
}

OrthonormalKrylovDecomposition compress(const OrthonormalKrylovDecomposition& dec,
                                        const SchurForm& sf, std::size_t ell) {
  if (ell > dec.order()) throw Error(ErrorCode::invalid_argument, "compress: ell > order");
  const DenseMatrix v_ell = sf.v.leading(sf.v.rows(), ell);

  OrthonormalKrylovDecomposition out;
  out.q = matmul(dec.q, v_ell);
  out.g = sf.s.leading(ell, ell);
  out.c = adjoint_matvec(v_ell, dec.c);
  out.next = dec.next;
  out.ortho = dec.ortho;
  return out;
}

void sketched_reorthogonalize(RandomizedKrylovDecomposition& dec, std::size_t index) {
  const std::size_t m = dec.order();
  if (index >= m) throw Error(ErrorCode::invalid_argument, "reorthogonalize index");
  const std::size_t d = dec.su.rows();

  // (Omega U_lead)^dagger applied to the flagged sketched column; the columns
  // past `index` are already Omega-orthogonal to it and drop out
  DenseMatrix su_lead(d, index);
  for (std::size_t j = 0; j < index; ++j)
    std::copy(dec.su.col(j).begin(), dec.su.col(j).end(), su_lead.col(j).begin());
  QrResult qr = householder_qr(su_lead);
  Vector proj = adjoint_matvec(qr.q, dec.su.col(index));
  Vector coeff = solve_upper_triangular(qr.r, proj);

  Vector u_new(dec.u.col(index).begin(), dec.u.col(index).end());
  Vector s_new(dec.su.col(index).begin(), dec.su.col(index).end());
  for (std::size_t j = 0; j < index; ++j) {
    axpy(-coeff[j], dec.u.col(j), u_new);
    axpy(-coeff[j], dec.su.col(j), s_new);
  }
  const double eta = norm2(s_new);
  if (eta <= breakdown_threshold)
    throw Error(ErrorCode::no_convergence, "sketched reorthogonalization underflow");
  scal(1.0 / eta, u_new);
  scal(1.0 / eta, s_new);
  std::copy(u_new.begin(), u_new.end(), dec.u.col(index).begin());
  std::copy(s_new.begin(), s_new.end(), dec.su.col(index).begin());

  // old column = eta * new + U_lead coeff; fold the change of basis
  // T = I + (t - e_index) e_index^H, t = [coeff; eta; 0], into H and c:
  // H <- T H T^{-1}, c^H <- c^H T^{-1}
  DenseMatrix& h = dec.h;
  for (std::size_t jcol = 0; jcol < m; ++jcol) {
    const Complex hij = h(index, jcol);
    for (std::size_t i = 0; i < index; ++i) h(i, jcol) += coeff[i] * hij;
    h(index, jcol) = eta * hij;
  }
  for (std::size_t i = 0; i < m; ++i) {
    Complex v = h(i, index) / eta;
    for (std::size_t k = 0; k < index; ++k) v -= h(i, k) * coeff[k] / eta;
    h(i, index) = v;
  }
  Complex ci = dec.c[index] / eta;
  for (std::size_t k = 0; k < index; ++k) ci -= dec.c[k] * std::conj(coeff[k]) / eta;
  dec.c[index] = ci;

  dec.has_flagged_col = false;
  if (dec.p.cols() != 0) rebuild_sketched_qr(dec);
}

EigResult krylov_schur(const LinearOperator& a, const EigConfig& cfg,
                       std::optional<Vector> initial) {
  const bool randomized = cfg.variant != EigVariant::ks;
  if (cfg.k < 1 || cfg.k > cfg.ell || cfg.ell >= cfg.m)
    throw Error(ErrorCode::invalid_argument, "need 1 <= k <= ell < m");
  if (randomized && cfg.m > cfg.d)
    throw Error(ErrorCode::invalid_argument, "need m <= d for randomized variants");
  if (a.n < cfg.m) throw Error(ErrorCode::invalid_argument, "operator smaller than m");
  if (cfg.max_cycles < 1) throw Error(ErrorCode::invalid_argument, "max_cycles >= 1");

  Vector b;
  if (initial) {
    if (initial->size() != a.n) throw Error(ErrorCode::dimension_mismatch, "initial vector");
    b = std::move(*initial);
  } else {
    Rng rng(cfg.seed);
    b = gaussian_vector(a.n, rng);
  }

  Counters counters;
  const auto t0 = std::chrono::steady_clock::now();
  EigTrace trace;

  std::shared_ptr<const SparseSignSketch> sketch;
  RandomizedKrylovDecomposition rdec;
  OrthonormalKrylovDecomposition sdec;
  if (randomized) {
    sketch = std::make_shared<SparseSignSketch>(cfg.d, a.n, cfg.xi, cfg.sketch_seed);
    rdec = randomized_arnoldi(a, b, cfg.m, sketch, cfg.ortho, &counters);
  } else {
    sdec = arnoldi(a, b, cfg.m, cfg.standard_ortho, &counters);
  }

  SchurForm last_sf;
  std::vector<double> last_res;
  DenseMatrix last_basis;
  bool converged = false;
  std::size_t cycle = 0;

  while (cycle < cfg.max_cycles) {
    ++cycle;
    const std::size_t order = randomized ? rdec.order() : sdec.order();
    if (order < 1) break;

    CorrectedKrylovDecomposition cor;
    const DenseMatrix* heff = nullptr;
    if (cfg.variant == EigVariant::srr_ks) {
      cor = correct(rdec, cfg.solver, &counters);
      heff = &cor.hhat;
    } else if (cfg.variant == EigVariant::rks) {
      heff = &rdec.h;
    } else {
      heff = &sdec.g;
    }

    SchurForm sf = schur(*heff);
    std::size_t ell_eff = std::min(cfg.ell, order >= 2 ? order - 1 : order);
    if (order >= 2)
      ell_eff = widen_selection(diagonal(sf.s), cfg.which, ell_eff, &trace.warnings);
    reorder_selected(sf, cfg.which, ell_eff);

    std::vector<double> res;
    if (cfg.variant == EigVariant::srr_ks)
      res = residual_estimates(cor.u, sf, cor.c, cor.uhat, cfg.k, false);
    else if (cfg.variant == EigVariant::rks)
      res = residual_estimates(rdec.u, sf, rdec.c, rdec.next, cfg.k, false);
    else
      res = residual_estimates(sdec.q, sf, sdec.c, sdec.next, cfg.k, true);

    EigCycleRow row;
    row.cycle = cycle;
    {
      const auto vals = diagonal(sf.s);
      row.ritz.assign(vals.begin(), vals.begin() + std::min(cfg.k, vals.size()));
    }
    row.residuals = res;
    for (double r : res)
      if (r <= cfg.tol) ++row.converged_count;
    if (randomized && cfg.trace_conditioning) {
      const DenseMatrix& u = cfg.variant == EigVariant::srr_ks ? cor.u : rdec.u;
      row.kappa_u = condition_number(u);
      QrResult qr = householder_qr(u);
      const EmbeddingQuality q = measure_distortion(*sketch, qr.q);
      row.epsilon = q.epsilon;
      row.kappa_eps = q.kappa_eps;
    }

    converged = cfg.check_convergence && res.size() >= cfg.k && row.converged_count >= cfg.k;

    last_sf = sf;
    last_res = res;
    last_basis = cfg.variant == EigVariant::ks ? sdec.q
               : cfg.variant == EigVariant::srr_ks ? cor.u
                                                   : rdec.u;

    counters.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.totals = counters;
    trace.rows.push_back(std::move(row));

    if (converged) break;
    if (counters.matvecs >= static_cast<std::int64_t>(cfg.max_matvecs)) {
      trace.warnings.push_back("matvec budget exhausted");
      break;
    }
    const bool broke_down =
        randomized ? rdec.invariant_subspace_found : sdec.invariant_subspace_found;
    if (broke_down) {
      trace.warnings.push_back("exact invariant subspace found before convergence");
      break;
    }
    if (cycle >= cfg.max_cycles) {
      if (cfg.check_convergence) trace.warnings.push_back("cycle budget exhausted");
      break;
    }

    if (cfg.variant == EigVariant::srr_ks) {
      rdec = compress(cor, sf, ell_eff, cfg.ortho);
      randomized_expand(rdec, a, cfg.m - ell_eff, &counters);
      if (cfg.reorthogonalize && !rdec.invariant_subspace_found && rdec.order() == cfg.m)
        sketched_reorthogonalize(rdec, ell_eff);
    } else if (cfg.variant == EigVariant::rks) {
      rdec = compress(rdec, sf, ell_eff);
      randomized_expand(rdec, a, cfg.m - ell_eff, &counters);
    } else {
      sdec = compress(sdec, sf, ell_eff);
      arnoldi_expand(sdec, a, cfg.m - ell_eff, &counters);
    }
  }

  EigResult out;
  const std::size_t kk = std::min(cfg.k, last_sf.s.rows());
  {
    const auto vals = diagonal(last_sf.s);
    out.ritz.values.assign(vals.begin(), vals.begin() + kk);
  }
  if (kk > 0) {
    const DenseMatrix v_k = last_sf.v.leading(last_sf.v.rows(), kk);
    out.ritz.basis = matmul(last_basis, v_k);
  }
  out.ritz.residuals.assign(last_res.begin(), last_res.begin() + std::min(kk, last_res.size()));
  out.ritz.cycles = cycle;
  out.ritz.matvecs = counters.matvecs;
  out.ritz.converged = converged;
  out.counters = counters;
  out.trace = std::move(trace);
  return out;
}

}  // namespace srrk
