#include "srrk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srrk/error.hpp"

namespace srrk {

namespace {

// phase(z) = z/|z|, with phase(0) = 1
Complex phase(Complex z) {
  const double a = std::abs(z);
  return a == 0.0 ? Complex{1.0, 0.0} : z / a;
}

struct Householder {
  Vector v;       // reflector direction, I - beta v v^H
  double beta;    // 2 / ||v||^2, or 0 for the identity
  Complex alpha;  // value the pivot maps to
};

// Reflector sending x to alpha*e1 with alpha = -phase(x0)*||x||.
Householder make_householder(std::span<const Complex> x) {
  Householder h;
  h.v.assign(x.begin(), x.end());
  const double nx = norm2(x);
  if (nx == 0.0) {
    h.beta = 0.0;
    h.alpha = 0.0;
    return h;
  }
  const Complex ph = phase(x[0]);
  h.alpha = -ph * nx;
  h.v[0] -= h.alpha;
  const double nv = norm2(h.v);
  if (nv == 0.0) {
    h.beta = 0.0;  // x already a multiple of e1 with the right phase
    h.alpha = x[0];
    return h;
  }
  h.beta = 2.0 / (nv * nv);
  return h;
}

// y -= beta * v * (v^H y) on the subrange [offset, offset+v.size())
void apply_householder(const Householder& h, std::span<Complex> y, std::size_t offset) {
  if (h.beta == 0.0) return;
  Complex c{0.0, 0.0};
  for (std::size_t i = 0; i < h.v.size(); ++i) c += std::conj(h.v[i]) * y[offset + i];
  c *= h.beta;
  for (std::size_t i = 0; i < h.v.size(); ++i) y[offset + i] -= c * h.v[i];
}

struct Givens {
  double c;   // real cosine
  Complex s;  // complex sine
};

// [c s; -conj(s) c] [f; g] = [r; 0]
Givens make_givens(Complex f, Complex g) {
  if (g == Complex{0.0, 0.0}) return {1.0, Complex{0.0, 0.0}};
  if (f == Complex{0.0, 0.0}) return {0.0, phase(std::conj(g))};
  const double af = std::abs(f);
  const double d = std::hypot(af, std::abs(g));
  return {af / d, phase(f) * std::conj(g) / d};
}

// rows p, p+1 of T, columns [j0, j1)
void rotate_rows(DenseMatrix& t, std::size_t p, const Givens& g, std::size_t j0, std::size_t j1) {
  for (std::size_t j = j0; j < j1; ++j) {
    const Complex a = t(p, j);
    const Complex b = t(p + 1, j);
    t(p, j) = g.c * a + g.s * b;
    t(p + 1, j) = -std::conj(g.s) * a + g.c * b;
  }
}

// columns p, p+1 of T (right-multiplication by G^H), rows [i0, i1)
void rotate_cols(DenseMatrix& t, std::size_t p, const Givens& g, std::size_t i0, std::size_t i1) {
  for (std::size_t i = i0; i < i1; ++i) {
    const Complex a = t(i, p);
    const Complex b = t(i, p + 1);
    t(i, p) = g.c * a + std::conj(g.s) * b;
    t(i, p + 1) = -g.s * a + g.c * b;
  }
}

// Householder similarity reduction to upper Hessenberg, accumulating V.
void hessenberg_reduce(DenseMatrix& t, DenseMatrix& v) {
  const std::size_t n = t.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Vector x(n - k - 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = t(k + 1 + i, k);
    Householder h = make_householder(x);
    if (h.beta == 0.0) continue;
    // left: rows k+1..n-1 of each column
    for (std::size_t j = k; j < n; ++j) apply_householder(h, t.col(j), k + 1);
    // right: columns k+1..n-1 of each row; work on the adjoint action per row
    for (std::size_t i = 0; i < n; ++i) {
      Complex c{0.0, 0.0};
      for (std::size_t j = 0; j < h.v.size(); ++j) c += t(i, k + 1 + j) * h.v[j];
      c *= h.beta;
      for (std::size_t j = 0; j < h.v.size(); ++j) t(i, k + 1 + j) -= c * std::conj(h.v[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex c{0.0, 0.0};
      for (std::size_t j = 0; j < h.v.size(); ++j) c += v(i, k + 1 + j) * h.v[j];
      c *= h.beta;
      for (std::size_t j = 0; j < h.v.size(); ++j) v(i, k + 1 + j) -= c * std::conj(h.v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) t(i, k) = 0.0;
    t(k + 1, k) = h.alpha;
  }
}

// Wilkinson shift: eigenvalue of the trailing 2x2 closest to its (2,2) entry.
Complex wilkinson_shift(const DenseMatrix& t, std::size_t hi) {
  const Complex a = t(hi - 1, hi - 1);
  const Complex b = t(hi - 1, hi);
  const Complex c = t(hi, hi - 1);
  const Complex d = t(hi, hi);
  const Complex p = 0.5 * (a - d);
  Complex s = std::sqrt(p * p + b * c);
  if (p.real() * s.real() + p.imag() * s.imag() < 0.0) s = -s;
  const Complex den = p + s;
  if (den == Complex{0.0, 0.0}) return d;
  return d - b * c / den;
}

}  // namespace

QrResult householder_qr(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows < cols) throw Error(ErrorCode::invalid_argument, "householder_qr needs rows >= cols");

  DenseMatrix r = m;
  std::vector<Householder> reflectors;
  reflectors.reserve(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    Vector x(rows - k);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = r(k + i, k);
    Householder h = make_householder(x);
    for (std::size_t j = k; j < cols; ++j) apply_householder(h, r.col(j), k);
    r(k, k) = h.alpha;
    for (std::size_t i = k + 1; i < rows; ++i) r(i, k) = 0.0;
    reflectors.push_back(std::move(h));
  }

  // thin Q: apply reflectors to the leading columns of I, last to first
  DenseMatrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) q(j, j) = 1.0;
  for (std::size_t j = 0; j < cols; ++j) {
    auto col = q.col(j);
    for (std::size_t k = cols; k-- > 0;) apply_householder(reflectors[k], col, k);
  }

  // sign convention: nonnegative real diagonal of R
  for (std::size_t k = 0; k < cols; ++k) {
    const Complex d = r(k, k);
    if (d.imag() == 0.0 && d.real() >= 0.0) continue;
    const Complex ph = phase(d);
    for (std::size_t j = k; j < cols; ++j) r(k, j) *= std::conj(ph);
    for (std::size_t i = 0; i < rows; ++i) q(i, k) *= ph;
  }
  DenseMatrix r_square(cols, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i <= j; ++i) r_square(i, j) = r(i, j);
  return {std::move(q), std::move(r_square)};
}

DenseMatrix cholesky(const DenseMatrix& gram) {
  if (gram.rows() != gram.cols()) throw Error(ErrorCode::non_square, "cholesky");
  const std::size_t n = gram.rows();
  DenseMatrix g(n, n);
  double trace = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) g(i, j) = 0.5 * (gram(i, j) + std::conj(gram(j, i)));
    trace += g(j, j).real();
  }
  const double pivot_floor = static_cast<double>(n) * unit_roundoff * trace;

  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex diag = g(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
    const double d = diag.real();
    if (d <= pivot_floor)
      throw Error(ErrorCode::not_positive_definite,
                  "Cholesky pivot below threshold at column " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

SchurForm schur(const DenseMatrix& h) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::non_square, "schur");
  const std::size_t n = h.rows();
  SchurForm out;
  out.v = DenseMatrix::identity(n);
  out.s = h;
  if (n <= 1) return out;

  DenseMatrix& t = out.s;
  DenseMatrix& v = out.v;
  hessenberg_reduce(t, v);

  const double smlnum = std::numeric_limits<double>::min() / unit_roundoff;
  std::size_t hi = n - 1;
  std::size_t iters_since_deflation = 0;
  const std::size_t max_iters_per_eig = 30;

  while (hi > 0) {
    // deflate negligible subdiagonals
    for (std::size_t i = hi; i >= 1; --i) {
      double thresh = unit_roundoff * (std::abs(t(i - 1, i - 1)) + std::abs(t(i, i)));
      if (thresh < smlnum) thresh = smlnum;
      if (std::abs(t(i, i - 1)) <= thresh) t(i, i - 1) = 0.0;
    }
    if (t(hi, hi - 1) == Complex{0.0, 0.0}) {
      --hi;
      iters_since_deflation = 0;
      continue;
    }
    std::size_t lo = hi;
    while (lo > 0 && t(lo, lo - 1) != Complex{0.0, 0.0}) --lo;

    if (++iters_since_deflation > max_iters_per_eig)
      throw Error(ErrorCode::no_convergence, "shifted QR exceeded the sweep cap");

    Complex mu;
    if (iters_since_deflation % 10 == 0) {
      mu = t(hi, hi) + 0.75 * std::abs(t(hi, hi - 1));  // exceptional shift
    } else {
      mu = wilkinson_shift(t, hi);
    }

    // implicit single-shift sweep with bulge chasing
    Complex x = t(lo, lo) - mu;
    Complex y = t(lo + 1, lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = make_givens(x, y);
      const std::size_t row_start = k > lo ? k - 1 : lo;
      rotate_rows(t, k, g, row_start, n);
      rotate_cols(t, k, g, 0, std::min(hi, k + 2) + 1);
      rotate_cols(v, k, g, 0, n);
      if (k + 1 < hi) {
        x = t(k + 1, k);
        y = t(k + 2, k);
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) t(i, j) = 0.0;
  return out;
}

std::vector<std::size_t> rank_eigenvalues(std::span<const Complex> values, Which which) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    switch (which) {
      case Which::largest_magnitude: return -std::abs(values[i]);
      case Which::largest_real: return -values[i].real();
      case Which::smallest_real: return values[i].real();
    }
    return 0.0;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  return order;
}

void swap_adjacent_eigenvalues(DenseMatrix& s, DenseMatrix& v, std::size_t p) {
  const std::size_t n = s.rows();
  const Givens g = make_givens(s(p, p + 1), s(p + 1, p + 1) - s(p, p));
  rotate_rows(s, p, g, 0, n);
  rotate_cols(s, p, g, 0, n);
  rotate_cols(v, p, g, 0, v.rows());
  s(p + 1, p) = 0.0;
}

void reorder_selected(SchurForm& sf, Which which, std::size_t ell) {
  const std::size_t n = sf.s.rows();
  if (ell > n) throw Error(ErrorCode::invalid_argument, "reorder_selected: ell > m");
  const std::vector<Complex> vals = diagonal(sf.s);
  const std::vector<std::size_t> ranked = rank_eigenvalues(vals, which);

  // perm[i] = original position of the eigenvalue currently at diagonal i
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t target = 0; target < ell; ++target) {
    const std::size_t want = ranked[target];
    std::size_t pos = target;
    while (pos < n && perm[pos] != want) ++pos;
    for (std::size_t i = pos; i > target; --i) {
      swap_adjacent_eigenvalues(sf.s, sf.v, i - 1);
      std::swap(perm[i - 1], perm[i]);
    }
  }
  sf.selected = ell;
}

SchurForm schur_ordered(const DenseMatrix& h, Which which, std::size_t ell) {
  SchurForm sf = schur(h);
  reorder_selected(sf, which, ell);
  return sf;
}

DenseMatrix triangular_function(const DenseMatrix& t_in, const ScalarFunction& f,
                                int* perturbations) {
  if (t_in.rows() != t_in.cols()) throw Error(ErrorCode::non_square, "triangular_function");
  const std::size_t n = t_in.rows();
  DenseMatrix t = t_in;
  const double delta = 1e-8 * frobenius_norm(t);
  int moved = 0;

  // separate clustered diagonal entries before running the recurrence;
  // the later entry of each colliding pair is nudged by delta
  bool changed = true;
  int rounds = 0;
  while (changed && rounds++ < 8) {
    changed = false;
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (std::abs(t(i, i) - t(j, j)) < delta && delta > 0.0) {
          t(j, j) += delta;
          ++moved;
          changed = true;
        }
  }
  if (perturbations) *perturbations = moved;

  for (std::size_t i = 0; i < n; ++i)
    if (!f.defined_at(t(i, i)))
      throw Error(ErrorCode::domain_error,
                  "function " + f.name + " undefined at a diagonal entry");

  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = f.eval(t(i, i));
  for (std::size_t off = 1; off < n; ++off) {
    for (std::size_t i = 0; i + off < n; ++i) {
      const std::size_t j = i + off;
      Complex num = t(i, j) * (out(i, i) - out(j, j));
      for (std::size_t k = i + 1; k < j; ++k) num += out(i, k) * t(k, j) - t(i, k) * out(k, j);
      const Complex den = t(i, i) - t(j, j);
      if (std::abs(den) == 0.0) {
        if (std::abs(num) == 0.0) {
          out(i, j) = 0.0;  // equal eigenvalues with equal f-values commute
          continue;
        }
        throw Error(ErrorCode::singular_divisor, "coincident diagonal entries in Parlett");
      }
      out(i, j) = num / den;
    }
  }
  return out;
}

Vector triangular_eigenvector(const DenseMatrix& s, std::size_t position) {
  const std::size_t n = s.rows();
  if (position >= n) throw Error(ErrorCode::invalid_argument, "triangular_eigenvector");
  Vector y(n, Complex{0.0, 0.0});
  y[position] = 1.0;
  const Complex lambda = s(position, position);
  const double floor = unit_roundoff * std::max(frobenius_norm(s), 1e-300);
  for (std::size_t ii = position; ii-- > 0;) {
    Complex rhs = -s(ii, position);
    for (std::size_t k = ii + 1; k < position; ++k) rhs -= s(ii, k) * y[k];
    Complex den = s(ii, ii) - lambda;
    if (std::abs(den) < floor) den = floor;
    y[ii] = rhs / den;
  }
  const double ny = norm2(y);
  if (ny > 0.0) scal(1.0 / ny, y);
  return y;
}

LsqrResult lsqr(const LsqrOperator& op, std::span<const Complex> rhs, double tol,
                std::size_t maxit) {
  if (tol <= 0.0 || tol >= 1.0) throw Error(ErrorCode::invalid_argument, "lsqr tol in (0,1)");
  if (rhs.size() != op.rows) throw Error(ErrorCode::dimension_mismatch, "lsqr rhs");

  LsqrResult res;
  res.x = zeros(op.cols);

  Vector u(rhs.begin(), rhs.end());
  double beta = norm2(u);
  if (beta == 0.0) {
    res.converged = true;
    return res;
  }
  scal(1.0 / beta, u);

  Vector v(op.cols);
  op.apply_adjoint(u, v);
  double alpha = norm2(v);
  if (alpha == 0.0) {
    res.converged = true;  // rhs orthogonal to the range; x = 0 is optimal
    return res;
  }
  scal(1.0 / alpha, v);

  Vector w = v;
  double phibar = beta;
  double rhobar = alpha;
  double anorm2 = alpha * alpha;

  Vector tmp_rows(op.rows);
  Vector tmp_cols(op.cols);

  for (std::size_t it = 1; it <= maxit; ++it) {
    res.iterations = it;

    // bidiagonalization step
    op.apply(v, tmp_rows);
    for (std::size_t i = 0; i < op.rows; ++i) u[i] = tmp_rows[i] - alpha * u[i];
    beta = norm2(u);
    if (beta > 0.0) scal(1.0 / beta, u);
    anorm2 += beta * beta;

    op.apply_adjoint(u, tmp_cols);
    for (std::size_t i = 0; i < op.cols; ++i) v[i] = tmp_cols[i] - beta * v[i];
    alpha = norm2(v);
    if (alpha > 0.0) scal(1.0 / alpha, v);
    anorm2 += alpha * alpha;

    // plane rotation updating the solution
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    const double t1 = phi / rho;
    const double t2 = -theta / rho;
    for (std::size_t i = 0; i < op.cols; ++i) {
      res.x[i] += t1 * w[i];
      w[i] = v[i] + t2 * w[i];
    }

    // ||A^H r|| = phibar * alpha * |c|, ||r|| = phibar, ||A|| ~ sqrt(anorm2)
    const double arnorm = phibar * alpha * std::abs(c);
    const double anorm = std::sqrt(anorm2);
    if (arnorm <= tol * anorm * phibar || phibar <= 1e-300) {
      res.converged = true;
      return res;
    }
    if (alpha == 0.0 || beta == 0.0) {
      res.converged = true;
      return res;
    }
  }
  return res;  // max iterations, best iterate flagged
}

std::vector<double> svd_small(const DenseMatrix& m) {
  if (m.rows() < m.cols()) throw Error(ErrorCode::invalid_argument, "svd_small rows >= cols");
  DenseMatrix w = m;
  const std::size_t k = w.cols();
  const double tol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        auto cp = w.col(p);
        auto cq = w.col(q);
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) {
          a += std::norm(cp[i]);
          b += std::norm(cq[i]);
        }
        const Complex c = dot(cp, cq);
        const double ac = std::abs(c);
        if (a == 0.0 || b == 0.0 || ac <= tol * std::sqrt(a * b)) continue;
        off = std::max(off, ac / std::sqrt(a * b));

        const Complex e = phase(c);
        const double tau = (b - a) / (2.0 * ac);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double cs = 1.0 / std::hypot(1.0, t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < w.rows(); ++i) {
          const Complex wp = cp[i];
          const Complex wq = cq[i] * std::conj(e);  // phase c real
          cp[i] = cs * wp - sn * wq;
          cq[i] = sn * wp + cs * wq;
        }
      }
    }
    if (off <= tol) break;
  }
  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = norm2(w.col(j));
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  return sigma;
}

double condition_number(const DenseMatrix& m) {
  const std::vector<double> s = svd_small(m);
  if (s.empty() || s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

Vector solve_dense(const DenseMatrix& a, std::span<const Complex> b) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::non_square, "solve_dense");
  if (a.rows() != b.size()) throw Error(ErrorCode::dimension_mismatch, "solve_dense rhs");
  const std::size_t n = a.rows();
  DenseMatrix lu = a;
  Vector x(b.begin(), b.end());
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), std::size_t{0});
  const double floor = unit_roundoff * frobenius_norm(a);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        p = i;
      }
    if (best <= floor)
      throw Error(ErrorCode::singular_matrix, "pivot below threshold in dense solve");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(x[k], x[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

Vector solve_upper_triangular(const DenseMatrix& r, std::span<const Complex> b) {
  const std::size_t n = r.rows();
  if (b.size() != n) throw Error(ErrorCode::dimension_mismatch, "solve_upper_triangular");
  Vector x(b.begin(), b.end());
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= r(i, j) * x[j];
    if (r(i, i) == Complex{0.0, 0.0})
      throw Error(ErrorCode::singular_matrix, "zero diagonal in triangular solve");
    x[i] /= r(i, i);
  }
  return x;
}

Vector solve_lower_triangular(const DenseMatrix& l, std::span<const Complex> b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw Error(ErrorCode::dimension_mismatch, "solve_lower_triangular");
  Vector x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) x[i] -= l(i, j) * x[j];
    if (l(i, i) == Complex{0.0, 0.0})
      throw Error(ErrorCode::singular_matrix, "zero diagonal in triangular solve");
    x[i] /= l(i, i);
  }
  return x;
}

}  // namespace srrk
