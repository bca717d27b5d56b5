#include "srrk/sketch.hpp"

#include <cmath>

#include "srrk/error.hpp"
#include "srrk/kernels.hpp"
#include "srrk/rng.hpp"

namespace srrk {

SparseSignSketch::SparseSignSketch(std::size_t d, std::size_t n, std::size_t xi,
                                   std::uint64_t seed)
    : d_(d), n_(n), xi_(xi), seed_(seed), scale_(1.0 / std::sqrt(static_cast<double>(xi))) {
  if (xi < 1 || xi > d || d > n)
    throw Error(ErrorCode::invalid_argument, "sketch needs 1 <= xi <= d <= n");
  rows_.resize(n * xi);
  signs_.resize(n * xi);
  Rng rng(seed);
  std::vector<std::uint32_t> chosen(xi);
  for (std::size_t col = 0; col < n; ++col) {
    // rejection sampling of xi distinct rows
    for (std::size_t k = 0; k < xi;) {
      const auto r = static_cast<std::uint32_t>(rng.below(d));
      bool dup = false;
      for (std::size_t j = 0; j < k; ++j)
        if (chosen[j] == r) {
          dup = true;
          break;
        }
      if (dup) continue;
      chosen[k++] = r;
    }
    for (std::size_t k = 0; k < xi; ++k) {
      rows_[col * xi + k] = chosen[k];
      signs_[col * xi + k] = (rng.next() & 1u) ? 1.0f : -1.0f;
    }
  }
}

SparseSignSketch SparseSignSketch::identity(std::size_t n) {
  SparseSignSketch s;
  s.d_ = n;
  s.n_ = n;
  s.xi_ = 1;
  s.scale_ = 1.0;
  s.rows_.resize(n);
  s.signs_.assign(n, 1.0f);
  for (std::size_t i = 0; i < n; ++i) s.rows_[i] = static_cast<std::uint32_t>(i);
  return s;
}

void SparseSignSketch::apply(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != n_ || y.size() != d_)
    throw Error(ErrorCode::dimension_mismatch, "sketch apply");
  std::fill(y.begin(), y.end(), Complex{0.0, 0.0});
  for (std::size_t col = 0; col < n_; ++col) {
    const Complex v = x[col];
    if (v == Complex{0.0, 0.0}) continue;
    const std::size_t base = col * xi_;
    for (std::size_t k = 0; k < xi_; ++k)
      y[rows_[base + k]] += static_cast<double>(signs_[base + k]) * v;
  }
  for (Complex& v : y) v *= scale_;
}

Vector SparseSignSketch::apply(std::span<const Complex> x) const {
  Vector y(d_);
  apply(x, y);
  return y;
}

DenseMatrix SparseSignSketch::densify() const {
  DenseMatrix m(d_, n_);
  for (std::size_t col = 0; col < n_; ++col)
    for (std::size_t k = 0; k < xi_; ++k)
      m(rows_[col * xi_ + k], col) += scale_ * static_cast<double>(signs_[col * xi_ + k]);
  return m;
}

EmbeddingQuality measure_distortion(const SparseSignSketch& sketch, const DenseMatrix& basis) {
  if (basis.rows() != sketch.ambient_dim())
    throw Error(ErrorCode::dimension_mismatch, "measure_distortion basis rows");
  DenseMatrix sketched(sketch.embedded_dim(), basis.cols());
  for (std::size_t j = 0; j < basis.cols(); ++j) sketch.apply(basis.col(j), sketched.col(j));
  const std::vector<double> sigma = svd_small(sketched);
  const double smax = sigma.front();
  const double smin = sigma.back();
  EmbeddingQuality q;
  q.epsilon = std::max(smax * smax - 1.0, 1.0 - smin * smin);
  q.epsilon = std::max(q.epsilon, 0.0);
  q.kappa_eps = kappa_from_epsilon(q.epsilon);
  return q;
}

}  // namespace srrk
