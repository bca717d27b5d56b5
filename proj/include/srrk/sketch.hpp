#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srrk/dense.hpp"
#include "srrk/types.hpp"

namespace srrk {

// Sparse sign embedding: each of the n columns holds xi entries +-1/sqrt(xi)
// at distinct random rows. Construction is fully determined by
// (d, n, xi, seed). Immutable after build; concurrent applies are safe.
class SparseSignSketch {
 public:
  SparseSignSketch(std::size_t d, std::size_t n, std::size_t xi, std::uint64_t seed);

  // exact scaled-identity embedding (d = n); test and degenerate-config hook
  static SparseSignSketch identity(std::size_t n);

  std::size_t embedded_dim() const { return d_; }
  std::size_t ambient_dim() const { return n_; }
  std::size_t nonzeros_per_column() const { return xi_; }
  std::uint64_t seed() const { return seed_; }
  double scale() const { return scale_; }

  // y = Omega x, cost O(xi * n)
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  Vector apply(std::span<const Complex> x) const;

  // Omega as a d x n dense matrix; tests only
  DenseMatrix densify() const;

 private:
  SparseSignSketch() = default;

  std::size_t d_ = 0;
  std::size_t n_ = 0;
  std::size_t xi_ = 0;
  std::uint64_t seed_ = 0;
  double scale_ = 1.0;
  std::vector<std::uint32_t> rows_;  // xi entries per column
  std::vector<float> signs_;         // +-1
};

struct EmbeddingQuality {
  double epsilon = 0.0;    // measured distortion
  double kappa_eps = 1.0;  // sqrt((1+eps)/(1-eps)); +inf once eps >= 1
};

// Conditioning bound implied by an eps-subspace embedding. For eps >= 1 the
// embedding property carries no information and the bound is infinite.
inline double kappa_from_epsilon(double eps) {
  if (eps >= 1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt((1.0 + eps) / (1.0 - eps));
}

// Distortion of the sketch on span(basis), with basis orthonormal: epsilon is
// the worst deviation of the squared singular values of Omega*basis from 1.
EmbeddingQuality measure_distortion(const SparseSignSketch& sketch, const DenseMatrix& basis);

}  // namespace srrk
