#pragma once

// Eigen-backed reference computations used only by the test suites. These are
// deliberately independent of the library kernels they check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <vector>

#include "srrk/dense.hpp"
#include "srrk/rng.hpp"
#include "srrk/types.hpp"

namespace oracle {

using EigenMat = Eigen::MatrixXcd;
using EigenVec = Eigen::VectorXcd;

inline EigenMat to_eigen(const srrk::DenseMatrix& a) {
  EigenMat m(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
  return m;
}

inline srrk::DenseMatrix from_eigen(const EigenMat& m) {
  srrk::DenseMatrix a(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) a(i, j) = m(i, j);
  return a;
}

inline EigenVec to_eigen_vec(std::span<const srrk::Complex> v) {
  EigenVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

inline std::vector<srrk::Complex> dense_eigenvalues(const srrk::DenseMatrix& a) {
  Eigen::ComplexEigenSolver<EigenMat> es(to_eigen(a), false);
  std::vector<srrk::Complex> vals(es.eigenvalues().data(),
                                  es.eigenvalues().data() + es.eigenvalues().size());
  return vals;
}

inline std::vector<double> dense_singular_values(const srrk::DenseMatrix& a) {
  Eigen::JacobiSVD<EigenMat> svd(to_eigen(a));
  std::vector<double> s(svd.singularValues().data(),
                        svd.singularValues().data() + svd.singularValues().size());
  return s;
}

// least-squares solution via SVD pseudoinverse
inline srrk::Vector pinv_solve(const srrk::DenseMatrix& a, std::span<const srrk::Complex> b) {
  Eigen::JacobiSVD<EigenMat> svd(to_eigen(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  EigenVec x = svd.solve(to_eigen_vec(b));
  return srrk::Vector(x.data(), x.data() + x.size());
}

// greedy optimal matching distance between two eigenvalue multisets,
// relative to the largest magnitude present
inline double eigenvalue_match_error(std::vector<srrk::Complex> a, std::vector<srrk::Complex> b) {
  double scale = 0.0;
  for (auto z : a) scale = std::max(scale, std::abs(z));
  for (auto z : b) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const auto& za : a) {
    double best = 1e300;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(za - b[i]);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    used[bi] = true;
    worst = std::max(worst, best);
  }
  return worst / scale;
}

// largest principal angle between the column spans of two orthonormalized
// sets, via the sine formulation (accurate for angles near zero)
inline double max_principal_angle(const srrk::DenseMatrix& a, const srrk::DenseMatrix& b) {
  Eigen::HouseholderQR<EigenMat> qa(to_eigen(a));
  Eigen::HouseholderQR<EigenMat> qb(to_eigen(b));
  EigenMat qa_thin = qa.householderQ() * EigenMat::Identity(a.rows(), a.cols());
  EigenMat qb_thin = qb.householderQ() * EigenMat::Identity(b.rows(), b.cols());
  EigenMat resid = qb_thin - qa_thin * (qa_thin.adjoint() * qb_thin);
  Eigen::JacobiSVD<EigenMat> svd(resid);
  const double smax = svd.singularValues().maxCoeff();
  return std::asin(std::clamp(smax, 0.0, 1.0));
}

inline srrk::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                       bool complex_entries = true) {
  srrk::Rng rng(seed);
  srrk::DenseMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i)
      m(i, j) = complex_entries ? srrk::Complex{rng.normal(), rng.normal()}
                                : srrk::Complex{rng.normal(), 0.0};
  return m;
}

}  // namespace oracle
