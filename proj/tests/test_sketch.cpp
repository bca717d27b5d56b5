#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "srrk/error.hpp"
#include "srrk/kernels.hpp"
#include "srrk/rng.hpp"
#include "srrk/sketch.hpp"

using namespace srrk;

TEST_CASE("sketch nonzero counting invariant") {
  SparseSignSketch s(4, 8, 2, 0);
  DenseMatrix dense = s.densify();
  int nnz = 0;
  const double val = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < 8; ++j) {
    int col_nnz = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (dense(i, j) != Complex{0.0, 0.0}) {
        ++col_nnz;
        CHECK(std::abs(std::abs(dense(i, j).real()) - val) < 1e-15);
      }
    }
    CHECK(col_nnz == 2);
    nnz += col_nnz;
  }
  CHECK(nnz == 16);
}

TEST_CASE("sketch is deterministic in the seed") {
  SparseSignSketch a(16, 40, 4, 7);
  SparseSignSketch b(16, 40, 4, 7);
  SparseSignSketch c(16, 40, 4, 8);
  auto da = a.densify(), db = b.densify(), dc = c.densify();
  bool same_ab = true, same_ac = true;
  for (std::size_t i = 0; i < da.data().size(); ++i) {
    same_ab = same_ab && da.data()[i] == db.data()[i];
    same_ac = same_ac && da.data()[i] == dc.data()[i];
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
}

TEST_CASE("sketch apply matches the densified matrix") {
  SparseSignSketch s(12, 30, 3, 3);
  DenseMatrix dense = s.densify();
  auto xm = oracle::random_matrix(30, 1, 5);
  Vector x(xm.col(0).begin(), xm.col(0).end());
  Vector y = s.apply(x);
  Vector ref = matvec(dense, x);
  for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(y[i] - ref[i]) < 1e-14);

  Vector zero(30, Complex{0.0, 0.0});
  for (auto v : s.apply(zero)) CHECK(v == Complex{0.0, 0.0});

  // unit-vector probe: column 4 of Omega
  Vector e = unit_vector(30, 4);
  Vector col = s.apply(e);
  int nnz = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(std::abs(col[i] - dense(i, 4)) < 1e-15);
    if (col[i] != Complex{0.0, 0.0}) ++nnz;
  }
  CHECK(nnz == 3);
}

TEST_CASE("sketch apply is linear") {
  SparseSignSketch s(10, 25, 4, 11);
  auto um = oracle::random_matrix(25, 1, 21);
  auto vm = oracle::random_matrix(25, 1, 22);
  Vector u(um.col(0).begin(), um.col(0).end());
  Vector v(vm.col(0).begin(), vm.col(0).end());
  const Complex alpha{1.3, -0.4}, beta{-0.2, 2.1};
  Vector com(25);
  for (std::size_t i = 0; i < 25; ++i) com[i] = alpha * u[i] + beta * v[i];
  Vector lhs = s.apply(com);
  Vector su = s.apply(u), sv = s.apply(v);
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(std::abs(lhs[i] - (alpha * su[i] + beta * sv[i])) < 1e-13);
}

TEST_CASE("sketch rejects bad dimensions") {
  CHECK_THROWS_AS(SparseSignSketch(10, 5, 2, 0), Error);   // d > n
  CHECK_THROWS_AS(SparseSignSketch(10, 20, 11, 0), Error); // xi > d
  CHECK_THROWS_AS(SparseSignSketch(10, 20, 0, 0), Error);  // xi < 1
  SparseSignSketch s(10, 20, 2, 0);
  Vector bad(19);
  CHECK_THROWS_AS(s.apply(bad), Error);
}

TEST_CASE("identity sketch has zero distortion") {
  SparseSignSketch s = SparseSignSketch::identity(12);
  auto qr = householder_qr(oracle::random_matrix(12, 5, 9));
  EmbeddingQuality q = measure_distortion(s, qr.q);
  CHECK(q.epsilon < 1e-12);
  CHECK(q.kappa_eps == doctest::Approx(1.0));
}

TEST_CASE("kappa formula") {
  CHECK(kappa_from_epsilon(0.5) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("distortion over seeded trials and monotone trend in d") {
  // Random 20-dim subspace of R^600. A d x m sketched orthonormal basis has
  // singular values spreading like 1 +- sqrt(m/d), so the squared-norm
  // distortion at d = 200 concentrates near 0.73; 0.95 leaves slack.
  const std::size_t n = 600, m = 20;
  auto qr = householder_qr(oracle::random_matrix(n, m, 77, false));

  int ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SparseSignSketch s(200, n, 8, seed);
    if (measure_distortion(s, qr.q).epsilon < 0.95) ++ok;
  }
  CHECK(ok >= 19);

  // median distortion shrinks as d grows
  std::vector<double> medians;
  for (std::size_t d : {50u, 100u, 200u, 400u}) {
    std::vector<double> eps;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SparseSignSketch s(d, n, 8, seed);
      eps.push_back(measure_distortion(s, qr.q).epsilon);
    }
    std::nth_element(eps.begin(), eps.begin() + 10, eps.end());
    medians.push_back(eps[10]);
  }
  CHECK(std::is_sorted(medians.rbegin(), medians.rend()));
}
