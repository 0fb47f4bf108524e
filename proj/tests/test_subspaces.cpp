#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "schurgk/lab.hpp"
#include "schurgk/subspaces.hpp"
#include "subspace_properties.hpp"
#include "support.hpp"

using namespace schurgk;
namespace ts = testing_support;

namespace {

SubspaceBasis axis_span(Eigen::Index n, std::initializer_list<std::pair<Eigen::Index, Complex>> entries) {
  Vector v = Vector::Zero(n);
  for (const auto& [i, x] : entries) v(i) = x;
  return SubspaceBasis::span_of(v);
}

Matrix e(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST(Subspaces, ProjectorOfDiagonalLine) {
  const double r = 1.0 / std::sqrt(2.0);
  const Projector p = projector(axis_span(3, {{0, r}, {2, r}}));
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = expected(0, 2) = expected(2, 0) = expected(2, 2) = 0.5;
  EXPECT_LT((p.matrix - expected).norm(), 1e-15);
  EXPECT_LT((p.matrix * p.matrix - p.matrix).norm(), 1e-15);
  EXPECT_LT((p.matrix.adjoint() - p.matrix).norm(), 1e-15);
}

TEST(Subspaces, GapAndSemigapOfTiltedLines) {
  const SubspaceBasis m = axis_span(3, {{0, 1.0}});
  const SubspaceBasis n = axis_span(3, {{0, 1.0}, {2, 1.0}});
  EXPECT_NEAR(gap(m, n), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(semigap(m, n), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Subspaces, LargerDimensionGivesUnitSemigap) {
  std::mt19937_64 rng(2);
  const SubspaceBasis m = ts::random_subspace(6, 4, rng);
  const SubspaceBasis n = ts::random_subspace(6, 3, rng);
  EXPECT_NEAR(semigap(m, n), 1.0, 1e-12);
  EXPECT_EQ(gap(m, n), 1.0);
  EXPECT_EQ(semigap(SubspaceBasis(6), n), 0.0);
}

TEST(Subspaces, KernelSemigapOfTrivialKernel) {
  const double delta = 1e-6;
  Matrix a = e(2, 0, 1);
  a(1, 0) = delta;
  EXPECT_EQ(kernel_semigap(a, e(2, 0, 1)), 0.0);
}

TEST(Subspaces, KernelSemigapIsLinear) {
  const Matrix a0 = e(3, 0, 1);
  for (double delta : {1e-4, 1e-6}) {
    const Matrix a = a0 + delta * e(3, 2, 1);
    const double v = kernel_semigap(a, a0);
    EXPECT_LE(v, 2.0 * delta);
  }
}

TEST(Subspaces, KernelSemigapSlope) {
  std::mt19937_64 rng(8);
  const Matrix a0 = ts::direct_sum({ts::jordan_block(2, 0.0), ts::jordan_block(1, 0.0), Matrix::Identity(2, 2)});
  const Matrix dir = ts::random_matrix(5, 5, rng);
  std::vector<std::pair<double, double>> pts;
  Tolerance tol;
  tol.rank_rel = 1e-10;
  // A = A0 (I + h E) has ker A = (I + h E)^{-1} ker A0, so the kernel
  // dimension is kept and the kernel moves by O(h).
  for (double h : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    const Matrix a = a0 * (Matrix::Identity(5, 5) + h * dir / spectral_norm(dir));
    pts.emplace_back(h, kernel_semigap(a, a0, tol));
  }
  const LineFit fit = fit_exponent(pts);
  EXPECT_GE(fit.slope, 0.95);
}

TEST(Subspaces, HausdorffExamples) {
  Matrix d12 = Matrix::Zero(2, 2);
  d12(0, 0) = 1.0;
  d12(1, 1) = 2.0;
  Matrix d21 = Matrix::Zero(2, 2);
  d21(0, 0) = 2.0;
  d21(1, 1) = 1.0;
  EXPECT_NEAR(hausdorff_inv_distance(d12, d21, {}, 2).value, 0.0, 1e-14);

  Matrix split = Matrix::Zero(2, 2);
  split(1, 1) = 1e-6;
  const HausdorffEstimate h = hausdorff_inv_distance(ts::jordan_block(2, 0.0), split, {}, 2);
  EXPECT_NEAR(h.value, 1.0, 1e-12);
  EXPECT_TRUE(h.restricted);
  EXPECT_EQ(h.family_a, 3u);
  EXPECT_EQ(h.family_b, 4u);
}

TEST(Subspaces, KernelLatticeIsInvariant) {
  const Matrix a = examples::gk_figure();
  const auto lattice = kernel_lattice(a, {}, 12);
  EXPECT_GT(lattice.size(), 10u);
  for (const auto& s : lattice) {
    if (s.empty()) continue;
    const Matrix img = a * s.columns();
    EXPECT_LT((img - projector(s).matrix * img).norm(), 1e-10);
  }
}

TEST(Subspaces, GapIsAMetricOnEqualDimensions) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 1 + trial % 5;
    const SubspaceBasis a = ts::random_subspace(6, d, rng);
    const SubspaceBasis b = ts::random_subspace(6, d, rng);
    const SubspaceBasis c = ts::random_subspace(6, d, rng);
    EXPECT_NEAR(gap(a, b), gap(b, a), 1e-10);
    EXPECT_LE(gap(a, c), gap(a, b) + gap(b, c) + 1e-10);
    EXPECT_NEAR(gap(a, a), 0.0, 1e-10);
  }
}

TEST(Subspaces, EqualDimensionDistanceBound) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 1 + trial % 4;
    const SubspaceBasis m = ts::random_subspace(7, d, rng);
    const SubspaceBasis n = ts::random_subspace(7, d, rng);
    Vector x = m.columns() * ts::random_matrix(d, 1, rng).col(0);
    x /= x.norm();
    // Closest point of N by a least squares solve in the basis coordinates.
    const Vector coeff = n.columns().colPivHouseholderQr().solve(x);
    const double dist = (x - n.columns() * coeff).norm();
    EXPECT_LE(dist, gap(m, n) + 1e-8);
  }
  const SubspaceBasis a = ts::random_subspace(7, 2, rng);
  const SubspaceBasis b = ts::random_subspace(7, 3, rng);
  EXPECT_EQ(gap(a, b), 1.0);
}

TEST(Subspaces, SemigapPropertySuite) {
  const ts::SubspaceSuiteResult r = ts::run_subspace_suite(200, 1234);
  EXPECT_LE(r.max_of_semigaps, 1e-10);
  EXPECT_LE(r.monotone, 1e-10);
  EXPECT_LE(r.bound, 1e-10);
  EXPECT_LE(r.dim_excess, 1e-12);
  EXPECT_EQ(r.intersection_mismatches, 0);
  EXPECT_LE(r.complement, 1e-10);
  EXPECT_LE(r.sampled, 1e-6);
  EXPECT_GT(r.dim_cases, 0);
  EXPECT_GT(r.intersecting_cases, r.dim_cases);
}
