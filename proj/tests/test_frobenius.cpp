#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "schurgk/frobenius.hpp"
#include "schurgk/lab.hpp"
#include "support.hpp"

using namespace schurgk;
namespace ts = testing_support;

namespace {

using Blocks = std::vector<std::pair<Complex, int>>;

bool upper_with_nonzero_diagonal(const Matrix& s) {
  if (!is_upper_triangular(s)) return false;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    if (s(i, i) == 0.0) return false;
  return true;
}

}  // namespace

TEST(Frobenius, InvariantFactorDegrees) {
  EXPECT_EQ(invariant_factor_degrees(gk_numbers(structure_from_blocks(Blocks{{0.0, 4}, {0.0, 3}}))),
            (std::vector<int>{4, 3}));
  EXPECT_EQ(invariant_factor_degrees(gk_numbers(structure_from_blocks(Blocks{{0.0, 2}, {1.0, 3}}))),
            (std::vector<int>{5}));
  EXPECT_EQ(invariant_factor_degrees(gk_numbers(jordan_structure(examples::gk_figure()))),
            (std::vector<int>{5, 3, 3, 1}));
}

TEST(Frobenius, NonderogatoryCheck) {
  EXPECT_FALSE(is_nonderogatory(structure_from_blocks(Blocks{{0.0, 4}, {0.0, 3}})));
  EXPECT_TRUE(is_nonderogatory(structure_from_blocks(Blocks{{0.0, 3}, {1.0, 2}, {Complex(0, 1), 1}})));
}

TEST(Frobenius, JordanTypeIsItsOwnFactorization) {
  const Complex lambda(0.5, 2.0);
  const Matrix t0 = ts::direct_sum({ts::jordan_block(2, lambda), ts::jordan_block(1, lambda)});
  const TriangularJordanFactorization f = triangular_jordan(t0);
  EXPECT_LT((f.S0 - Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LT((f.J0hat - t0).norm(), 1e-15);
  EXPECT_EQ(f.block_map, (std::vector<std::vector<int>>{{1, 0}, {2}}));
}

TEST(Frobenius, TwoNilpotentBlocks) {
  const Matrix t0 = examples::split_t0();
  const TriangularJordanFactorization f = triangular_jordan(t0);
  EXPECT_EQ(f.block_map, (std::vector<std::vector<int>>{{3, 2, 1, 0}, {6, 5, 4}}));
  EXPECT_LT((f.S0 - Matrix::Identity(7, 7)).norm(), 1e-15);
  EXPECT_LT((t0 * f.S0 - f.S0 * f.J0hat).norm(), 1e-15);
}

TEST(Frobenius, SumsChainsAcrossEigenvalues) {
  // J2(1) + J1(0): one invariant factor of degree 3 occupying every column.
  Matrix t0 = ts::direct_sum({ts::jordan_block(2, 1.0), ts::jordan_block(1, 0.0)});
  t0(0, 2) = 0.7;
  const TriangularJordanFactorization f = triangular_jordan(t0);
  ASSERT_EQ(f.block_map.size(), 1u);
  EXPECT_EQ(f.block_map[0], (std::vector<int>{2, 1, 0}));
  EXPECT_LE(factorization_defect(t0, f), 1e-14);
  for (std::size_t t = 0; t + 1 < f.block_map[0].size(); ++t)
    EXPECT_EQ(f.J0hat(f.block_map[0][t + 1], f.block_map[0][t]), Complex(1.0, 0.0));
}

TEST(Frobenius, SeededTriangularInputs) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    const Matrix t0 = ts::triangular_input(rng, i);
    const TriangularJordanFactorization f = triangular_jordan(t0);
    EXPECT_LE((t0 * f.S0 - f.S0 * f.J0hat).norm() / spectral_norm(t0), 1e-10) << "input " << i;
    EXPECT_TRUE(upper_with_nonzero_diagonal(f.S0)) << "input " << i;
    EXPECT_TRUE(is_upper_triangular(f.J0hat)) << "input " << i;
    for (Eigen::Index k = 0; k < t0.rows(); ++k) EXPECT_EQ(f.J0hat(k, k), t0(k, k));
    // The number of invariant factors and their degrees come from the GK
    // numbers.
    std::vector<int> lengths;
    for (const auto& b : f.block_map) lengths.push_back(static_cast<int>(b.size()));
    EXPECT_EQ(lengths, invariant_factor_degrees(gk_numbers(jordan_structure(t0)))) << "input " << i;
  }
}

TEST(Frobenius, RejectsNonTriangular) {
  Matrix a = ts::jordan_block(2, 0.0);
  a(1, 0) = 1.0;
  try {
    triangular_jordan(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Frobenius, HolderMatchOnSplitPair) {
  const Matrix t0 = examples::split_t0();
  for (double eps : {1e-4, 1e-7}) {
    const Matrix b = examples::split_b(eps);
    const HolderMatch m = holder_match(t0, b);
    EXPECT_LE(m.residual, 1e-8);
    EXPECT_LE(m.unitarity, 1e-8);
    EXPECT_TRUE(is_upper_triangular(m.T, 1e-12));
    EXPECT_LE(m.distance, 10.0 * std::pow(eps, 1.0 / 7.0));
    EXPECT_NEAR(m.reference, std::pow(spectral_norm(b - t0), 1.0 / 7.0), 1e-12);
  }
}

TEST(Frobenius, HolderMatchNonderogatory) {
  const Matrix t0 = ts::jordan_block(3, 0.0);
  double k_max = 0.0;
  for (double delta : {1e-3, 1e-6, 1e-9}) {
    Matrix b = t0;
    b(1, 1) = delta;
    b(2, 2) = -delta;
    const HolderMatch m = holder_match(t0, b);
    EXPECT_LE(m.residual, 1e-8);
    k_max = std::max(k_max, m.distance / std::cbrt(delta));
  }
  EXPECT_LT(k_max, 10.0);
}

TEST(Frobenius, HolderMatchOnGeneralNeighbour) {
  std::mt19937_64 rng(7);
  const Matrix t0 = ts::direct_sum({ts::jordan_block(3, 1.0), ts::jordan_block(2, Complex(0, 1))});
  const Matrix a = t0 + 1e-8 * ts::random_matrix(5, 5, rng);
  // Generic perturbations separate every eigenvalue, so detect with radius 0.
  Tolerance separate;
  separate.cluster_radius = 0.0;
  const JordanStructure ob = jordan_structure(a, separate);
  EXPECT_EQ(gk_numbers(ob).m.front(), 5);
  const HolderMatch m = holder_match(t0, a, {}, ob);
  EXPECT_LE(m.residual, 1e-8);
  EXPECT_LE(m.unitarity, 1e-8);
  EXPECT_LT(m.distance, 10.0 * std::pow(1e-8, 1.0 / 3.0));
}

TEST(Frobenius, HolderMatchRejectsDifferentGk) {
  const Matrix t0 = ts::jordan_block(2, 0.0);
  const Matrix b = Matrix::Zero(2, 2);
  try {
    holder_match(t0, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StructureMismatch);
  }
}
