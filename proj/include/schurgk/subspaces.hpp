#pragma once

#include "schurgk/numcore.hpp"
#include "schurgk/structure.hpp"

namespace schurgk {

// Orthogonal projector; Hermitian and idempotent by construction.
struct Projector {
  Matrix matrix;
};

Projector projector(const SubspaceBasis& m);

// |P_M - P_N|, in [0, 1].
double gap(const SubspaceBasis& m, const SubspaceBasis& n);

// One-sided gap: largest singular value of (I - P_N) B_M, where B_M holds the
// basis of M. Zero when M is the trivial subspace.
double semigap(const SubspaceBasis& m, const SubspaceBasis& n);

// Semigap from ker(A) to ker(A0).
double kernel_semigap(const Matrix& a, const Matrix& a0, const Tolerance& tol = {});

struct HausdorffEstimate {
  double value = 0.0;
  // Always true: only kernel-power lattices are compared, never the full
  // (uncountable) family of invariant subspaces.
  bool restricted = true;
  std::size_t family_a = 0;
  std::size_t family_b = 0;
};

// Invariant subspaces of dimension <= max_dim of the form
// sum_t ker(A - lambda_t)^{i_t}. This includes {0}, the whole space, chain
// prefixes of a single block and every sum of generalized eigenspaces.
std::vector<SubspaceBasis> kernel_lattice(const Matrix& a, const Tolerance& tol, Eigen::Index max_dim);

HausdorffEstimate hausdorff_inv_distance(const Matrix& a, const Matrix& b, const Tolerance& tol,
                                         Eigen::Index max_dim);

}  // namespace schurgk
