#pragma once

#include <span>
#include <string>
#include <vector>

#include "schurgk/numcore.hpp"

namespace schurgk {

// Block sizes of one eigenvalue, stored non-increasing.
struct EigenBlocks {
  Complex eigenvalue;
  std::vector<int> sizes;

  int multiplicity() const;
};

// Jordan structure: per-eigenvalue block-size partitions.
struct JordanStructure {
  std::vector<EigenBlocks> entries;
  int ambient_dim = 0;
  // Tolerance-indecision notes from numerical detection; never affect
  // equality.
  std::vector<std::string> warnings;

  // Throws InvalidInput if sizes are not positive non-increasing partitions
  // summing to ambient_dim.
  void validate() const;
  // Index of the entry whose eigenvalue is nearest to `value`.
  std::size_t nearest(Complex value) const;
  int max_block() const;
};

struct GKVector {
  std::vector<int> m;  // GK numbers, zero-padded to the ambient dimension
  std::vector<int> k;  // dual partition
};

struct Cluster {
  Complex center;
  int multiplicity = 0;
  std::vector<std::size_t> members;  // indices into the input list
};

// Single-linkage clustering: values within `radius` of each other (through a
// chain of such links) share a cluster. Centers are arithmetic means;
// clusters are ordered by their first member.
std::vector<Cluster> cluster_eigenvalues(std::span<const Complex> values, double radius);

// |A| * rank_rel^(1/n): the scale at which an n-fold eigenvalue splits under
// a perturbation at the rank cutoff.
double default_cluster_radius(const Matrix& a, const Tolerance& tol);

// Numerical Jordan structure. Eigenvalues come from a Schur form (the exact
// diagonal when `a` is already upper triangular) and are clustered; for each
// cluster the Schur form is reordered to bring the cluster to the leading
// block, and the Weyr characteristic of that block minus the cluster center
// is read off from numerical ranks of its powers.
JordanStructure jordan_structure(const Matrix& a, const Tolerance& tol = {});

// k_i = max{ l : m_l >= i }, i = 1..n (empty max is 0).
std::vector<int> dual_partition(std::span<const int> m, std::size_t n);

GKVector gk_numbers(const JordanStructure& omega);

// pairing[i] is the index in omega2 matched to entry i of omega1.
bool same_jordan_structure(const JordanStructure& omega1, const JordanStructure& omega2,
                           std::span<const std::size_t> pairing);

bool same_gk(const GKVector& g1, const GKVector& g2);

// Structure after deflating an eigenvector that heads a chain of block
// `block` (0-based) at eigenvalue entry `t` (0-based): among the blocks tied
// with that size, the last one shrinks by one.
JordanStructure truncate_structure(const JordanStructure& omega, std::size_t t, std::size_t block);

// dim ker (A - lambda_t I)^power = sum over blocks of min(power, size).
int kernel_dim(const EigenBlocks& blocks, int power);

// Direct sum of upper Jordan blocks in entry order.
Matrix jordan_matrix(const JordanStructure& omega);

// Structure with the given (eigenvalue, block size) list; equal eigenvalues
// are merged.
JordanStructure structure_from_blocks(std::span<const std::pair<Complex, int>> blocks);

}  // namespace schurgk
