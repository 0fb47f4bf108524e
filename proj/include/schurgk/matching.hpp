#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schurgk/numcore.hpp"
#include "schurgk/structure.hpp"

namespace schurgk {

enum class MatchMode { Lipschitz, Holder };

const char* to_string(MatchMode mode);
MatchMode parse_match_mode(const std::string& text);

// lams[order0[i]] is paired with mus[order1[i]].
struct Pairing {
  std::vector<std::size_t> order0;
  std::vector<std::size_t> order1;
  MatchMode mode = MatchMode::Lipschitz;
  double max_mismatch = 0.0;
};

// Bijection minimizing the largest cost (bottleneck assignment). Infinite
// entries are forbidden edges. result[i] is the column assigned to row i.
// Returns nullopt when no finite assignment exists.
std::optional<std::vector<std::size_t>> bottleneck_assignment(const Eigen::MatrixXd& cost);

// Both lists count eigenvalues with multiplicity and must have equal length.
// Lipschitz mode clusters both lists with `radius` and pairs clusters of equal
// multiplicity; Holder mode clusters only `lams` and lets every mu pick a
// slot of any cluster. Throws StructureMismatch when no consistent pairing
// exists.
Pairing pair_eigenvalues(std::span<const Complex> lams, std::span<const Complex> mus, MatchMode mode,
                         double radius = 0.0);

// result[t] is the entry of `b` paired with entry t of `a`: equal block-size
// lists, smallest worst eigenvalue distance. Throws StructureMismatch.
std::vector<std::size_t> pair_structures(const JordanStructure& a, const JordanStructure& b);

// f_1, ..., f_m with (A - shifts[j]) f_{j+1} = f_j and (A - shifts[0]) f_1 = 0.
struct Chain {
  std::vector<Complex> shifts;
  std::vector<Vector> vectors;

  std::size_t length() const { return vectors.size(); }
};

struct ChainSet {
  std::vector<Chain> chains;
  Eigen::Index ambient_dim = 0;
};

// Jordan basis organized in chains, one per block of `omega`, longest blocks
// first within each eigenvalue. Each top vector is taken in ker(A - lambda)^s
// orthogonally to ker(A - lambda)^{s-1} plus the level-s vectors of longer
// chains already chosen.
ChainSet jordan_chains(const Matrix& a, const JordanStructure& omega, const Tolerance& tol = {});

// Largest chain-relation residual relative to |A|.
double verify_chains(const Matrix& a, const ChainSet& set);

// Chain of B next to `target`: the top vector is the orthogonal projection of
// the target's top vector onto the kernel of prod_j (B - mus[j]), and the rest
// follow by descent with the same shifts. `kernel_dim` is the known kernel
// dimension of that product when available.
Chain close_chain(const Chain& target, const Matrix& b, std::span<const Complex> mus, const Tolerance& tol = {},
                  std::optional<Eigen::Index> kernel_dim = std::nullopt);

struct DeflationStep {
  Matrix V1;
  Matrix T1;
  Matrix B1;
  Complex mu1;
  int chain_length = 0;
  // Lemma-style predictions for the trailing blocks.
  JordanStructure omega_t1;
  JordanStructure omega_b1;
  // |(V1^* B V1)(2:n, 1)| before it is dropped.
  double column_residual = 0.0;
};

// One deflation of the upper triangular T0 against B of the same Jordan
// structure. e1 is an eigenvector of T0 heading a chain of length h (its
// height); the close chain of B at the paired eigenvalue supplies g_1 and
// V1 = unitary_completion(g_1). Known structures skip numerical detection.
DeflationStep deflation_step(const Matrix& t0, const Matrix& b, const Tolerance& tol = {},
                             const std::optional<JordanStructure>& omega_t0 = std::nullopt,
                             const std::optional<JordanStructure>& omega_b = std::nullopt);

struct LipschitzMatch {
  Matrix Vhat;
  Matrix T;
  double ratio = 0.0;            // (|I - Vhat| + |T - T0|) / |T0 - B|
  double lower_residual = 0.0;   // strict lower part of Vhat^* B Vhat, dropped
  std::vector<std::string> warnings;
};

// Schur form of B next to the Schur form (I, T0): repeated deflation with
// Vhat accumulated as Vhat * (I_j (+) V_j).
LipschitzMatch lipschitz_match(const Matrix& t0, const Matrix& b, const Tolerance& tol = {},
                               const std::optional<JordanStructure>& omega_b = std::nullopt);

// |U1 - U0| + |T1 - T0|.
double schur_distance(const SchurPair& p0, const SchurPair& p1);

}  // namespace schurgk
