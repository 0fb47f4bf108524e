#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schurgk/numcore.hpp"
#include "schurgk/structure.hpp"

namespace schurgk {

// T0 S0 = S0 J0hat with S0 upper triangular and invertible, J0hat upper
// triangular with the diagonal of T0. block_map[j] lists (0-based, strictly
// decreasing) the columns occupied by invariant factor j; within it
// J0hat(s_{t+1}, s_t) = 1.
struct TriangularJordanFactorization {
  Matrix S0;
  Matrix J0hat;
  std::vector<std::vector<int>> block_map;
};

// Nonzero GK numbers: degrees of the invariant factors.
std::vector<int> invariant_factor_degrees(const GKVector& g);

bool is_nonderogatory(const JordanStructure& omega);

// Upper triangular Jordan-type factorization of an upper triangular matrix.
// Each generalized eigenspace gets a basis with one vector per diagonal
// position of its eigenvalue (the vector's last nonzero entry sits at that
// position). That basis is rotated, by an upper triangular change of
// coordinates, into Jordan chains; the k-th longest chains of all eigenvalues
// are summed and the sum is pushed down by the shifts of its leading
// positions. Throws ChainConstructionFailure when no triangular Jordan basis
// exists (this happens for some nilpotent orbits from n = 6 on) or when the
// detection is ambiguous at the tolerance.
TriangularJordanFactorization triangular_jordan(const Matrix& t0, const JordanStructure& omega,
                                                const Tolerance& tol = {});
TriangularJordanFactorization triangular_jordan(const Matrix& t0, const Tolerance& tol = {});

// Largest of the relative residual |T0 S0 - S0 J0hat| / |T0|, and zero when
// the triangularity and diagonal invariants hold exactly; +inf otherwise.
double factorization_defect(const Matrix& t0, const TriangularJordanFactorization& f);

struct HolderMatch {
  Matrix U;                  // unitary, U^* B U = T
  Matrix T;                  // upper triangular
  double distance = 0.0;     // |I - U| + |T - T0|
  double reference = 0.0;    // |B - T0|^{1/n}
  double residual = 0.0;     // |U^* B U - T| / |B|
  double unitarity = 0.0;    // |U^* U - I|
  double max_mismatch = 0.0; // worst |lambda - mu| over paired eigenvalues
  std::vector<std::string> warnings;
};

// Schur form of B next to (I, T0) when B has the GK numbers of T0 and every
// eigenvalue of T0 splits into eigenvalues of B whose GK numbers add up to
// its own. B = S J S^{-1} with S built from chains of B next to the columns of
// S0; then S = Q R gives B = U T U^* with U = Q Q0^*, where Q0 is the diagonal
// unitary factor of S0.
HolderMatch holder_match(const Matrix& t0, const Matrix& b, const Tolerance& tol = {},
                         const std::optional<JordanStructure>& omega_b = std::nullopt);

}  // namespace schurgk
