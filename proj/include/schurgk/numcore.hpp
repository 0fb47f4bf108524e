#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "schurgk/error.hpp"

namespace schurgk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Tolerance {
  // Relative singular-value cutoff used for rank decisions.
  double rank_rel = 1e-8;
  // Eigenvalue clustering radius; unset means "derive from the matrix"
  // (see default_cluster_radius).
  std::optional<double> cluster_radius;
  // Acceptance threshold for factorization residuals, relative to the norm
  // of the factored matrix.
  double residual_rel = 1e-10;

  void validate() const;
};

// Throws InvalidInput when any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what = "matrix");
void require_square(const Matrix& m, const char* what = "matrix");

double spectral_norm(const Matrix& m);
Eigen::VectorXd singular_values(const Matrix& m);

// Number of singular values strictly above rank_rel * sigma_max.
int numerical_rank(const Matrix& m, const Tolerance& tol);

// Number of singular values strictly above an absolute cutoff.
int rank_above(const Matrix& m, double cutoff);

// Orthonormal basis (possibly empty) of a subspace of C^n.
class SubspaceBasis {
 public:
  explicit SubspaceBasis(Eigen::Index ambient_dim);
  // Columns must be orthonormal to 1e-12; throws InvalidInput otherwise.
  explicit SubspaceBasis(Matrix columns);

  // Orthonormal basis of the column span, dropping directions whose singular
  // value is at or below rank_rel * sigma_max.
  static SubspaceBasis span_of(const Matrix& columns, const Tolerance& tol = {});
  static SubspaceBasis whole_space(Eigen::Index n);

  Eigen::Index ambient_dim() const { return columns_.rows(); }
  Eigen::Index dim() const { return columns_.cols(); }
  bool empty() const { return columns_.cols() == 0; }
  const Matrix& columns() const { return columns_; }

  SubspaceBasis orthogonal_complement() const;

 private:
  Matrix columns_;
};

// Numerical null space: right singular vectors with sigma <= rank cutoff.
SubspaceBasis kernel_basis(const Matrix& m, const Tolerance& tol);

// Null space of at least `min_dim` directions: the min_dim smallest right
// singular vectors, extended by any further direction whose singular value is
// at or below `cutoff`. Used where the exact kernel dimension is known from
// the Jordan structure.
Matrix null_space(const Matrix& m, Eigen::Index min_dim, double cutoff);

// Unitary matrix whose first column is v/|v|. The remaining columns come from
// the plane rotation taking e1 to v/|v| (identity on the orthogonal
// complement of span{e1, v}); when v(0) is real and nonnegative the (1,1)
// entry is real nonnegative and |V - I| = |v/|v| - e1|.
Matrix unitary_completion(const Vector& v);
Matrix unitary_completion(const Vector& v, Eigen::Index n);

struct QR {
  Matrix Q;
  Matrix R;
};

// M = Q R with Q unitary and R upper triangular with positive real diagonal.
// Throws RankDeficiency when min |R_ii| <= rank_rel * max |R_ii|.
QR qr_decompose(const Matrix& m, const Tolerance& tol = {});

struct SchurPair {
  Matrix U;
  Matrix T;
};

// M = U T U^*. When `order` is given, the diagonal of T is permuted (by
// adjacent swaps) so that T(i,i) is the remaining eigenvalue closest to
// order[i].
SchurPair schur_decompose(const Matrix& m, const Tolerance& tol = {},
                          std::optional<std::span<const Complex>> order = std::nullopt);

// Exchanges T(k,k) and T(k+1,k+1) by a unitary rotation, updating U so that
// U T U^* is unchanged.
void swap_adjacent(SchurPair& pair, Eigen::Index k);

// Reorders the diagonal of T to follow `order` (nearest remaining eigenvalue
// per position).
void reorder_schur(SchurPair& pair, std::span<const Complex> order);

bool is_upper_triangular(const Matrix& m, double abs_tol = 0.0);
double strict_lower_norm(const Matrix& m);

// Eigenvalues; exact diagonal for inputs that are already upper triangular.
std::vector<Complex> eigenvalues(const Matrix& m);

// Solves R X = B for upper triangular R by back substitution.
Matrix solve_upper(const Matrix& r, const Matrix& b);

}  // namespace schurgk
