#include "schurgk/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace schurgk {

namespace {

Eigen::JacobiSVD<Matrix> svd_full_v(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullV);
}

}  // namespace

void Tolerance::validate() const {
  if (!(rank_rel > 0.0 && rank_rel < 1.0))
    throw Error(ErrorKind::InvalidInput, "rank_rel must lie in (0,1)");
  if (!(residual_rel > 0.0 && residual_rel < 1.0))
    throw Error(ErrorKind::InvalidInput, "residual_rel must lie in (0,1)");
  if (cluster_radius && !(*cluster_radius >= 0.0))
    throw Error(ErrorKind::InvalidInput, "cluster_radius must be >= 0");
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::InvalidInput, std::string(what) + " must be square and nonempty");
}

Eigen::VectorXd singular_values(const Matrix& m) {
  require_finite(m);
  if (m.size() == 0) return Eigen::VectorXd();
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

double spectral_norm(const Matrix& m) {
  const Eigen::VectorXd s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

int rank_above(const Matrix& m, double cutoff) {
  const Eigen::VectorXd s = singular_values(m);
  return static_cast<int>((s.array() > cutoff).count());
}

int numerical_rank(const Matrix& m, const Tolerance& tol) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > tol.rank_rel * s(0)).count());
}

// ---------------------------------------------------------------------------
// SubspaceBasis

SubspaceBasis::SubspaceBasis(Eigen::Index ambient_dim) : columns_(ambient_dim, 0) {
  if (ambient_dim <= 0) throw Error(ErrorKind::InvalidInput, "ambient dimension must be positive");
}

SubspaceBasis::SubspaceBasis(Matrix columns) : columns_(std::move(columns)) {
  require_finite(columns_, "basis");
  if (columns_.rows() <= 0 || columns_.cols() > columns_.rows())
    throw Error(ErrorKind::InvalidInput, "basis has more columns than its ambient dimension");
  if (columns_.cols() > 0) {
    const Eigen::Index d = columns_.cols();
    const double defect =
        (columns_.adjoint() * columns_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > 1e-12) throw Error(ErrorKind::InvalidInput, "basis columns are not orthonormal");
  }
}

SubspaceBasis SubspaceBasis::span_of(const Matrix& columns, const Tolerance& tol) {
  require_finite(columns, "spanning set");
  if (columns.cols() == 0) return SubspaceBasis(columns.rows());
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) r = (s.array() > tol.rank_rel * s(0)).count();
  return SubspaceBasis(Matrix(svd.matrixU().leftCols(r)));
}

SubspaceBasis SubspaceBasis::whole_space(Eigen::Index n) {
  return SubspaceBasis(Matrix(Matrix::Identity(n, n)));
}

SubspaceBasis SubspaceBasis::orthogonal_complement() const {
  const Eigen::Index n = ambient_dim();
  if (empty()) return whole_space(n);
  Eigen::HouseholderQR<Matrix> qr(columns_);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return SubspaceBasis(Matrix(q.rightCols(n - dim())));
}

// ---------------------------------------------------------------------------
// Kernels

SubspaceBasis kernel_basis(const Matrix& m, const Tolerance& tol) {
  require_finite(m);
  const Eigen::Index n = m.cols();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "kernel of a matrix with no columns");
  const auto svd = svd_full_v(m);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) r = (s.array() > tol.rank_rel * s(0)).count();
  return SubspaceBasis(Matrix(svd.matrixV().rightCols(n - r)));
}

Matrix null_space(const Matrix& m, Eigen::Index min_dim, double cutoff) {
  require_finite(m);
  const Eigen::Index n = m.cols();
  if (min_dim < 0 || min_dim > n) throw Error(ErrorKind::InvalidInput, "kernel dimension out of range");
  const auto svd = svd_full_v(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::Index r = (s.array() > cutoff).count();
  const Eigen::Index dim = std::max(min_dim, n - r);
  return svd.matrixV().rightCols(dim);
}

// ---------------------------------------------------------------------------
// Unitary completion

Matrix unitary_completion(const Vector& v) {
  require_finite(v, "vector");
  const Eigen::Index n = v.size();
  const double nrm = v.norm();
  if (n == 0 || nrm == 0.0) throw Error(ErrorKind::InvalidInput, "cannot complete a zero vector");
  const Vector u = v / nrm;

  const double c = std::abs(u(0));
  const Complex phase = c > 0.0 ? u(0) / c : Complex(1.0, 0.0);
  Vector tail = u;
  tail(0) = 0.0;
  const double s = tail.norm();

  Matrix rot = Matrix::Identity(n, n);
  if (s > 0.0) {
    // u = phase * (c e1 + s w) with w a unit vector orthogonal to e1.
    const Vector w = tail / (phase * s);
    Vector e1 = Vector::Zero(n);
    e1(0) = 1.0;
    rot += (c - 1.0) * (e1 * e1.adjoint() + w * w.adjoint());
    rot += s * (w * e1.adjoint() - e1 * w.adjoint());
  }
  // Column 0 of rot * diag(phase, 1, ..., 1) is u; set it exactly.
  rot.col(0) = u;
  return rot;
}

Matrix unitary_completion(const Vector& v, Eigen::Index n) {
  if (v.size() != n) throw Error(ErrorKind::InvalidInput, "vector length does not match n");
  return unitary_completion(v);
}

// ---------------------------------------------------------------------------
// QR

QR qr_decompose(const Matrix& m, const Tolerance& tol) {
  require_finite(m);
  require_square(m);
  const Eigen::Index n = m.rows();
  Eigen::HouseholderQR<Matrix> hh(m);
  Matrix q = hh.householderQ() * Matrix::Identity(n, n);
  Matrix r = hh.matrixQR().triangularView<Eigen::Upper>();

  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    dmax = std::max(dmax, std::abs(r(i, i)));
    dmin = std::min(dmin, std::abs(r(i, i)));
  }
  if (dmax == 0.0 || dmin <= tol.rank_rel * dmax)
    throw Error(ErrorKind::RankDeficiency, "QR of a numerically singular matrix");

  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i) / std::abs(r(i, i));
    q.col(i) *= d;
    r.row(i) *= std::conj(d);
    r(i, i) = std::abs(r(i, i));
  }
  const double scale = spectral_norm(m);
  if (spectral_norm(m - q * r) > tol.residual_rel * scale)
    throw Error(ErrorKind::NumericalFailure, "QR residual above tolerance");
  return {std::move(q), std::move(r)};
}

// ---------------------------------------------------------------------------
// Schur

bool is_upper_triangular(const Matrix& m, double abs_tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > abs_tol) return false;
  return true;
}

double strict_lower_norm(const Matrix& m) {
  Matrix lower = m.triangularView<Eigen::StrictlyLower>();
  return spectral_norm(lower);
}

void swap_adjacent(SchurPair& pair, Eigen::Index k) {
  Matrix& t = pair.T;
  const Eigen::Index n = t.rows();
  if (k < 0 || k + 1 >= n) throw Error(ErrorKind::InvalidInput, "swap index out of range");
  const Complex a = t(k, k), b = t(k + 1, k + 1), x = t(k, k + 1);
  if (a == b) return;
  // Eigenvector of [[a, x], [0, b]] for b.
  Eigen::Vector2cd w(x, b - a);
  w.normalize();
  Eigen::Matrix2cd z;
  z << w(0), -std::conj(w(1)), w(1), std::conj(w(0));
  t.middleRows(k, 2) = z.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * z;
  pair.U.middleCols(k, 2) = pair.U.middleCols(k, 2) * z;
  t(k + 1, k) = 0.0;
  t(k, k) = b;
  t(k + 1, k + 1) = a;
}

void reorder_schur(SchurPair& pair, std::span<const Complex> order) {
  const Eigen::Index n = pair.T.rows();
  const Eigen::Index len = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(order.size()));
  for (Eigen::Index i = 0; i < len; ++i) {
    Eigen::Index best = i;
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(pair.T(j, j) - order[i]) < std::abs(pair.T(best, best) - order[i])) best = j;
    for (Eigen::Index p = best - 1; p >= i; --p) swap_adjacent(pair, p);
  }
}

SchurPair schur_decompose(const Matrix& m, const Tolerance& tol,
                          std::optional<std::span<const Complex>> order) {
  require_finite(m);
  require_square(m);
  const Eigen::Index n = m.rows();
  SchurPair pair;
  if (is_upper_triangular(m)) {
    pair.U = Matrix::Identity(n, n);
    pair.T = m;
  } else {
    Eigen::ComplexSchur<Matrix> cs(n);
    cs.compute(m, true);
    if (cs.info() != Eigen::Success)
      throw Error(ErrorKind::NumericalFailure, "Schur iteration did not converge",
                  static_cast<long>(cs.getMaxIterations()));
    pair.U = cs.matrixU();
    pair.T = cs.matrixT().triangularView<Eigen::Upper>();
  }
  if (order) reorder_schur(pair, *order);

  const double scale = std::max(spectral_norm(m), std::numeric_limits<double>::min());
  const double unitarity = spectral_norm(pair.U.adjoint() * pair.U - Matrix::Identity(n, n));
  const double residual = spectral_norm(m - pair.U * pair.T * pair.U.adjoint());
  if (unitarity > tol.residual_rel || residual > tol.residual_rel * scale)
    throw Error(ErrorKind::NumericalFailure, "Schur factorization residual above tolerance");
  return pair;
}

std::vector<Complex> eigenvalues(const Matrix& m) {
  require_finite(m);
  require_square(m);
  Vector d;
  if (is_upper_triangular(m)) {
    d = m.diagonal();
  } else {
    Eigen::ComplexSchur<Matrix> cs(m.rows());
    cs.compute(m, false);
    if (cs.info() != Eigen::Success)
      throw Error(ErrorKind::NumericalFailure, "Schur iteration did not converge",
                  static_cast<long>(cs.getMaxIterations()));
    d = cs.matrixT().diagonal();
  }
  return {d.data(), d.data() + d.size()};
}

Matrix solve_upper(const Matrix& r, const Matrix& b) {
  return r.triangularView<Eigen::Upper>().solve(b);
}

}  // namespace schurgk
