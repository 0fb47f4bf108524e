#include "schurgk/subspaces.hpp"

#include <algorithm>
#include <limits>

namespace schurgk {

namespace {

void require_same_ambient(const SubspaceBasis& m, const SubspaceBasis& n) {
  if (m.ambient_dim() != n.ambient_dim())
    throw Error(ErrorKind::InvalidInput, "subspaces live in different ambient spaces");
}

constexpr std::size_t kLatticeCap = 4096;

}  // namespace

Projector projector(const SubspaceBasis& m) {
  const Matrix& v = m.columns();
  return {v * v.adjoint()};
}

double gap(const SubspaceBasis& m, const SubspaceBasis& n) {
  require_same_ambient(m, n);
  // Subspaces of different dimension are at gap exactly 1.
  if (m.dim() != n.dim()) return 1.0;
  return std::min(1.0, spectral_norm(projector(m).matrix - projector(n).matrix));
}

double semigap(const SubspaceBasis& m, const SubspaceBasis& n) {
  require_same_ambient(m, n);
  if (m.empty()) return 0.0;
  const Matrix& bm = m.columns();
  const Matrix& bn = n.columns();
  const Matrix residual = bm - bn * (bn.adjoint() * bm);
  return std::min(1.0, spectral_norm(residual));
}

double kernel_semigap(const Matrix& a, const Matrix& a0, const Tolerance& tol) {
  require_square(a);
  require_square(a0);
  if (a.rows() != a0.rows()) throw Error(ErrorKind::InvalidInput, "matrices differ in size");
  return semigap(kernel_basis(a, tol), kernel_basis(a0, tol));
}

std::vector<SubspaceBasis> kernel_lattice(const Matrix& a, const Tolerance& tol, Eigen::Index max_dim) {
  const Eigen::Index n = a.rows();
  if (max_dim < 0 || max_dim > n) throw Error(ErrorKind::InvalidInput, "max_dim must lie in [0, n]");
  const JordanStructure omega = jordan_structure(a, tol);
  const double anorm = std::max(spectral_norm(a), std::numeric_limits<double>::min());

  // powers[t][i] = basis of ker(A - lambda_t)^i, i = 0..max block.
  std::vector<std::vector<Matrix>> powers;
  for (const auto& e : omega.entries) {
    std::vector<Matrix> ks{Matrix(n, 0)};
    const Matrix shifted = a - e.eigenvalue * Matrix::Identity(n, n);
    Matrix power = Matrix::Identity(n, n);
    double scale = 1.0;
    for (int i = 1; i <= e.sizes.front(); ++i) {
      power = power * shifted;
      scale *= anorm;
      ks.push_back(null_space(power, kernel_dim(e, i), 1e-12 * scale));
    }
    powers.push_back(std::move(ks));
  }

  std::vector<SubspaceBasis> family;
  std::vector<std::size_t> level(powers.size(), 0);
  while (true) {
    Eigen::Index dim = 0;
    for (std::size_t t = 0; t < powers.size(); ++t) dim += powers[t][level[t]].cols();
    if (dim <= max_dim) {
      Matrix stacked(n, dim);
      Eigen::Index c = 0;
      for (std::size_t t = 0; t < powers.size(); ++t) {
        const Matrix& part = powers[t][level[t]];
        stacked.middleCols(c, part.cols()) = part;
        c += part.cols();
      }
      if (dim == 0) {
        family.emplace_back(n);
      } else {
        // Generalized kernels of distinct eigenvalues are independent, so the
        // stacked columns span a space of dimension exactly `dim`.
        family.push_back(SubspaceBasis::span_of(stacked, Tolerance{1e-13, std::nullopt, 1e-10}));
      }
      if (family.size() > kLatticeCap)
        throw Error(ErrorKind::UnsupportedSize, "invariant-subspace lattice too large to enumerate");
    }
    std::size_t t = 0;
    while (t < powers.size() && ++level[t] == powers[t].size()) level[t++] = 0;
    if (t == powers.size()) break;
  }
  return family;
}

HausdorffEstimate hausdorff_inv_distance(const Matrix& a, const Matrix& b, const Tolerance& tol,
                                         Eigen::Index max_dim) {
  require_square(a);
  require_square(b);
  if (a.rows() != b.rows()) throw Error(ErrorKind::InvalidInput, "matrices differ in size");
  const auto fa = kernel_lattice(a, tol, max_dim);
  const auto fb = kernel_lattice(b, tol, max_dim);
  auto directed = [](const std::vector<SubspaceBasis>& from, const std::vector<SubspaceBasis>& to) {
    double worst = 0.0;
    for (const auto& m : from) {
      double best = 1.0;
      for (const auto& n : to) best = std::min(best, gap(m, n));
      worst = std::max(worst, best);
    }
    return worst;
  };
  HausdorffEstimate est;
  est.value = std::max(directed(fa, fb), directed(fb, fa));
  est.family_a = fa.size();
  est.family_b = fb.size();
  return est;
}

}  // namespace schurgk
