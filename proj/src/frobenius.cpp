#include "schurgk/frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "schurgk/matching.hpp"

namespace schurgk {

std::vector<int> invariant_factor_degrees(const GKVector& g) {
  std::vector<int> out;
  for (int m : g.m)
    if (m > 0) out.push_back(m);
  return out;
}

bool is_nonderogatory(const JordanStructure& omega) {
  omega.validate();
  return std::all_of(omega.entries.begin(), omega.entries.end(),
                     [](const EigenBlocks& e) { return e.sizes.size() == 1; });
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct ChainPath {
  std::vector<int> positions;  // top first
  std::vector<Vector> vectors;
};

// Chains of one eigenvalue with distinct leading positions, longest first.
std::vector<ChainPath> triangular_chains(const Matrix& t0, const EigenBlocks& entry, const std::vector<int>& pos,
                                         double zero) {
  const Eigen::Index n = t0.rows();
  const auto a = static_cast<Eigen::Index>(pos.size());
  Matrix nil = t0;
  nil.diagonal().array() -= entry.eigenvalue;
  Matrix na = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < a; ++i) na = na * nil;

  // One generalized eigenvector per position: back substitution with the
  // position's own free variable 1 and the others 0.
  std::vector<char> is_free(static_cast<std::size_t>(n), 0);
  for (int s : pos) is_free[static_cast<std::size_t>(s)] = 1;
  Matrix g = Matrix::Zero(n, a);
  for (Eigen::Index c = 0; c < a; ++c) {
    const int s = pos[static_cast<std::size_t>(c)];
    g(s, c) = 1.0;
    for (int j = s - 1; j >= 0; --j) {
      if (is_free[static_cast<std::size_t>(j)]) continue;
      const Complex acc = na.row(j).segment(j + 1, s - j) * g.col(c).segment(j + 1, s - j);
      g(j, c) = -acc / na(j, j);
    }
    const double scale = std::max(spectral_norm(na), 1.0) * g.col(c).norm();
    if ((na * g.col(c)).norm() > 1e-6 * scale)
      throw Error(ErrorKind::ChainConstructionFailure,
                  "ill-conditioned structure: generalized eigenvector back substitution is inconsistent");
  }

  // Coordinates of the nilpotent part in that basis; rows at the positions
  // read them off because the basis is the identity there.
  Matrix ng = nil * g;
  Matrix m(a, a);
  for (Eigen::Index r = 0; r < a; ++r) m.row(r) = ng.row(pos[static_cast<std::size_t>(r)]);
  m = m.triangularView<Eigen::StrictlyUpper>();

  // Lead pattern under elimination by earlier columns.
  std::vector<std::size_t> next(static_cast<std::size_t>(a), kNone);
  std::vector<std::size_t> owner(static_cast<std::size_t>(a), kNone);
  Matrix red = m;
  for (Eigen::Index c = 0; c < a; ++c) {
    while (true) {
      Eigen::Index lead = -1;
      for (Eigen::Index r = a - 1; r >= 0; --r)
        if (std::abs(red(r, c)) > zero) {
          lead = r;
          break;
        }
      if (lead < 0) {
        red.col(c).setZero();
        break;
      }
      const std::size_t o = owner[static_cast<std::size_t>(lead)];
      if (o == kNone) {
        owner[static_cast<std::size_t>(lead)] = static_cast<std::size_t>(c);
        next[static_cast<std::size_t>(c)] = static_cast<std::size_t>(lead);
        break;
      }
      const auto oc = static_cast<Eigen::Index>(o);
      red.col(c) -= (red(lead, c) / red(lead, oc)) * red.col(oc);
      red(lead, c) = 0.0;
    }
  }

  // Upper triangular W with M W = W P, P the partial permutation above.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> unknowns;
  Eigen::MatrixXi index = Eigen::MatrixXi::Constant(a, a, -1);
  for (Eigen::Index j = 0; j < a; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      index(i, j) = static_cast<int>(unknowns.size());
      unknowns.emplace_back(i, j);
    }
  const auto u = static_cast<Eigen::Index>(unknowns.size());
  Matrix sys = Matrix::Zero(a * a, u);
  for (Eigen::Index r = 0; r < a; ++r)
    for (Eigen::Index c = 0; c < a; ++c) {
      const Eigen::Index row = r * a + c;
      for (Eigen::Index i = 0; i <= c; ++i) sys(row, index(i, c)) += m(r, i);
      const std::size_t k = next[static_cast<std::size_t>(c)];
      if (k != kNone && r <= static_cast<Eigen::Index>(k)) sys(row, index(r, static_cast<Eigen::Index>(k))) -= 1.0;
    }
  const double sys_scale = std::max(spectral_norm(sys), 1.0);
  const Matrix ker = null_space(sys, 0, 1e-9 * sys_scale);
  if (ker.cols() == 0)
    throw Error(ErrorKind::ChainConstructionFailure, "no upper triangular Jordan basis for this eigenvalue");

  auto assemble = [&](const Vector& coeffs) {
    const Vector flat = ker * coeffs;
    Matrix w = Matrix::Zero(a, a);
    for (Eigen::Index k = 0; k < u; ++k) w(unknowns[static_cast<std::size_t>(k)].first,
                                           unknowns[static_cast<std::size_t>(k)].second) = flat(k);
    return w;
  };
  auto diag_ok = [&](const Matrix& w) {
    const double big = w.cwiseAbs().maxCoeff();
    return big > 0.0 && w.diagonal().cwiseAbs().minCoeff() > 1e-6 * big;
  };
  Vector identity(u);
  for (Eigen::Index k = 0; k < u; ++k)
    identity(k) = unknowns[static_cast<std::size_t>(k)].first == unknowns[static_cast<std::size_t>(k)].second ? 1.0 : 0.0;
  Matrix w = assemble(ker.adjoint() * identity);
  for (int attempt = 1; !diag_ok(w) && attempt <= 8; ++attempt) {
    Vector coeffs(ker.cols());
    for (Eigen::Index k = 0; k < ker.cols(); ++k)
      coeffs(k) = Complex(std::cos(1.3 * attempt * (k + 1)), std::sin(0.7 * attempt * (k + 2)));
    w = assemble(coeffs);
  }
  if (!diag_ok(w))
    throw Error(ErrorKind::ChainConstructionFailure, "no upper triangular Jordan basis for this eigenvalue");

  const Matrix basis = g * w;
  std::vector<char> has_parent(static_cast<std::size_t>(a), 0);
  for (std::size_t c = 0; c < static_cast<std::size_t>(a); ++c)
    if (next[c] != kNone) has_parent[next[c]] = 1;
  std::vector<ChainPath> chains;
  for (std::size_t c = 0; c < static_cast<std::size_t>(a); ++c) {
    if (has_parent[c]) continue;
    ChainPath p;
    for (std::size_t k = c; k != kNone; k = next[k]) {
      p.positions.push_back(pos[k]);
      p.vectors.push_back(basis.col(static_cast<Eigen::Index>(k)));
    }
    chains.push_back(std::move(p));
  }
  std::stable_sort(chains.begin(), chains.end(),
                   [](const ChainPath& x, const ChainPath& y) { return x.positions.size() > y.positions.size(); });
  std::vector<int> lengths;
  for (const auto& p : chains) lengths.push_back(static_cast<int>(p.positions.size()));
  if (lengths != entry.sizes)
    throw Error(ErrorKind::ChainConstructionFailure,
                "ill-conditioned structure: triangular chains disagree with the Jordan structure");
  return chains;
}

}  // namespace

TriangularJordanFactorization triangular_jordan(const Matrix& t0, const JordanStructure& omega, const Tolerance& tol) {
  require_square(t0);
  require_finite(t0);
  tol.validate();
  if (!is_upper_triangular(t0)) throw Error(ErrorKind::InvalidInput, "T0 must be upper triangular");
  omega.validate();
  const Eigen::Index n = t0.rows();
  if (omega.ambient_dim != n) throw Error(ErrorKind::InvalidInput, "structure does not match matrix size");

  std::vector<std::vector<int>> positions(omega.entries.size());
  for (Eigen::Index s = 0; s < n; ++s) positions[omega.nearest(t0(s, s))].push_back(static_cast<int>(s));
  for (std::size_t t = 0; t < omega.entries.size(); ++t)
    if (static_cast<int>(positions[t].size()) != omega.entries[t].multiplicity())
      throw Error(ErrorKind::StructureMismatch, "diagonal of T0 disagrees with the structure's multiplicities");

  const double zero = tol.rank_rel * std::max(spectral_norm(t0), std::numeric_limits<double>::min());
  std::vector<std::vector<ChainPath>> chains;
  std::size_t factors = 0;
  for (std::size_t t = 0; t < omega.entries.size(); ++t) {
    chains.push_back(triangular_chains(t0, omega.entries[t], positions[t], zero));
    factors = std::max(factors, chains.back().size());
  }

  TriangularJordanFactorization f;
  f.S0 = Matrix::Zero(n, n);
  f.J0hat = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < factors; ++j) {
    struct Part {
      const ChainPath* path;
      std::size_t depth;
    };
    std::vector<Part> parts;
    Vector v = Vector::Zero(n);
    for (const auto& per_value : chains)
      if (j < per_value.size()) {
        parts.push_back({&per_value[j], 0});
        v += per_value[j].vectors.front();
      }
    v /= v.norm();

    std::vector<int> block;
    while (true) {
      int lead = -1;
      Part* owner = nullptr;
      for (auto& p : parts)
        if (p.depth < p.path->positions.size() && p.path->positions[p.depth] > lead) {
          lead = p.path->positions[p.depth];
          owner = &p;
        }
      if (!owner) break;
      if (!block.empty()) f.J0hat(lead, block.back()) = 1.0;
      block.push_back(lead);
      f.S0.col(lead) = v;
      f.J0hat(lead, lead) = t0(lead, lead);
      ++owner->depth;
      v = t0 * v - t0(lead, lead) * v;
    }
    f.block_map.push_back(std::move(block));
  }
  f.S0 = f.S0.triangularView<Eigen::Upper>();

  const double dmax = f.S0.diagonal().cwiseAbs().maxCoeff();
  if (f.S0.diagonal().cwiseAbs().minCoeff() <= tol.rank_rel * dmax)
    throw Error(ErrorKind::RankDeficiency, "triangular Jordan basis is numerically singular");
  if (factorization_defect(t0, f) > tol.residual_rel)
    throw Error(ErrorKind::NumericalFailure, "triangular Jordan factorization residual above tolerance");
  return f;
}

TriangularJordanFactorization triangular_jordan(const Matrix& t0, const Tolerance& tol) {
  return triangular_jordan(t0, jordan_structure(t0, tol), tol);
}

double factorization_defect(const Matrix& t0, const TriangularJordanFactorization& f) {
  const Eigen::Index n = t0.rows();
  if (f.S0.rows() != n || f.J0hat.rows() != n) return std::numeric_limits<double>::infinity();
  if (!is_upper_triangular(f.S0) || !is_upper_triangular(f.J0hat)) return std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    if (f.J0hat(i, i) != t0(i, i) || f.S0(i, i) == 0.0) return std::numeric_limits<double>::infinity();
  const double scale = std::max(spectral_norm(t0), std::numeric_limits<double>::min());
  return spectral_norm(t0 * f.S0 - f.S0 * f.J0hat) / scale;
}

// ---------------------------------------------------------------------------

HolderMatch holder_match(const Matrix& t0, const Matrix& b, const Tolerance& tol,
                         const std::optional<JordanStructure>& omega_b) {
  require_square(t0);
  require_square(b);
  require_finite(b);
  const Eigen::Index n = t0.rows();
  if (b.rows() != n) throw Error(ErrorKind::InvalidInput, "T0 and B differ in size");
  if (!is_upper_triangular(t0)) throw Error(ErrorKind::InvalidInput, "T0 must be upper triangular");

  HolderMatch out;
  const JordanStructure ot = jordan_structure(t0, tol);
  const JordanStructure ob = omega_b ? *omega_b : jordan_structure(b, tol);
  out.warnings = ot.warnings;
  out.warnings.insert(out.warnings.end(), ob.warnings.begin(), ob.warnings.end());
  if (!same_gk(gk_numbers(ot), gk_numbers(ob)))
    throw Error(ErrorKind::StructureMismatch, "GK numbers of T0 and B differ");

  // Every eigenvalue of B joins the nearest eigenvalue of T0; the GK numbers
  // of each group must add up to those of its T0 eigenvalue.
  std::vector<std::vector<std::size_t>> group(ot.entries.size());
  for (std::size_t u = 0; u < ob.entries.size(); ++u) {
    const std::size_t t = ot.nearest(ob.entries[u].eigenvalue);
    group[t].push_back(u);
    out.max_mismatch = std::max(out.max_mismatch, std::abs(ob.entries[u].eigenvalue - ot.entries[t].eigenvalue));
  }
  for (std::size_t t = 0; t < ot.entries.size(); ++t) {
    std::vector<int> sum(ot.entries[t].sizes.size(), 0);
    for (std::size_t u : group[t]) {
      const auto& sizes = ob.entries[u].sizes;
      if (sizes.size() > sum.size())
        throw Error(ErrorKind::StructureMismatch, "eigenvalue cluster of B has too many blocks");
      for (std::size_t k = 0; k < sizes.size(); ++k) sum[k] += sizes[k];
    }
    if (sum != ot.entries[t].sizes)
      throw Error(ErrorKind::StructureMismatch, "eigenvalue clusters of B do not split the GK numbers of T0");
  }

  const TriangularJordanFactorization f = triangular_jordan(t0, ot, tol);

  Matrix jhat = f.J0hat;
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < f.block_map.size(); ++j) {
    const auto& block = f.block_map[j];
    // Invariant factor j holds sizes[j] positions of each T0 eigenvalue;
    // they receive the eigenvalues of its group, sizes[j] of B's each.
    std::map<std::size_t, std::vector<Complex>> queue;
    std::map<std::size_t, Eigen::Index> kdim;
    Eigen::Index kernel = 0;
    for (std::size_t t = 0; t < ot.entries.size(); ++t)
      for (std::size_t u : group[t]) {
        const auto& e = ob.entries[u];
        if (j < e.sizes.size()) {
          queue[t].insert(queue[t].end(), static_cast<std::size_t>(e.sizes[j]), e.eigenvalue);
          kernel += kernel_dim(e, e.sizes[j]);
        }
      }
    std::map<std::size_t, std::size_t> used;
    const std::size_t m = block.size();
    Chain target;
    target.shifts.resize(m);
    target.vectors.resize(m);
    std::vector<Complex> mus(m);
    for (std::size_t k = 0; k < m; ++k) {
      const int p = block[k];
      const std::size_t t = ot.nearest(t0(p, p));
      const Complex mu = queue[t].at(used[t]++);
      jhat(p, p) = mu;
      // Chain vectors run bottom to top.
      target.vectors[m - 1 - k] = f.S0.col(p);
      target.shifts[m - 1 - k] = t0(p, p);
      mus[m - 1 - k] = mu;
    }
    const Chain close = close_chain(target, b, mus, tol, kernel);
    for (std::size_t k = 0; k < m; ++k) s.col(block[k]) = close.vectors[m - 1 - k];
  }

  const QR qr = qr_decompose(s, tol);
  Matrix q0 = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) q0(i, i) = f.S0(i, i) / std::abs(f.S0(i, i));
  out.U = qr.Q * q0.adjoint();
  const Matrix rj = qr.R * jhat;
  const Matrix core = qr.R.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(rj);
  out.T = q0 * Matrix(core.triangularView<Eigen::Upper>()) * q0.adjoint();

  const double bnorm = std::max(spectral_norm(b), std::numeric_limits<double>::min());
  out.residual = spectral_norm(out.U.adjoint() * b * out.U - out.T) / bnorm;
  out.unitarity = spectral_norm(out.U.adjoint() * out.U - Matrix::Identity(n, n));
  out.distance = spectral_norm(Matrix::Identity(n, n) - out.U) + spectral_norm(out.T - t0);
  out.reference = std::pow(spectral_norm(b - t0), 1.0 / static_cast<double>(n));
  return out;
}

}  // namespace schurgk
