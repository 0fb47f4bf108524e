#include "schurgk/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace schurgk {

const char* to_string(MatchMode mode) { return mode == MatchMode::Lipschitz ? "lipschitz" : "holder"; }

MatchMode parse_match_mode(const std::string& text) {
  if (text == "lipschitz") return MatchMode::Lipschitz;
  if (text == "holder") return MatchMode::Holder;
  throw Error(ErrorKind::InvalidInput, "unknown match mode '" + text + "'");
}

// ---------------------------------------------------------------------------
// Assignment

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Kuhn augmenting paths restricted to edges with cost <= limit; rows try
// their cheapest columns first.
std::optional<std::vector<std::size_t>> match_below(const Eigen::MatrixXd& cost, double limit,
                                                    const std::vector<std::vector<std::size_t>>& prefs) {
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> col_owner(n, none);
  std::vector<char> seen;
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t c : prefs[row]) {
      if (cost(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) > limit || seen[c]) continue;
      seen[c] = 1;
      if (col_owner[c] == none || self(self, col_owner[c])) {
        col_owner[c] = row;
        return true;
      }
    }
    return false;
  };
  for (std::size_t r = 0; r < n; ++r) {
    seen.assign(n, 0);
    if (!augment(augment, r)) return std::nullopt;
  }
  std::vector<std::size_t> result(n);
  for (std::size_t c = 0; c < n; ++c) result[col_owner[c]] = c;
  return result;
}

}  // namespace

std::optional<std::vector<std::size_t>> bottleneck_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw Error(ErrorKind::InvalidInput, "assignment needs a square cost matrix");
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  if (n == 0) return std::vector<std::size_t>{};

  std::vector<std::vector<std::size_t>> prefs(n);
  std::vector<double> levels;
  for (std::size_t r = 0; r < n; ++r) {
    prefs[r].resize(n);
    std::iota(prefs[r].begin(), prefs[r].end(), 0);
    std::stable_sort(prefs[r].begin(), prefs[r].end(), [&](std::size_t a, std::size_t b) {
      return cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) <
             cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b));
    });
    for (std::size_t c = 0; c < n; ++c) {
      const double v = cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (std::isnan(v)) throw Error(ErrorKind::InvalidInput, "NaN in assignment cost");
      if (v < kInf) levels.push_back(v);
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty() || !match_below(cost, levels.back(), prefs)) return std::nullopt;

  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (match_below(cost, levels[mid], prefs))
      hi = mid;
    else
      lo = mid + 1;
  }
  return match_below(cost, levels[lo], prefs);
}

Pairing pair_eigenvalues(std::span<const Complex> lams, std::span<const Complex> mus, MatchMode mode,
                         double radius) {
  if (lams.size() != mus.size())
    throw Error(ErrorKind::StructureMismatch, "eigenvalue lists differ in total multiplicity");
  const std::size_t n = lams.size();
  Pairing p;
  p.mode = mode;
  const auto lc = cluster_eigenvalues(lams, radius);

  if (mode == MatchMode::Lipschitz) {
    const auto mc = cluster_eigenvalues(mus, radius);
    if (lc.size() != mc.size())
      throw Error(ErrorKind::StructureMismatch, "different numbers of distinct eigenvalues");
    const auto q = static_cast<Eigen::Index>(lc.size());
    Eigen::MatrixXd cost(q, q);
    for (Eigen::Index i = 0; i < q; ++i)
      for (Eigen::Index j = 0; j < q; ++j)
        cost(i, j) = lc[static_cast<std::size_t>(i)].multiplicity == mc[static_cast<std::size_t>(j)].multiplicity
                         ? std::abs(lc[static_cast<std::size_t>(i)].center - mc[static_cast<std::size_t>(j)].center)
                         : kInf;
    const auto assign = bottleneck_assignment(cost);
    if (!assign) throw Error(ErrorKind::StructureMismatch, "eigenvalue multiplicities cannot be matched");
    for (std::size_t i = 0; i < lc.size(); ++i) {
      const auto& a = lc[i].members;
      const auto& b = mc[(*assign)[i]].members;
      p.order0.insert(p.order0.end(), a.begin(), a.end());
      p.order1.insert(p.order1.end(), b.begin(), b.end());
    }
  } else {
    std::vector<Complex> center(n);
    for (const auto& c : lc)
      for (std::size_t i : c.members) center[i] = c.center;
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd cost(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        cost(i, j) = std::abs(center[static_cast<std::size_t>(i)] - mus[static_cast<std::size_t>(j)]);
    const auto assign = bottleneck_assignment(cost);
    // A complete bipartite graph always admits a matching.
    for (std::size_t i = 0; i < n; ++i) {
      p.order0.push_back(i);
      p.order1.push_back((*assign)[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    p.max_mismatch = std::max(p.max_mismatch, std::abs(lams[p.order0[i]] - mus[p.order1[i]]));
  return p;
}

std::vector<std::size_t> pair_structures(const JordanStructure& a, const JordanStructure& b) {
  if (a.ambient_dim != b.ambient_dim || a.entries.size() != b.entries.size())
    throw Error(ErrorKind::StructureMismatch, "Jordan structures differ");
  const auto q = static_cast<Eigen::Index>(a.entries.size());
  Eigen::MatrixXd cost(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) {
      const auto& ea = a.entries[static_cast<std::size_t>(i)];
      const auto& eb = b.entries[static_cast<std::size_t>(j)];
      cost(i, j) = ea.sizes == eb.sizes ? std::abs(ea.eigenvalue - eb.eigenvalue) : kInf;
    }
  const auto assign = bottleneck_assignment(cost);
  if (!assign) throw Error(ErrorKind::StructureMismatch, "Jordan structures differ");
  return *assign;
}

// ---------------------------------------------------------------------------
// Chains

namespace {

Matrix shifted(const Matrix& a, Complex s) {
  Matrix out = a;
  out.diagonal().array() -= s;
  return out;
}

// Orthonormal basis of ker (A - lambda)^power with its known dimension.
Matrix power_kernel(const Matrix& nil, int power, Eigen::Index dim) {
  Matrix p = Matrix::Identity(nil.rows(), nil.cols());
  for (int i = 0; i < power; ++i) p = p * nil;
  return null_space(p, dim, 0.0);
}

}  // namespace

ChainSet jordan_chains(const Matrix& a, const JordanStructure& omega, const Tolerance& tol) {
  require_square(a);
  require_finite(a);
  omega.validate();
  if (omega.ambient_dim != a.rows()) throw Error(ErrorKind::InvalidInput, "structure does not match matrix size");
  const Eigen::Index n = a.rows();
  ChainSet set;
  set.ambient_dim = n;

  for (const auto& e : omega.entries) {
    const Matrix nil = shifted(a, e.eigenvalue);
    std::vector<Chain> local;
    for (int s : e.sizes) {
      const Matrix top_space = power_kernel(nil, s, kernel_dim(e, s));
      Matrix avoid = power_kernel(nil, s - 1, kernel_dim(e, s - 1));
      for (const auto& c : local) {
        avoid.conservativeResize(Eigen::NoChange, avoid.cols() + 1);
        avoid.col(avoid.cols() - 1) = c.vectors[static_cast<std::size_t>(s - 1)];
      }
      const SubspaceBasis avoid_basis = SubspaceBasis::span_of(avoid, Tolerance{1e-12, std::nullopt, 1e-10});
      const Matrix& w = avoid_basis.columns();
      const Matrix fresh = top_space - w * (w.adjoint() * top_space);
      Eigen::JacobiSVD<Matrix> svd(fresh, Eigen::ComputeThinU);
      if (svd.singularValues().size() == 0 || svd.singularValues()(0) <= std::sqrt(tol.rank_rel))
        throw Error(ErrorKind::ChainConstructionFailure, "no chain top outside the chosen chains");
      Chain c;
      c.shifts.assign(static_cast<std::size_t>(s), e.eigenvalue);
      c.vectors.resize(static_cast<std::size_t>(s));
      Vector top = svd.matrixU().col(0);
      // Fix the phase: the largest entry of the top vector is real positive.
      Eigen::Index big = 0;
      top.cwiseAbs().maxCoeff(&big);
      top *= std::conj(top(big)) / std::abs(top(big));
      c.vectors.back() = top;
      for (int j = s - 1; j > 0; --j)
        c.vectors[static_cast<std::size_t>(j - 1)] = nil * c.vectors[static_cast<std::size_t>(j)];
      local.push_back(std::move(c));
    }
    for (auto& c : local) set.chains.push_back(std::move(c));
  }
  return set;
}

double verify_chains(const Matrix& a, const ChainSet& set) {
  const double anorm = std::max(spectral_norm(a), 1.0);
  double worst = 0.0;
  for (const auto& c : set.chains) {
    double scale = 0.0;
    for (const auto& v : c.vectors) scale = std::max(scale, v.norm());
    if (scale == 0.0) return kInf;
    for (std::size_t j = 0; j < c.length(); ++j) {
      Vector r = shifted(a, c.shifts[j]) * c.vectors[j];
      if (j > 0) r -= c.vectors[j - 1];
      worst = std::max(worst, r.norm() / (anorm * scale));
    }
  }
  return worst;
}

Chain close_chain(const Chain& target, const Matrix& b, std::span<const Complex> mus, const Tolerance& tol,
                  std::optional<Eigen::Index> kernel_dim) {
  const std::size_t m = target.length();
  if (m == 0 || mus.size() != m) throw Error(ErrorKind::InvalidInput, "shift list must match the chain length");
  require_square(b);
  const Eigen::Index n = b.rows();
  Matrix product = Matrix::Identity(n, n);
  for (Complex mu : mus) product = product * shifted(b, mu);
  const double pnorm = spectral_norm(product);
  const Eigen::Index dim = kernel_dim.value_or(static_cast<Eigen::Index>(m));
  const double cutoff = (kernel_dim ? 1e-14 : tol.rank_rel) * pnorm;
  const Matrix k = null_space(product, dim, cutoff);

  const Vector& top = target.vectors.back();
  Chain out;
  out.shifts.assign(mus.begin(), mus.end());
  out.vectors.resize(m);
  out.vectors.back() = k * (k.adjoint() * top);
  const double floor = std::sqrt(tol.rank_rel);
  if (out.vectors.back().norm() <= floor * top.norm())
    throw Error(ErrorKind::ChainConstructionFailure, "projection of the chain top onto the kernel degenerates");
  for (std::size_t j = m - 1; j > 0; --j) out.vectors[j - 1] = shifted(b, mus[j]) * out.vectors[j];
  if (out.vectors.front().norm() <= floor * target.vectors.front().norm())
    throw Error(ErrorKind::ChainConstructionFailure, "close chain collapses before reaching an eigenvector");
  return out;
}

// ---------------------------------------------------------------------------
// Deflation

namespace {

std::size_t first_block_of_size(const EigenBlocks& e, int size) {
  for (std::size_t i = 0; i < e.sizes.size(); ++i)
    if (e.sizes[i] == size) return i;
  throw Error(ErrorKind::ChainConstructionFailure, "no Jordan block of the required length");
}

void require_triangular(const Matrix& t0) {
  require_square(t0);
  require_finite(t0);
  if (!is_upper_triangular(t0)) throw Error(ErrorKind::InvalidInput, "T0 must be upper triangular");
}

}  // namespace

DeflationStep deflation_step(const Matrix& t0, const Matrix& b, const Tolerance& tol,
                             const std::optional<JordanStructure>& omega_t0,
                             const std::optional<JordanStructure>& omega_b) {
  require_triangular(t0);
  require_square(b);
  require_finite(b);
  const Eigen::Index n = t0.rows();
  if (b.rows() != n) throw Error(ErrorKind::InvalidInput, "T0 and B differ in size");
  if (n < 2) throw Error(ErrorKind::InvalidInput, "deflation needs n >= 2");

  const JordanStructure ot = omega_t0 ? *omega_t0 : jordan_structure(t0, tol);
  const JordanStructure ob = omega_b ? *omega_b : jordan_structure(b, tol);
  const auto pairing = pair_structures(ot, ob);

  const Complex lambda = t0(0, 0);
  const std::size_t t = ot.nearest(lambda);
  const EigenBlocks& entry = ot.entries[t];
  const Matrix nil = shifted(t0, lambda);

  // Height of e1: the longest chain of T0 ending in e1.
  Vector e1 = Vector::Zero(n);
  e1(0) = 1.0;
  int h = 1;
  Vector top = e1;
  Matrix power = Matrix::Identity(n, n);
  for (int m = 2; m <= entry.sizes.front(); ++m) {
    power = power * nil;
    const Eigen::Index rank = n - kernel_dim(entry, m - 1);
    Eigen::JacobiSVD<Matrix> svd(power, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector coeff = svd.matrixU().leftCols(rank).adjoint() * e1;
    const Vector x = svd.matrixV().leftCols(rank) *
                     (coeff.array() / svd.singularValues().head(rank).array().cast<Complex>()).matrix();
    if ((power * x - e1).norm() > 1e-6) break;
    h = m;
    top = x;
  }
  const std::size_t block_t = first_block_of_size(entry, h);

  Chain target;
  target.shifts.assign(static_cast<std::size_t>(h), lambda);
  target.vectors.resize(static_cast<std::size_t>(h));
  target.vectors.back() = top;
  for (int j = h - 1; j > 0; --j)
    target.vectors[static_cast<std::size_t>(j - 1)] = nil * target.vectors[static_cast<std::size_t>(j)];

  const std::size_t u = pairing[t];
  const EigenBlocks& entry_b = ob.entries[u];
  const std::vector<Complex> mus(static_cast<std::size_t>(h), entry_b.eigenvalue);
  const Chain close = close_chain(target, b, mus, tol, kernel_dim(entry_b, h));

  Vector g1 = close.vectors.front();
  if (std::abs(g1(0)) > 0.0) g1 *= std::conj(g1(0)) / std::abs(g1(0));

  DeflationStep out;
  out.V1 = unitary_completion(g1);
  const Matrix c = out.V1.adjoint() * b * out.V1;
  out.column_residual = c.col(0).tail(n - 1).norm();
  out.mu1 = c(0, 0);
  out.T1 = t0.bottomRightCorner(n - 1, n - 1);
  out.B1 = c.bottomRightCorner(n - 1, n - 1);
  out.chain_length = h;
  out.omega_t1 = truncate_structure(ot, t, block_t);
  out.omega_b1 = truncate_structure(ob, u, first_block_of_size(entry_b, h));
  return out;
}

LipschitzMatch lipschitz_match(const Matrix& t0, const Matrix& b, const Tolerance& tol,
                               const std::optional<JordanStructure>& omega_b) {
  require_triangular(t0);
  require_square(b);
  require_finite(b);
  const Eigen::Index n = t0.rows();
  if (b.rows() != n) throw Error(ErrorKind::InvalidInput, "T0 and B differ in size");

  LipschitzMatch out;
  JordanStructure ot = jordan_structure(t0, tol);
  JordanStructure ob = omega_b ? *omega_b : jordan_structure(b, tol);
  out.warnings = ot.warnings;
  out.warnings.insert(out.warnings.end(), ob.warnings.begin(), ob.warnings.end());

  out.Vhat = Matrix::Identity(n, n);
  Matrix bj = b;
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    DeflationStep step;
    try {
      step = deflation_step(t0.bottomRightCorner(n - j, n - j), bj, tol, ot, ob);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (deflation step " + std::to_string(j) + ")", j);
    }
    out.Vhat.rightCols(n - j) = out.Vhat.rightCols(n - j) * step.V1;
    bj = step.B1;
    ot = std::move(step.omega_t1);
    ob = std::move(step.omega_b1);
  }

  Matrix t = out.Vhat.adjoint() * b * out.Vhat;
  out.lower_residual = strict_lower_norm(t);
  out.T = t.triangularView<Eigen::Upper>();
  const double input = spectral_norm(t0 - b);
  const double reached = spectral_norm(Matrix::Identity(n, n) - out.Vhat) + spectral_norm(out.T - t0);
  out.ratio = input > 0.0 ? reached / input : 0.0;
  return out;
}

double schur_distance(const SchurPair& p0, const SchurPair& p1) {
  if (p0.U.rows() != p1.U.rows() || p0.T.rows() != p1.T.rows())
    throw Error(ErrorKind::InvalidInput, "Schur pairs differ in size");
  return spectral_norm(p1.U - p0.U) + spectral_norm(p1.T - p0.T);
}

}  // namespace schurgk
