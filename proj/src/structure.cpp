#include "schurgk/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace schurgk {

int EigenBlocks::multiplicity() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

void JordanStructure::validate() const {
  int total = 0;
  for (const auto& e : entries) {
    if (e.sizes.empty()) throw Error(ErrorKind::InvalidInput, "eigenvalue without blocks");
    for (std::size_t i = 0; i < e.sizes.size(); ++i) {
      if (e.sizes[i] <= 0) throw Error(ErrorKind::InvalidInput, "block sizes must be positive");
      if (i > 0 && e.sizes[i] > e.sizes[i - 1])
        throw Error(ErrorKind::InvalidInput, "block sizes must be non-increasing");
    }
    total += e.multiplicity();
  }
  if (total != ambient_dim)
    throw Error(ErrorKind::InvalidInput, "block sizes do not sum to the ambient dimension");
}

std::size_t JordanStructure::nearest(Complex value) const {
  if (entries.empty()) throw Error(ErrorKind::InvalidInput, "empty structure");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (std::abs(entries[i].eigenvalue - value) < std::abs(entries[best].eigenvalue - value))
      best = i;
  return best;
}

int JordanStructure::max_block() const {
  int m = 0;
  for (const auto& e : entries) m = std::max(m, e.sizes.front());
  return m;
}

// ---------------------------------------------------------------------------

std::vector<Cluster> cluster_eigenvalues(std::span<const Complex> values, double radius) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<Cluster> out;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(out.size());
      out.push_back({});
    }
    auto& c = out[static_cast<std::size_t>(slot[r])];
    c.members.push_back(i);
    c.center += values[i];
    ++c.multiplicity;
  }
  for (auto& c : out) c.center /= static_cast<double>(c.multiplicity);
  return out;
}

double default_cluster_radius(const Matrix& a, const Tolerance& tol) {
  const double n = static_cast<double>(a.rows());
  return spectral_norm(a) * std::pow(tol.rank_rel, 1.0 / n);
}

namespace {

struct WeyrResult {
  std::vector<int> sizes;
  bool indecisive = false;
  bool not_nilpotent = false;
};

// Block sizes of the nearly nilpotent k x k matrix `nil`; `floor` is the
// absolute level below which `nil` counts as zero.
WeyrResult weyr_sizes(const Matrix& nil, double floor, const Tolerance& tol) {
  const Eigen::Index k = nil.rows();
  WeyrResult res;
  const double nrm = spectral_norm(nil);
  std::vector<int> kernel_dims{0};
  if (nrm <= floor) {
    kernel_dims.push_back(static_cast<int>(k));
  } else {
    Matrix power = Matrix::Identity(k, k);
    double ref = 1.0;
    for (Eigen::Index i = 1; i <= k; ++i) {
      power = power * nil;
      ref *= nrm;
      const Eigen::VectorXd s = singular_values(power);
      const double cutoff = tol.rank_rel * std::max(s(0), ref);
      int rank = 0;
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        if (s(j) > cutoff) ++rank;
        if (s(j) > 0.1 * cutoff && s(j) < 10.0 * cutoff) res.indecisive = true;
      }
      const int dim = std::max(static_cast<int>(k) - rank, kernel_dims.back());
      kernel_dims.push_back(dim);
      if (dim == k) break;
    }
    if (kernel_dims.back() != k) {
      res.not_nilpotent = true;
      kernel_dims.back() = static_cast<int>(k);
    }
  }
  // Weyr characteristic, then its conjugate partition.
  std::vector<int> weyr;
  for (std::size_t i = 1; i < kernel_dims.size(); ++i) weyr.push_back(kernel_dims[i] - kernel_dims[i - 1]);
  const int largest = weyr.empty() ? 0 : *std::max_element(weyr.begin(), weyr.end());
  for (int j = 1; j <= largest; ++j) {
    int count = 0;
    for (int w : weyr) count += (w >= j) ? 1 : 0;
    res.sizes.push_back(count);
  }
  return res;
}

}  // namespace

JordanStructure jordan_structure(const Matrix& a, const Tolerance& tol) {
  require_finite(a);
  require_square(a);
  tol.validate();
  const Eigen::Index n = a.rows();
  const bool triangular = is_upper_triangular(a);
  const double anorm = spectral_norm(a);

  const SchurPair schur = schur_decompose(a, tol);
  const Vector d = schur.T.diagonal();
  const std::vector<Complex> diag(d.data(), d.data() + n);

  // Diagonal entries of a triangular input are exact eigenvalues, so only
  // rounding-level coincidences are merged by default.
  const double radius = tol.cluster_radius.value_or(
      triangular ? 64.0 * std::numeric_limits<double>::epsilon() * anorm
                 : default_cluster_radius(a, tol));
  const auto clusters = cluster_eigenvalues(diag, radius);

  JordanStructure omega;
  omega.ambient_dim = static_cast<int>(n);
  const double floor = tol.rank_rel * std::max(anorm, std::numeric_limits<double>::min());
  for (const auto& c : clusters) {
    SchurPair work = schur;
    std::vector<Complex> order;
    for (std::size_t idx : c.members) order.push_back(diag[idx]);
    reorder_schur(work, order);
    const Eigen::Index k = c.multiplicity;
    Matrix nil = work.T.topLeftCorner(k, k);
    nil.diagonal().array() -= c.center;

    const WeyrResult w = weyr_sizes(nil, floor, tol);
    std::ostringstream where;
    where << "eigenvalue (" << c.center.real() << "," << c.center.imag() << ")";
    if (w.indecisive)
      omega.warnings.push_back("ill-conditioned structure: singular value within a decade of the rank cutoff at " +
                               where.str());
    if (w.not_nilpotent)
      omega.warnings.push_back("ill-conditioned structure: cluster is not numerically a single eigenvalue at " +
                               where.str());
    omega.entries.push_back({c.center, w.sizes});
  }
  omega.validate();
  return omega;
}

std::vector<int> dual_partition(std::span<const int> m, std::size_t n) {
  std::vector<int> k(n, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    int best = 0;
    for (std::size_t l = 1; l <= m.size(); ++l)
      if (m[l - 1] >= static_cast<int>(i)) best = static_cast<int>(l);
    k[i - 1] = best;
  }
  return k;
}

GKVector gk_numbers(const JordanStructure& omega) {
  omega.validate();
  const auto n = static_cast<std::size_t>(omega.ambient_dim);
  GKVector g;
  g.m.assign(n, 0);
  for (const auto& e : omega.entries)
    for (std::size_t i = 0; i < e.sizes.size(); ++i) g.m[i] += e.sizes[i];
  g.k = dual_partition(g.m, n);
  return g;
}

bool same_jordan_structure(const JordanStructure& omega1, const JordanStructure& omega2,
                           std::span<const std::size_t> pairing) {
  const std::size_t q = omega1.entries.size();
  // Different numbers of distinct eigenvalues can never match.
  if (omega2.entries.size() != q) return false;
  if (pairing.size() != q)
    throw Error(ErrorKind::InvalidInput, "pairing is not a bijection of the eigenvalue lists");
  std::vector<bool> seen(q, false);
  for (std::size_t p : pairing) {
    if (p >= q || seen[p]) throw Error(ErrorKind::InvalidInput, "pairing is not a bijection of the eigenvalue lists");
    seen[p] = true;
  }
  if (omega1.ambient_dim != omega2.ambient_dim) return false;
  for (std::size_t i = 0; i < q; ++i)
    if (omega1.entries[i].sizes != omega2.entries[pairing[i]].sizes) return false;
  return true;
}

bool same_gk(const GKVector& g1, const GKVector& g2) {
  if (g1.m.size() != g2.m.size()) throw Error(ErrorKind::InvalidInput, "GK vectors of different ambient dimension");
  return g1.m == g2.m;
}

JordanStructure truncate_structure(const JordanStructure& omega, std::size_t t, std::size_t block) {
  if (t >= omega.entries.size()) throw Error(ErrorKind::InvalidInput, "eigenvalue index out of range");
  if (block >= omega.entries[t].sizes.size()) throw Error(ErrorKind::InvalidInput, "block index out of range");
  JordanStructure out = omega;
  out.warnings.clear();
  auto& sizes = out.entries[t].sizes;
  const int s = sizes[block];
  std::size_t last = block;
  while (last + 1 < sizes.size() && sizes[last + 1] == s) ++last;
  if (--sizes[last] == 0) sizes.erase(sizes.begin() + static_cast<std::ptrdiff_t>(last));
  if (sizes.empty()) out.entries.erase(out.entries.begin() + static_cast<std::ptrdiff_t>(t));
  --out.ambient_dim;
  return out;
}

int kernel_dim(const EigenBlocks& blocks, int power) {
  int d = 0;
  for (int s : blocks.sizes) d += std::min(power, s);
  return d;
}

Matrix jordan_matrix(const JordanStructure& omega) {
  const Eigen::Index n = omega.ambient_dim;
  Matrix j = Matrix::Zero(n, n);
  Eigen::Index pos = 0;
  for (const auto& e : omega.entries)
    for (int s : e.sizes) {
      for (int i = 0; i < s; ++i) {
        j(pos + i, pos + i) = e.eigenvalue;
        if (i + 1 < s) j(pos + i, pos + i + 1) = 1.0;
      }
      pos += s;
    }
  return j;
}

JordanStructure structure_from_blocks(std::span<const std::pair<Complex, int>> blocks) {
  JordanStructure omega;
  for (const auto& [lambda, size] : blocks) {
    auto it = std::find_if(omega.entries.begin(), omega.entries.end(),
                           [&](const EigenBlocks& e) { return e.eigenvalue == lambda; });
    if (it == omega.entries.end()) {
      omega.entries.push_back({lambda, {}});
      it = omega.entries.end() - 1;
    }
    it->sizes.push_back(size);
    omega.ambient_dim += size;
  }
  for (auto& e : omega.entries) std::sort(e.sizes.begin(), e.sizes.end(), std::greater<>());
  omega.validate();
  return omega;
}

}  // namespace schurgk
