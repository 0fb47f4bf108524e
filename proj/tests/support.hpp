#pragma once

// Test-only helpers and independent oracles. Nothing here calls the library's
// decompositions, so agreement with the library is meaningful.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testing_support {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      m(i, j) = Complex(re, normal(rng));
    }
  return m;
}

inline Matrix jordan_block(int size, Complex lambda) {
  Matrix j = Matrix::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    j(i, i) = lambda;
    if (i + 1 < size) j(i, i + 1) = 1.0;
  }
  return j;
}

inline Matrix direct_sum(const std::vector<Matrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index pos = 0;
  for (const auto& b : blocks) {
    out.block(pos, pos, b.rows(), b.cols()) = b;
    pos += b.rows();
  }
  return out;
}

// Characteristic polynomial coefficients (monic, highest degree first) by
// the Faddeev-LeVerrier recursion.
inline std::vector<Complex> char_poly(const Matrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n + 1));
  c[0] = 1.0;
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(k - 1)] * Matrix::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

// Polynomial roots by Durand-Kerner iteration.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<Complex> z(n);
  const Complex seed(0.4, 0.9);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(seed, static_cast<double>(i));
  auto eval = [&](Complex x) {
    Complex v = 0.0;
    for (const auto& k : c) v = v * x + k;
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    double move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = c[0];
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      const Complex step = eval(z[i]) / den;
      z[i] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-15) break;
  }
  return z;
}

// Largest distance from a point of `a` to the nearest point of `b`, both ways.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& x : a) {
      double best = 1e300;
      for (const auto& y : b) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    std::swap(a, b);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Exact ranks of integer matrices, computed modulo two large primes.

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

inline int rank_mod(const IntMatrix& m, std::uint64_t p) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<std::vector<std::uint64_t>> a(static_cast<std::size_t>(rows), std::vector<std::uint64_t>(static_cast<std::size_t>(cols)));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const long long v = m(i, j) % static_cast<long long>(p);
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<std::uint64_t>(v < 0 ? v + static_cast<long long>(p) : v);
    }
  auto mul = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
  };
  auto inv = [&](std::uint64_t x) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (std::size_t col = 0; col < static_cast<std::size_t>(cols) && rank < rows; ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < static_cast<std::size_t>(rows) && a[piv][col] == 0) ++piv;
    if (piv == static_cast<std::size_t>(rows)) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
    const std::uint64_t iv = inv(a[static_cast<std::size_t>(rank)][col]);
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r) {
      if (r == static_cast<std::size_t>(rank) || a[r][col] == 0) continue;
      const std::uint64_t f = mul(a[r][col], iv);
      for (std::size_t c = col; c < static_cast<std::size_t>(cols); ++c)
        a[r][c] = (a[r][c] + p - mul(f, a[static_cast<std::size_t>(rank)][c])) % p;
    }
    ++rank;
  }
  return rank;
}

inline int exact_rank(const IntMatrix& m) {
  return std::max(rank_mod(m, 2305843009213693951ULL), rank_mod(m, 1000000007ULL));
}

// Block sizes of eigenvalue `lambda` of an integer matrix from exact ranks of
// (A - lambda)^k, via the Weyr characteristic.
inline std::vector<int> exact_block_sizes(const IntMatrix& a, long long lambda) {
  const Eigen::Index n = a.rows();
  IntMatrix nil = a;
  for (Eigen::Index i = 0; i < n; ++i) nil(i, i) -= lambda;
  std::vector<int> kernel{0};
  IntMatrix power = IntMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    power = power * nil;
    kernel.push_back(static_cast<int>(n) - exact_rank(power));
    if (kernel.back() == kernel[kernel.size() - 2]) break;
  }
  std::vector<int> weyr;
  for (std::size_t i = 1; i < kernel.size(); ++i)
    if (kernel[i] > kernel[i - 1]) weyr.push_back(kernel[i] - kernel[i - 1]);
  std::vector<int> sizes;
  for (int j = 1; !weyr.empty() && j <= weyr.front(); ++j) {
    int count = 0;
    for (int w : weyr) count += w >= j ? 1 : 0;
    sizes.push_back(count);
  }
  return sizes;
}

// Unit upper triangular integer matrix with small entries; its inverse is
// integer too.
inline IntMatrix unit_upper(Eigen::Index n, std::mt19937_64& rng, int spread = 1) {
  std::uniform_int_distribution<int> pick(-spread, spread);
  IntMatrix s = IntMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) s(i, j) = pick(rng);
  return s;
}

inline IntMatrix unit_upper_inverse(const IntMatrix& s) {
  const Eigen::Index n = s.rows();
  IntMatrix inv = IntMatrix::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      long long acc = 0;
      for (Eigen::Index k = i + 1; k <= j; ++k) acc += s(i, k) * inv(k, j);
      inv(i, j) = -acc;
    }
  return inv;
}

inline Matrix to_complex(const IntMatrix& m) { return m.cast<double>().cast<Complex>(); }

// ---------------------------------------------------------------------------
// All partitions of n (non-increasing).

inline void partitions_into(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_into(n - p, p, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_into(n, n, cur, out);
  return out;
}

// ---------------------------------------------------------------------------
// Direct estimate of sup_{x in span(bm), |x|=1} |x - P x| by random sampling
// followed by fixed-point refinement of the best sample.

inline double sampled_semigap(const Matrix& bm, const Matrix& proj, std::mt19937_64& rng, int samples = 2000) {
  if (bm.cols() == 0) return 0.0;
  const Eigen::Index n = bm.rows();
  const Matrix resid = Matrix::Identity(n, n) - proj;
  auto value = [&](const Eigen::VectorXcd& c) { return (resid * (bm * c)).norm() / (bm * c).norm(); };
  Eigen::VectorXcd best = random_matrix(bm.cols(), 1, rng).col(0);
  double best_v = value(best);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXcd c = random_matrix(bm.cols(), 1, rng).col(0);
    const double v = value(c);
    if (v > best_v) {
      best_v = v;
      best = c;
    }
  }
  const Matrix gram = bm.adjoint() * resid.adjoint() * resid * bm;
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXcd next = gram * best;
    if (next.norm() == 0.0) break;
    next /= next.norm();
    const double v = value(next);
    if (v < best_v + 1e-16 && (next - best).norm() < 1e-14) break;
    if (v >= best_v) best_v = v;
    best = next;
  }
  return std::min(1.0, best_v);
}

// ---------------------------------------------------------------------------
// Upper triangular test inputs of size 2..8 with eigenvalues from {0, 1, 2}.
// Even indices give a generic strictly upper part (typically one block per
// eigenvalue); odd indices give S J S^{-1} with S unit upper triangular and J
// a random Jordan matrix, so several blocks per eigenvalue occur.

inline Matrix triangular_input(std::mt19937_64& rng, int index) {
  const int n = 2 + index % 7;
  std::uniform_int_distribution<int> eig(0, 2);
  if (index % 2 == 0) {
    Matrix t = random_matrix(n, n, rng).triangularView<Eigen::StrictlyUpper>();
    for (int i = 0; i < n; ++i) t(i, i) = static_cast<double>(eig(rng));
    return t;
  }
  Matrix j = Matrix::Zero(n, n);
  int pos = 0;
  while (pos < n) {
    std::uniform_int_distribution<int> len(1, std::min(n - pos, 3));
    const int size = len(rng);
    const double lambda = eig(rng);
    for (int i = 0; i < size; ++i) {
      j(pos + i, pos + i) = lambda;
      if (i + 1 < size) j(pos + i, pos + i + 1) = 1.0;
    }
    pos += size;
  }
  Matrix s = random_matrix(n, n, rng).triangularView<Eigen::StrictlyUpper>();
  s *= 0.5;
  s += Matrix::Identity(n, n);
  Matrix t = (s * j * s.inverse()).triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) t(i, i) = j(i, i);
  return t;
}

}  // namespace testing_support
