#include "schurgk/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "schurgk/frobenius.hpp"

namespace schurgk {

const char* to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::SameJordan: return "same_jordan";
    case PerturbationKind::SameGK: return "same_gk";
    case PerturbationKind::Generic: return "generic";
  }
  return "generic";
}

PerturbationKind parse_perturbation_kind(const std::string& text) {
  if (text == "same_jordan") return PerturbationKind::SameJordan;
  if (text == "same_gk") return PerturbationKind::SameGK;
  if (text == "generic") return PerturbationKind::Generic;
  throw Error(ErrorKind::InvalidInput, "unknown perturbation kind '" + text + "'");
}

Matrix random_direction(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix e(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      e(i, j) = Complex(re, normal(rng));
    }
  return e / spectral_norm(e);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_spec(const PerturbationSpec& spec, PerturbationKind expected) {
  if (spec.kind != expected) throw Error(ErrorKind::InvalidInput, "perturbation kind does not match the generator");
  if (!(spec.scale >= 0.0) || !std::isfinite(spec.scale))
    throw Error(ErrorKind::InvalidInput, "perturbation scale must be finite and non-negative");
  require_square(spec.base, "base");
  require_finite(spec.base, "base");
}

// Chain basis of base as columns, in the block order of jordan_matrix.
Matrix chain_basis(const Matrix& base, const JordanStructure& omega, const Tolerance& tol) {
  const ChainSet set = jordan_chains(base, omega, tol);
  Matrix p(base.rows(), base.cols());
  Eigen::Index col = 0;
  for (const auto& c : set.chains)
    for (const auto& v : c.vectors) p.col(col++) = v;
  return p;
}

Matrix conjugator(const Matrix& p0, const Matrix& e, double scale) {
  const Eigen::Index n = p0.rows();
  return Matrix::Identity(n, n) + scale * (p0 * e * p0.inverse());
}

Matrix direction_or_random(const std::optional<Matrix>& direction, Eigen::Index n, std::uint64_t seed) {
  if (!direction) return random_direction(n, seed);
  if (direction->rows() != n || direction->cols() != n)
    throw Error(ErrorKind::InvalidInput, "direction has the wrong size");
  return *direction;
}

void note_detection(Perturbed& out, const Tolerance& tol) {
  try {
    const JordanStructure detected = jordan_structure(out.a, tol);
    if (!same_gk(gk_numbers(detected), gk_numbers(*out.structure)))
      out.warnings.push_back("numerical detection on the output disagrees with the constructed structure");
  } catch (const Error& e) {
    out.warnings.push_back(std::string("structure detection on the output failed: ") + e.what());
  }
}

}  // namespace

std::uint64_t subseed(std::uint64_t seed, std::uint64_t scale_index, std::uint64_t trial_index) {
  return splitmix64(splitmix64(seed ^ splitmix64(scale_index + 1)) ^ (trial_index + 1));
}

Perturbed perturb_same_jordan(const PerturbationSpec& spec, const std::optional<Matrix>& direction,
                              const Tolerance& tol) {
  check_spec(spec, PerturbationKind::SameJordan);
  const Matrix& base = spec.base;
  Perturbed out;
  out.structure = jordan_structure(base, tol);
  out.warnings = out.structure->warnings;
  if (spec.scale == 0.0) {
    out.a = base;
    return out;
  }
  const Matrix p0 = chain_basis(base, *out.structure, tol);
  const Matrix x = conjugator(p0, direction_or_random(direction, base.rows(), spec.seed), spec.scale);
  out.a = x * base * x.inverse();
  out.input_distance = spectral_norm(out.a - base);
  note_detection(out, tol);
  return out;
}

Perturbed perturb_same_gk(const PerturbationSpec& spec, const std::optional<std::vector<Complex>>& diagonal,
                          const std::optional<Matrix>& direction, const Tolerance& tol) {
  check_spec(spec, PerturbationKind::SameGK);
  const Matrix& base = spec.base;
  const Eigen::Index n = base.rows();
  const JordanStructure omega = jordan_structure(base, tol);
  Perturbed out;
  out.warnings = omega.warnings;
  if (spec.scale == 0.0 && !diagonal) {
    out.a = base;
    out.structure = omega;
    return out;
  }

  // Blocks of base in jordan_matrix order.
  struct Span {
    Complex value;
    Eigen::Index start;
    int size;
  };
  std::vector<Span> blocks;
  Eigen::Index pos = 0;
  for (const auto& e : omega.entries)
    for (int s : e.sizes) {
      blocks.push_back({e.eigenvalue, pos, s});
      pos += s;
    }

  std::vector<Complex> diag(static_cast<std::size_t>(n));
  if (diagonal) {
    if (static_cast<Eigen::Index>(diagonal->size()) != n)
      throw Error(ErrorKind::InvalidInput, "split diagonal has the wrong length");
    diag = *diagonal;
  } else {
    const bool splittable = std::any_of(blocks.begin(), blocks.end(), [](const Span& b) { return b.size > 1; });
    const Complex offsets[3] = {0.0, spec.scale, -spec.scale};
    for (const auto& b : blocks) {
      Eigen::Index k = b.start;
      for (int piece = 0; piece < 3; ++piece) {
        const int count = splittable ? (b.size + 2 - piece) / 3 : (piece == 0 ? b.size : 0);
        for (int i = 0; i < count; ++i) diag[static_cast<std::size_t>(k++)] = b.value + offsets[piece];
      }
    }
    if (!splittable) {
      for (Eigen::Index k = 0; k < n; ++k)
        if (std::abs(diag[static_cast<std::size_t>(k)] - omega.entries.front().eigenvalue) == 0.0)
          diag[static_cast<std::size_t>(k)] += spec.scale;
      out.warnings.push_back("no block of size > 1 to split; translated the first eigenvalue instead");
    }
  }

  // With the superdiagonal kept, every distinct value inside one block forms
  // a single Jordan block of its multiplicity there.
  std::vector<std::pair<Complex, int>> pieces;
  for (const auto& b : blocks) {
    std::vector<std::pair<Complex, int>> local;
    for (Eigen::Index k = b.start; k < b.start + b.size; ++k) {
      const Complex v = diag[static_cast<std::size_t>(k)];
      auto it = std::find_if(local.begin(), local.end(), [&](const auto& p) { return p.first == v; });
      if (it == local.end())
        local.emplace_back(v, 1);
      else
        ++it->second;
    }
    pieces.insert(pieces.end(), local.begin(), local.end());
  }
  out.structure = structure_from_blocks(pieces);
  if (!same_gk(gk_numbers(*out.structure), gk_numbers(omega)))
    throw Error(ErrorKind::InvalidInput, "split diagonal changes the GK numbers");

  const Matrix p0 = chain_basis(base, omega, tol);
  const Vector shift = Eigen::Map<const Vector>(diag.data(), n) - jordan_matrix(omega).diagonal();
  Matrix moved = base;
  if (shift.cwiseAbs().maxCoeff() > 0.0) moved += p0 * shift.asDiagonal() * p0.inverse();
  if (spec.scale == 0.0 && !direction) {
    out.a = moved;
  } else {
    const Matrix x = conjugator(p0, direction_or_random(direction, n, spec.seed), spec.scale);
    out.a = x * moved * x.inverse();
  }
  out.input_distance = spectral_norm(out.a - base);
  return out;
}

Perturbed perturb_generic(const PerturbationSpec& spec, const std::optional<Matrix>& direction) {
  check_spec(spec, PerturbationKind::Generic);
  Perturbed out;
  if (spec.scale == 0.0) {
    out.a = spec.base;
    return out;
  }
  out.a = spec.base + spec.scale * direction_or_random(direction, spec.base.rows(), spec.seed);
  out.input_distance = spectral_norm(out.a - spec.base);
  return out;
}

Perturbed perturb(const PerturbationSpec& spec, const Tolerance& tol) {
  switch (spec.kind) {
    case PerturbationKind::SameJordan: return perturb_same_jordan(spec, std::nullopt, tol);
    case PerturbationKind::SameGK: return perturb_same_gk(spec, std::nullopt, std::nullopt, tol);
    case PerturbationKind::Generic: return perturb_generic(spec);
  }
  throw Error(ErrorKind::InvalidInput, "unknown perturbation kind");
}

// ---------------------------------------------------------------------------

LineFit fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw Error(ErrorKind::InvalidInput, "fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, d] : points) {
    if (!(h > 0.0) || !(d > 0.0) || !std::isfinite(h) || !std::isfinite(d))
      throw Error(ErrorKind::InvalidInput, "fit needs positive finite values");
    const double x = std::log(h), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(points.size());
  const double var = sxx - sx * sx / k;
  if (var <= 0.0) throw Error(ErrorKind::InvalidInput, "fit needs at least two distinct abscissae");
  LineFit fit;
  fit.slope = (sxy - sx * sy / k) / var;
  fit.intercept = (sy - fit.slope * sx) / k;
  return fit;
}

ExperimentReport run_experiment(const Matrix& base, PerturbationKind kind, std::span<const double> scales, int trials,
                                std::uint64_t seed, const Tolerance& tol) {
  require_square(base, "base");
  require_finite(base, "base");
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be at least 1");
  if (scales.empty()) throw Error(ErrorKind::InvalidInput, "no scales given");
  for (double s : scales)
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::InvalidInput, "scales must be positive");

  const Eigen::Index n = base.rows();
  SchurPair start{Matrix::Identity(n, n), base};
  if (!is_upper_triangular(base)) start = schur_decompose(base, tol);
  const Matrix& t0 = start.T;

  ExperimentReport report;
  report.kind = kind;
  report.mode = kind == PerturbationKind::SameJordan ? MatchMode::Lipschitz : MatchMode::Holder;
  report.trials = trials;
  report.seed = seed;

  Tolerance split_tol = tol;
  split_tol.cluster_radius = 0.0;

  for (std::size_t i = 0; i < scales.size(); ++i) {
    ExperimentPoint worst{scales[i], 0.0, 0.0};
    bool any = false;
    for (int k = 0; k < trials; ++k) {
      try {
        const PerturbationSpec spec{kind, scales[i], subseed(seed, i, static_cast<std::uint64_t>(k)), base};
        const Perturbed p = perturb(spec, tol);
        const Matrix b = start.U.adjoint() * p.a * start.U;
        const double bnorm = std::max(spectral_norm(b), std::numeric_limits<double>::min());
        ExperimentPoint point{scales[i], p.input_distance, 0.0};
        if (report.mode == MatchMode::Lipschitz) {
          const LipschitzMatch m = lipschitz_match(t0, b, tol, p.structure);
          point.schur_distance = spectral_norm(Matrix::Identity(n, n) - m.Vhat) + spectral_norm(m.T - t0);
          report.max_residual = std::max(report.max_residual, m.lower_residual / bnorm);
        } else {
          const JordanStructure omega_b = p.structure ? *p.structure : jordan_structure(b, split_tol);
          const HolderMatch m = holder_match(t0, b, tol, omega_b);
          point.schur_distance = m.distance;
          report.max_residual = std::max({report.max_residual, m.residual, m.unitarity});
        }
        report.points.push_back(point);
        worst.input_distance = std::max(worst.input_distance, point.input_distance);
        worst.schur_distance = std::max(worst.schur_distance, point.schur_distance);
        any = true;
      } catch (const Error& e) {
        ++report.failures;
        report.warnings.push_back("scale " + std::to_string(i) + " trial " + std::to_string(k) + ": " +
                                  to_string(e.kind()) + ": " + e.what());
      }
    }
    if (any) report.per_scale.push_back(worst);
  }

  const int total = trials * static_cast<int>(scales.size());
  if (5 * report.failures > total)
    throw Error(ErrorKind::ExperimentFailed,
                "matcher failed on " + std::to_string(report.failures) + " of " + std::to_string(total) + " trials",
                report.failures);

  std::vector<std::pair<double, double>> fit_points;
  for (const auto& p : report.per_scale)
    if (p.input_distance > 0.0 && p.schur_distance > 0.0) fit_points.emplace_back(p.input_distance, p.schur_distance);
  if (fit_points.size() < 3) {
    report.fit_skipped = true;
    report.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    report.fitted_log_constant = std::numeric_limits<double>::quiet_NaN();
    report.warnings.push_back("fewer than three usable scales; exponent fit skipped");
  } else {
    const LineFit fit = fit_exponent(fit_points);
    report.fitted_exponent = fit.slope;
    report.fitted_log_constant = fit.intercept;
  }
  return report;
}

// ---------------------------------------------------------------------------

SearchResult min_schur_distance_search(const Matrix& t0, const Matrix& a, int budget, const Matrix& u0) {
  require_square(t0, "T0");
  require_square(a);
  const Eigen::Index n = a.rows();
  if (t0.rows() != n || u0.rows() != n || u0.cols() != n)
    throw Error(ErrorKind::InvalidInput, "matrices differ in size");
  if (n > 5) throw Error(ErrorKind::UnsupportedSize, "search is limited to n <= 5");
  if (budget < 0) throw Error(ErrorKind::InvalidInput, "budget must be non-negative");

  const std::vector<Complex> eigs = eigenvalues(a);
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<Complex>> seen;

  SearchResult result;
  result.value = std::numeric_limits<double>::infinity();
  do {
    std::vector<Complex> order;
    for (std::size_t i : perm) order.push_back(eigs[i]);
    if (std::find(seen.begin(), seen.end(), order) != seen.end()) continue;
    seen.push_back(order);
    ++result.orderings;

    const SchurPair pair = schur_decompose(a, {}, std::span<const Complex>(order));
    auto objective = [&](const Vector& d) {
      ++result.evaluations;
      const Matrix u = pair.U * d.asDiagonal();
      const Matrix t = d.conjugate().asDiagonal() * pair.T * d.asDiagonal();
      return spectral_norm(u - u0) + spectral_norm(t - t0);
    };
    // Phases that best align U with U0 column by column.
    const Matrix w = u0.adjoint() * pair.U;
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i)
      d(i) = std::abs(w(i, i)) > 0.0 ? std::conj(w(i, i)) / std::abs(w(i, i)) : Complex(1.0);
    double best = objective(d);
    double step = std::numbers::pi / 4;
    for (int round = 0; round < budget && best > 0.0; ++round) {
      bool improved = false;
      for (Eigen::Index i = 0; i < n; ++i)
        for (double sign : {1.0, -1.0}) {
          Vector trial = d;
          trial(i) *= std::polar(1.0, sign * step);
          const double v = objective(trial);
          if (v < best) {
            best = v;
            d = trial;
            improved = true;
          }
        }
      if (!improved) step /= 2;
    }
    result.value = std::min(result.value, best);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

SearchResult min_schur_distance_search(const Matrix& t0, const Matrix& a, int budget) {
  return min_schur_distance_search(t0, a, budget, Matrix::Identity(a.rows(), a.rows()));
}

// ---------------------------------------------------------------------------

namespace examples {

Matrix eigen_split_base() {
  Matrix a = Matrix::Zero(2, 2);
  a(1, 0) = 1.0;
  return a;
}

Matrix eigen_split(double eps) {
  Matrix a = eigen_split_base();
  a(0, 1) = eps;
  return a;
}

Matrix pitfall_t0() {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 1) = 1.0;
  return t;
}

Matrix pitfall_b(double eps) {
  Matrix b = pitfall_t0();
  b(2, 1) = eps;
  return b;
}

Matrix pitfall_v1(double eps) {
  const double r = std::sqrt(1.0 + eps * eps);
  Matrix v = Matrix::Zero(3, 3);
  v(0, 0) = 1.0 / r;
  v(0, 2) = -eps / r;
  v(1, 1) = 1.0;
  v(2, 0) = eps / r;
  v(2, 2) = 1.0 / r;
  return v;
}

Matrix split_t0() {
  Matrix t = Matrix::Zero(7, 7);
  for (int i : {0, 1, 2, 4, 5}) t(i, i + 1) = 1.0;
  return t;
}

Matrix split_b(double eps) {
  Matrix b = split_t0();
  b(1, 1) = -eps;
  b(2, 2) = eps;
  b(6, 6) = eps;
  return b;
}

JordanStructure split_b_structure(double eps) {
  const std::vector<std::pair<Complex, int>> blocks{{0.0, 2}, {0.0, 2}, {eps, 1}, {eps, 1}, {-eps, 1}};
  return structure_from_blocks(blocks);
}

Matrix gk_figure() {
  const Complex lam = 1.0, mu(0.0, 2.0), eta = -1.0;
  const std::vector<std::pair<Complex, int>> blocks{{lam, 2}, {mu, 2}, {eta, 1}, {lam, 2},
                                                    {eta, 1}, {lam, 2}, {eta, 1}, {lam, 1}};
  Matrix m = Matrix::Zero(12, 12);
  Eigen::Index pos = 0;
  for (const auto& [value, size] : blocks) {
    for (int i = 0; i < size; ++i) {
      m(pos + i, pos + i) = value;
      if (i + 1 < size) m(pos + i, pos + i + 1) = 1.0;
    }
    pos += size;
  }
  return m;
}

}  // namespace examples

}  // namespace schurgk
