#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schurgk/matching.hpp"
#include "schurgk/numcore.hpp"
#include "schurgk/structure.hpp"

namespace schurgk {

enum class PerturbationKind { SameJordan, SameGK, Generic };

const char* to_string(PerturbationKind kind);
PerturbationKind parse_perturbation_kind(const std::string& text);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::SameJordan;
  double scale = 0.0;  // 0 returns the base unchanged
  std::uint64_t seed = 0;
  Matrix base;
};

struct Perturbed {
  Matrix a;
  // Jordan structure of `a`, known by construction (empty for generic).
  std::optional<JordanStructure> structure;
  double input_distance = 0.0;  // |a - base|
  std::vector<std::string> warnings;
};

// Seeded complex Gaussian matrix scaled to spectral norm 1.
Matrix random_direction(Eigen::Index n, std::uint64_t seed);

// Independent stream for (seed, scale index, trial index).
std::uint64_t subseed(std::uint64_t seed, std::uint64_t scale_index, std::uint64_t trial_index);

// A = X base X^{-1} with X = I + scale * P0 E P0^{-1}, P0 a Jordan chain basis
// of base; E is random unless `direction` is given (in chain coordinates).
Perturbed perturb_same_jordan(const PerturbationSpec& spec, const std::optional<Matrix>& direction = std::nullopt,
                              const Tolerance& tol = {});

// Splits the diagonal of every Jordan block of base (in chain coordinates)
// into pieces at lambda, lambda + scale, lambda - scale with the superdiagonal
// kept, so each split eigenvalue gets one block per original block and the GK
// numbers do not change; then conjugates as perturb_same_jordan does.
// `diagonal` overrides the new Jordan-coordinate diagonal entirely.
Perturbed perturb_same_gk(const PerturbationSpec& spec, const std::optional<std::vector<Complex>>& diagonal = std::nullopt,
                          const std::optional<Matrix>& direction = std::nullopt, const Tolerance& tol = {});

// base + scale * E.
Perturbed perturb_generic(const PerturbationSpec& spec, const std::optional<Matrix>& direction = std::nullopt);

Perturbed perturb(const PerturbationSpec& spec, const Tolerance& tol = {});

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares line through (log h, log d). Needs >= 2 points (3 for the
// harness), all positive.
LineFit fit_exponent(std::span<const std::pair<double, double>> points);

struct ExperimentPoint {
  double scale = 0.0;
  double input_distance = 0.0;
  double schur_distance = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentPoint> points;     // every successful trial
  std::vector<ExperimentPoint> per_scale;  // worst trial per scale
  double fitted_exponent = 0.0;
  double fitted_log_constant = 0.0;
  bool fit_skipped = false;
  MatchMode mode = MatchMode::Lipschitz;
  PerturbationKind kind = PerturbationKind::SameJordan;
  int trials = 0;
  int failures = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;  // worst Schur residual of the matcher outputs
  std::vector<std::string> warnings;
};

// Perturbs base at every scale and trial, matches a Schur form of the
// perturbed matrix against the one of base (lipschitz for same_jordan,
// holder otherwise) and fits log of the worst distance per scale against log
// of the worst input distance. Failed trials become warnings; more than 20%
// failures throws ExperimentFailed.
ExperimentReport run_experiment(const Matrix& base, PerturbationKind kind, std::span<const double> scales, int trials,
                                std::uint64_t seed, const Tolerance& tol = {});

struct SearchResult {
  double value = 0.0;  // an upper bound on the infimum
  int orderings = 0;
  int evaluations = 0;
};

// Upper bound on inf |U - U0| + |T - T0| over Schur forms A = U T U^*: every
// ordering of the eigenvalues, best diagonal phases, then `budget` rounds of
// coordinate refinement of the phases. n <= 5.
SearchResult min_schur_distance_search(const Matrix& t0, const Matrix& a, int budget, const Matrix& u0);
SearchResult min_schur_distance_search(const Matrix& t0, const Matrix& a, int budget);

// Reference matrices used by the reproductions and tests.
namespace examples {
// A0 = [[0,0],[1,0]] and A = [[0,eps],[1,0]].
Matrix eigen_split_base();
Matrix eigen_split(double eps);
// T0 = E12 (3x3) and B = E12 + eps E32.
Matrix pitfall_t0();
Matrix pitfall_b(double eps);
Matrix pitfall_v1(double eps);
// T0 = J4(0) + J3(0) and its same-GK neighbour with diagonal
// (0,-eps,eps,0 | 0,0,eps).
Matrix split_t0();
Matrix split_b(double eps);
JordanStructure split_b_structure(double eps);
// 12x12 block diagonal matrix with blocks J2(1), J2(2i), -1, J2(1), -1,
// J2(1), -1, 1.
Matrix gk_figure();
}  // namespace examples

}  // namespace schurgk
