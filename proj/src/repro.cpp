#include "schurgk/repro.hpp"

#include <cmath>

#include "schurgk/frobenius.hpp"
#include "schurgk/lab.hpp"
#include "schurgk/matching.hpp"

namespace schurgk {

namespace {

Json gk_figure() {
  const JordanStructure omega = jordan_structure(examples::gk_figure());
  Json j;
  j["name"] = "gk-figure";
  j["structure"] = structure_to_json(omega);
  return j;
}

Json eigen_split() {
  const Matrix a0 = examples::eigen_split_base();
  Matrix u0 = Matrix::Zero(2, 2);
  u0(0, 1) = u0(1, 0) = 1.0;
  const Matrix t0 = u0.adjoint() * a0 * u0;
  const std::vector<Complex> lams = eigenvalues(a0);

  Json points = Json::array();
  std::vector<std::pair<double, double>> fit;
  for (int p = 2; p <= 10; ++p) {
    const double eps = std::pow(10.0, -p);
    const Matrix a = examples::eigen_split(eps);
    const std::vector<Complex> mus = eigenvalues(a);
    const Pairing pairing = pair_eigenvalues(lams, mus, MatchMode::Holder);
    const double input = spectral_norm(a - a0);
    fit.emplace_back(input, pairing.max_mismatch);
    Json item;
    item["eps"] = eps;
    item["input_distance"] = input;
    item["pairing_distance"] = pairing.max_mismatch;
    item["schur_search_upper_bound"] = min_schur_distance_search(t0, a, 40, u0).value;
    points.push_back(std::move(item));
  }
  const LineFit line = fit_exponent(fit);
  Json j;
  j["name"] = "example-2.4";
  j["points"] = std::move(points);
  j["slope"] = line.slope;
  j["intercept"] = line.intercept;
  return j;
}

Json pitfall() {
  const double eps = 1e-3;
  const Matrix t0 = examples::pitfall_t0();
  const Matrix b = examples::pitfall_b(eps);
  const LipschitzMatch m = lipschitz_match(t0, b);
  const Matrix v1 = examples::pitfall_v1(eps);
  Json j;
  j["name"] = "pitfall-3";
  j["eps"] = eps;
  j["T0"] = matrix_to_json(t0);
  j["B"] = matrix_to_json(b);
  j["Vhat"] = matrix_to_json(m.Vhat);
  j["T"] = matrix_to_json(m.T);
  j["t12"] = std::abs(m.T(0, 1));
  j["t12_expected"] = std::sqrt(1.0 + eps * eps);
  j["vhat_vs_displayed_v1"] = spectral_norm(m.Vhat - v1);
  j["identity_distance"] = spectral_norm(Matrix::Identity(3, 3) - m.Vhat);
  j["triangular_distance"] = spectral_norm(m.T - t0);
  j["ratio"] = m.ratio;
  return j;
}

Json split_example() {
  const double eps = 1e-7;
  const Matrix t0 = examples::split_t0();
  const Matrix b = examples::split_b(eps);
  const JordanStructure ob = examples::split_b_structure(eps);
  const JordanStructure ot = jordan_structure(t0);
  const HolderMatch m = holder_match(t0, b, {}, ob);
  Json j;
  j["name"] = "example-4.1";
  j["eps"] = eps;
  j["T0_structure"] = structure_to_json(ot);
  j["B_structure"] = structure_to_json(ob);
  j["invariant_factor_degrees"] = invariant_factor_degrees(gk_numbers(ot));
  j["factorization"] = factorization_to_json(triangular_jordan(t0, ot));
  j["schur_distance"] = m.distance;
  j["reference_scale"] = m.reference;
  j["residual"] = m.residual;
  j["unitarity"] = m.unitarity;
  return j;
}

}  // namespace

const std::vector<std::string>& reproduction_names() {
  static const std::vector<std::string> names{"example-2.4", "pitfall-3", "example-4.1", "gk-figure"};
  return names;
}

Json reproduce(const std::string& name) {
  if (name == "gk-figure") return gk_figure();
  if (name == "example-2.4") return eigen_split();
  if (name == "pitfall-3") return pitfall();
  if (name == "example-4.1") return split_example();
  throw Error(ErrorKind::InvalidInput, "unknown reproduction '" + name + "'");
}

}  // namespace schurgk
