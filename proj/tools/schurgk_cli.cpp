// Command line front end: structure analysis, gaps, Schur matching,
// triangular Jordan factorizations, experiments and reference outputs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schurgk/frobenius.hpp"
#include "schurgk/io.hpp"
#include "schurgk/lab.hpp"
#include "schurgk/matching.hpp"
#include "schurgk/repro.hpp"
#include "schurgk/subspaces.hpp"

namespace fs = std::filesystem;
using namespace schurgk;

namespace {

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << dump(j) << '\n';
    return;
  }
  const fs::path parent = fs::path(out).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream f(out);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + out + "'");
  f << dump(j) << '\n';
}

std::vector<double> parse_scales(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad scale '" + item + "'");
    }
  }
  return out;
}

Tolerance make_tol(double rank_rel, double radius) {
  Tolerance tol;
  tol.rank_rel = rank_rel;
  if (radius >= 0.0) tol.cluster_radius = radius;
  tol.validate();
  return tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jordan structure, GK numbers and forward-stable Schur matching"};
  app.require_subcommand(1);

  double rank_rel = 1e-8;
  double radius = -1.0;
  std::string out;

  auto* analyze = app.add_subcommand("analyze", "Jordan structure and GK numbers of a matrix");
  std::string matrix_path;
  analyze->add_option("matrix", matrix_path, "Matrix Market or JSON matrix")->required();
  analyze->add_option("--tol", rank_rel, "relative rank cutoff");
  analyze->add_option("--radius", radius, "eigenvalue clustering radius (default: derived)");

  auto* gap_cmd = app.add_subcommand("gap", "gap (or semigap) between two column spans");
  std::string basis_a, basis_b;
  bool semi = false;
  gap_cmd->add_option("basisA", basis_a)->required();
  gap_cmd->add_option("basisB", basis_b)->required();
  gap_cmd->add_flag("--semi", semi, "one-sided gap from A to B");

  auto* match = app.add_subcommand("match", "Schur form of B next to the Schur form of T0");
  std::string t0_path, b_path, mode_text = "lipschitz", out_dir = ".", format = "mtx";
  match->add_option("T0", t0_path)->required();
  match->add_option("B", b_path)->required();
  match->add_option("--mode", mode_text)->check(CLI::IsMember({"lipschitz", "holder"}));
  match->add_option("--out-dir", out_dir, "directory for U and T");
  match->add_option("--format", format)->check(CLI::IsMember({"mtx", "json"}));
  match->add_option("--tol", rank_rel);

  auto* frob = app.add_subcommand("frobenius", "upper triangular Jordan-type factorization");
  std::string frob_path;
  frob->add_option("T0", frob_path)->required();
  frob->add_option("--tol", rank_rel);
  frob->add_option("--out", out);

  auto* exp = app.add_subcommand("experiment", "perturbation sweep with exponent fit");
  std::string base_path, kind_text, scales_text, csv_path;
  int trials = 10;
  std::uint64_t seed = 0;
  exp->add_option("--base", base_path)->required();
  exp->add_option("--kind", kind_text)->required()->check(CLI::IsMember({"same_jordan", "same_gk", "generic"}));
  exp->add_option("--scales", scales_text, "comma separated, e.g. 1e-3,1e-4,1e-5")->required();
  exp->add_option("--trials", trials);
  exp->add_option("--seed", seed);
  exp->add_option("--out", out, "report JSON")->required();
  exp->add_option("--csv", csv_path, "CSV of points (default: report path with .csv)");

  auto* repro = app.add_subcommand("repro", "reference computations as JSON");
  std::string repro_name;
  repro->add_option("name", repro_name)->required()->check(CLI::IsMember(reproduction_names()));
  repro->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      const Matrix a = read_matrix(matrix_path);
      emit(structure_to_json(jordan_structure(a, make_tol(rank_rel, radius))), "");
    } else if (*gap_cmd) {
      const SubspaceBasis m = SubspaceBasis::span_of(read_matrix(basis_a));
      const SubspaceBasis n = SubspaceBasis::span_of(read_matrix(basis_b));
      Json j;
      j[semi ? "semigap" : "gap"] = semi ? semigap(m, n) : gap(m, n);
      emit(j, "");
    } else if (*match) {
      const Tolerance tol = make_tol(rank_rel, -1.0);
      const Matrix a0 = read_matrix(t0_path);
      const Matrix a = read_matrix(b_path);
      require_square(a0, "T0");
      if (a.rows() != a0.rows() || a.cols() != a0.cols())
        throw Error(ErrorKind::InvalidInput, "T0 and B differ in size");
      const Eigen::Index n = a0.rows();
      // A non-triangular T0 is first reduced to a Schur form.
      SchurPair start{Matrix::Identity(n, n), a0};
      if (!is_upper_triangular(a0)) start = schur_decompose(a0, tol);
      const Matrix b = start.U.adjoint() * a * start.U;
      const MatchMode mode = parse_match_mode(mode_text);
      Matrix v, t;
      Json j;
      j["mode"] = mode_text;
      if (mode == MatchMode::Lipschitz) {
        const LipschitzMatch m = lipschitz_match(start.T, b, tol);
        v = m.Vhat;
        t = m.T;
        j["ratio"] = m.ratio;
        j["warnings"] = m.warnings;
      } else {
        const HolderMatch m = holder_match(start.T, b, tol);
        v = m.U;
        t = m.T;
        j["reference_scale"] = m.reference;
        j["warnings"] = m.warnings;
      }
      const SchurPair result{start.U * v, t};
      j["distance"] = schur_distance(start, result);
      j["input_distance"] = spectral_norm(a - a0);
      fs::create_directories(out_dir);
      const std::string u_file = (fs::path(out_dir) / ("U." + format)).string();
      const std::string t_file = (fs::path(out_dir) / ("T." + format)).string();
      write_matrix(u_file, result.U);
      write_matrix(t_file, result.T);
      j["U"] = u_file;
      j["T"] = t_file;
      emit(j, "");
    } else if (*frob) {
      emit(factorization_to_json(triangular_jordan(read_matrix(frob_path), make_tol(rank_rel, -1.0))), out);
    } else if (*exp) {
      const Matrix base = read_matrix(base_path);
      const std::vector<double> scales = parse_scales(scales_text);
      const ExperimentReport report =
          run_experiment(base, parse_perturbation_kind(kind_text), scales, trials, seed);
      emit(report_to_json(report), out);
      if (csv_path.empty()) csv_path = fs::path(out).replace_extension(".csv").string();
      std::ofstream csv(csv_path);
      if (!csv) throw Error(ErrorKind::InvalidInput, "cannot write '" + csv_path + "'");
      write_report_csv(csv, report);
    } else if (*repro) {
      emit(reproduce(repro_name), out);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
