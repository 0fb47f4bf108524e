// Python bindings. Matrices cross as complex128 numpy arrays; reports and
// reproductions come back as plain dicts.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schurgk/frobenius.hpp"
#include "schurgk/io.hpp"
#include "schurgk/lab.hpp"
#include "schurgk/matching.hpp"
#include "schurgk/repro.hpp"
#include "schurgk/subspaces.hpp"

namespace py = pybind11;
using namespace schurgk;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(dump(j, -1)); }

}  // namespace

PYBIND11_MODULE(schurgk, m) {
  m.doc() = "Jordan structure, GK numbers and forward-stable Schur matching";

  static py::exception<Error> error(m, "SchurgkError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (message, kind)
      py::tuple args = py::make_tuple(e.what(), to_string(e.kind()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init([](double rank_rel, std::optional<double> cluster_radius, double residual_rel) {
             Tolerance t{rank_rel, cluster_radius, residual_rel};
             t.validate();
             return t;
           }),
           py::arg("rank_rel") = 1e-8, py::arg("cluster_radius") = py::none(), py::arg("residual_rel") = 1e-10)
      .def_readwrite("rank_rel", &Tolerance::rank_rel)
      .def_readwrite("cluster_radius", &Tolerance::cluster_radius)
      .def_readwrite("residual_rel", &Tolerance::residual_rel);

  py::class_<EigenBlocks>(m, "EigenBlocks")
      .def_readonly("eigenvalue", &EigenBlocks::eigenvalue)
      .def_readonly("sizes", &EigenBlocks::sizes)
      .def("__repr__", [](const EigenBlocks& e) {
        return "EigenBlocks(" + py::repr(py::cast(e.eigenvalue)).cast<std::string>() + ", " +
               py::repr(py::cast(e.sizes)).cast<std::string>() + ")";
      });

  py::class_<JordanStructure>(m, "JordanStructure")
      .def_readonly("entries", &JordanStructure::entries)
      .def_readonly("ambient_dim", &JordanStructure::ambient_dim)
      .def_readonly("warnings", &JordanStructure::warnings)
      .def("to_dict", [](const JordanStructure& s) { return to_python(structure_to_json(s)); });

  py::class_<GKVector>(m, "GKVector").def_readonly("m", &GKVector::m).def_readonly("k", &GKVector::k);

  m.def("jordan_structure", &jordan_structure, py::arg("a"), py::arg("tol") = Tolerance{});
  m.def("gk_numbers", &gk_numbers, py::arg("omega"));
  m.def(
      "structure_from_blocks",
      [](const std::vector<std::pair<Complex, int>>& blocks) { return structure_from_blocks(blocks); },
      py::arg("blocks"));
  m.def(
      "dual_partition", [](const std::vector<int>& parts, std::size_t n) { return dual_partition(parts, n); },
      py::arg("m"), py::arg("n"));
  m.def("truncate_structure", &truncate_structure, py::arg("omega"), py::arg("t"), py::arg("block"));

  m.def(
      "gap", [](const Matrix& a, const Matrix& b) { return gap(SubspaceBasis::span_of(a), SubspaceBasis::span_of(b)); },
      py::arg("basis_a"), py::arg("basis_b"), "gap between the column spans");
  m.def(
      "semigap",
      [](const Matrix& a, const Matrix& b) { return semigap(SubspaceBasis::span_of(a), SubspaceBasis::span_of(b)); },
      py::arg("basis_a"), py::arg("basis_b"), "one-sided gap from span(basis_a) to span(basis_b)");
  m.def("kernel_semigap", &kernel_semigap, py::arg("a"), py::arg("a0"), py::arg("tol") = Tolerance{});

  m.def(
      "lipschitz_match",
      [](const Matrix& t0, const Matrix& b, const Tolerance& tol) {
        const LipschitzMatch r = lipschitz_match(t0, b, tol);
        return py::dict(py::arg("U") = r.Vhat, py::arg("T") = r.T, py::arg("ratio") = r.ratio,
                        py::arg("warnings") = r.warnings);
      },
      py::arg("t0"), py::arg("b"), py::arg("tol") = Tolerance{});
  m.def(
      "holder_match",
      [](const Matrix& t0, const Matrix& b, const Tolerance& tol) {
        const HolderMatch r = holder_match(t0, b, tol);
        return py::dict(py::arg("U") = r.U, py::arg("T") = r.T, py::arg("distance") = r.distance,
                        py::arg("residual") = r.residual, py::arg("unitarity") = r.unitarity,
                        py::arg("warnings") = r.warnings);
      },
      py::arg("t0"), py::arg("b"), py::arg("tol") = Tolerance{});
  m.def(
      "triangular_jordan",
      [](const Matrix& t0, const Tolerance& tol) {
        const TriangularJordanFactorization f = triangular_jordan(t0, tol);
        return py::dict(py::arg("S0") = f.S0, py::arg("J0hat") = f.J0hat, py::arg("block_map") = f.block_map);
      },
      py::arg("t0"), py::arg("tol") = Tolerance{});
  m.def(
      "schur_distance",
      [](const Matrix& u0, const Matrix& t0, const Matrix& u1, const Matrix& t1) {
        return schur_distance({u0, t0}, {u1, t1});
      },
      py::arg("u0"), py::arg("t0"), py::arg("u1"), py::arg("t1"));

  m.def(
      "perturb",
      [](const Matrix& base, const std::string& kind, double scale, std::uint64_t seed) {
        PerturbationSpec spec{parse_perturbation_kind(kind), scale, seed, base};
        const Perturbed p = perturb(spec);
        return py::make_tuple(p.a, p.input_distance);
      },
      py::arg("base"), py::arg("kind"), py::arg("scale"), py::arg("seed") = 0,
      "perturbed matrix and its distance from base");
  m.def(
      "run_experiment",
      [](const Matrix& base, const std::string& kind, const std::vector<double>& scales, int trials,
         std::uint64_t seed) {
        return to_python(report_to_json(run_experiment(base, parse_perturbation_kind(kind), scales, trials, seed)));
      },
      py::arg("base"), py::arg("kind"), py::arg("scales"), py::arg("trials") = 10, py::arg("seed") = 0);
  m.def(
      "min_schur_distance_search",
      [](const Matrix& t0, const Matrix& a, int budget) { return min_schur_distance_search(t0, a, budget).value; },
      py::arg("t0"), py::arg("a"), py::arg("budget") = 20);
  m.def(
      "reproduce", [](const std::string& name) { return to_python(reproduce(name)); }, py::arg("name"));
  m.def("reproduction_names", &reproduction_names);
}
