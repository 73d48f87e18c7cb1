#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parrondo/classical.hpp"
#include "parrondo/geodesic.hpp"
#include "parrondo/hidden.hpp"
#include "parrondo/quantum.hpp"
#include "parrondo/verify.hpp"
#include "parrondo/walks.hpp"

namespace py = pybind11;
using namespace parrondo;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parrondo-game numerics: Markov, hidden, quantum, geodesic, and walk games";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  // ---- core types ----
  py::class_<ProbVector>(m, "ProbVector")
      .def(py::init<RVector>())
      .def_readonly("entries", &ProbVector::entries)
      .def_static("uniform", &ProbVector::uniform)
      .def_static("basis", &ProbVector::basis);

  py::class_<StochasticMatrix>(m, "StochasticMatrix")
      .def(py::init<RMatrix>())
      .def_readonly("entries", &StochasticMatrix::entries)
      .def_property_readonly("dim", &StochasticMatrix::dim);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<CMatrix>())
      .def_readonly("entries", &DensityMatrix::entries)
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed)
      .def_static("pure_basis", &DensityMatrix::pure_basis);

  py::class_<FixedPointReport>(m, "FixedPointReport")
      .def_readonly("vector", &FixedPointReport::vector)
      .def_readonly("matrix", &FixedPointReport::matrix)
      .def_readonly("iterations", &FixedPointReport::iterations)
      .def_readonly("residual", &FixedPointReport::residual)
      .def_readonly("converged", &FixedPointReport::converged);

  m.def("pf_fixed_point", &pf_fixed_point, py::arg("matrix"),
        py::arg("tol") = kDefaultFixedPointTol,
        py::arg("max_iter") = kDefaultFixedPointMaxIter, py::arg("starts") = 4);
  m.def("trace_norm", &trace_norm);
  m.def("vec2", &vec2);
  m.def("unvec2", &unvec2);

  // ---- classical games ----
  py::class_<ClassicalGame>(m, "ClassicalGame")
      .def(py::init<StochasticMatrix, std::set<int>, ProbVector>(), py::arg("transition"),
           py::arg("win_states"), py::arg("initial"));
  m.def("classical_win_prob", &classical_win_prob);
  m.def("combine_classical", &combine_classical);
  m.def("make_T", &make_T, py::arg("P_A"), py::arg("eps"), py::arg("s"));
  m.def("make_Tprime", &make_Tprime, py::arg("P_Aprime"), py::arg("eps"));
  m.def("make_S", &make_S, py::arg("P_A"), py::arg("zeta"));
  m.def("make_Sprime", &make_Sprime, py::arg("P_Aprime"), py::arg("xi"));
  py::class_<RegionCheckResult>(m, "RegionCheckResult")
      .def_readonly("within_bounds", &RegionCheckResult::within_bounds)
      .def_readonly("observed_min", &RegionCheckResult::observed_min)
      .def_readonly("observed_max", &RegionCheckResult::observed_max);
  m.def("two_state_region_check", &two_state_region_check, py::arg("P_A"),
        py::arg("P_Aprime"), py::arg("p"), py::arg("grid"));

  // ---- hidden games ----
  py::class_<HiddenPinceNez>(m, "HiddenPinceNez")
      .def(py::init<RMatrix, RMatrix>(), py::arg("branch_A"), py::arg("branch_Atilde"))
      .def_readonly("branch_A", &HiddenPinceNez::branch_A)
      .def_readonly("branch_Atilde", &HiddenPinceNez::branch_Atilde)
      .def("round_map", &HiddenPinceNez::round_map);
  m.def("hidden_win_prob", &hidden_win_prob);
  m.def("combine_hidden", &combine_hidden);
  m.def("hidden_bounds", &hidden_bounds);
  m.def("hidden_limit", &hidden_limit, py::arg("pince_nez"),
        py::arg("tol") = kDefaultFixedPointTol, py::arg("max_iter") = (1L << 40));
  py::class_<ReducedHiddenGame>(m, "ReducedHiddenGame")
      .def(py::init<Eigen::RowVector2d, StochasticMatrix>(), py::arg("v"), py::arg("N"));
  m.def("reduced_limit", &reduced_limit);
  py::class_<HiddenRegionSample>(m, "HiddenRegionSample")
      .def_readonly("observed_min", &HiddenRegionSample::observed_min)
      .def_readonly("observed_max", &HiddenRegionSample::observed_max)
      .def_readonly("violations", &HiddenRegionSample::violations);
  m.def("hidden_region_sample", &hidden_region_sample, py::arg("p"), py::arg("P_A"),
        py::arg("P_Aprime"), py::arg("samples"), py::arg("seed"));
  m.def("make_hidden_two_state_family", &make_hidden_two_state_family);
  m.def("make_hidden_embedding_3state", &make_hidden_embedding_3state);

  // ---- quantum games ----
  py::class_<QuantumPinceNez>(m, "QuantumPinceNez")
      .def(py::init<std::vector<CMatrix>, std::vector<CMatrix>>(), py::arg("kraus_A"),
           py::arg("kraus_Atilde"))
      .def_property_readonly("dim", &QuantumPinceNez::dim);
  m.def("apply_pince_nez", &apply_pince_nez);
  m.def("quantum_win_prob", &quantum_win_prob);
  m.def("combine_quantum", &combine_quantum);
  py::class_<ExtremalParams>(m, "ExtremalParams")
      .def(py::init<Eigen::Vector4cd, Eigen::Vector4cd>(), py::arg("u"), py::arg("v"))
      .def_readonly("u", &ExtremalParams::u)
      .def_readonly("v", &ExtremalParams::v);
  py::class_<WMPair>(m, "WMPair")
      .def_readonly("w", &WMPair::w)
      .def_readonly("M", &WMPair::M);
  m.def("build_wM", &build_wM);
  m.def("quantum_limit_via_wM", &quantum_limit_via_wM);
  m.def("quantum_combined_limit", &quantum_combined_limit);
  py::class_<QuantumRegionResult>(m, "QuantumRegionResult")
      .def_readonly("value", &QuantumRegionResult::value)
      .def_readonly("feasible", &QuantumRegionResult::feasible)
      .def_readonly("constraint_error", &QuantumRegionResult::constraint_error);
  m.def("quantum_region_min", &quantum_region_min, py::arg("p"), py::arg("P_A"),
        py::arg("P_Aprime"), py::arg("restarts"), py::arg("seed"), py::arg("tol") = 1e-6,
        py::arg("maximize") = false);
  m.def("chain_joint_probs", &chain_joint_probs);

  // ---- geodesic games ----
  py::class_<Wavefunction>(m, "Wavefunction")
      .def(py::init<CVector>())
      .def_readonly("amplitudes", &Wavefunction::amplitudes);
  py::class_<EffectOperator>(m, "EffectOperator")
      .def(py::init<CMatrix>())
      .def_readonly("entries", &EffectOperator::entries);
  py::class_<BMatrix>(m, "BMatrix")
      .def_readonly("B", &BMatrix::B)
      .def_readonly("delta", &BMatrix::delta);
  m.def("dist_round", &dist_round);
  m.def("dist_trace", &dist_trace);
  m.def("phase_align", &phase_align);
  m.def("geodesic_point", &geodesic_point);
  m.def("build_B", &build_B);
  m.def("geo_prob", &geo_prob);
  m.def("geo_bounds", &geo_bounds);
  py::enum_<Extreme>(m, "Extreme").value("min", Extreme::min).value("max", Extreme::max);
  py::class_<ExtremeConstruction>(m, "ExtremeConstruction")
      .def_readonly("B", &ExtremeConstruction::B)
      .def_readonly("delta0", &ExtremeConstruction::delta0)
      .def_readonly("theta0", &ExtremeConstruction::theta0)
      .def_readonly("value", &ExtremeConstruction::value);
  m.def("achieve_extreme", &achieve_extreme);
  m.def("no_paradox_check", &no_paradox_check);

  // ---- quantum walks ----
  py::enum_<Spin>(m, "Spin").value("up", Spin::up).value("down", Spin::down);
  py::class_<Window>(m, "Window")
      .def(py::init<int, int>(), py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Window::lo)
      .def_readonly("hi", &Window::hi)
      .def("index", &Window::index);
  py::class_<VerblunskyConfig> vc(m, "VerblunskyConfig");
  py::enum_<VerblunskyConfig::Kind>(vc, "Kind")
      .value("half_line", VerblunskyConfig::Kind::half_line)
      .value("full_line", VerblunskyConfig::Kind::full_line);
  vc.def(py::init<VerblunskyConfig::Kind, std::map<int, Complex>>(), py::arg("kind"),
         py::arg("coeffs"))
      .def("alpha", &VerblunskyConfig::alpha);
  py::class_<WalkState>(m, "WalkState")
      .def(py::init<Window, CVector>(), py::arg("window"), py::arg("amplitudes"))
      .def_readonly("window", &WalkState::window)
      .def_readonly("amplitudes", &WalkState::amplitudes)
      .def_static("basis", &WalkState::basis);
  py::class_<Coin> coin(m, "Coin");
  py::enum_<Coin::Form>(coin, "Form")
      .value("first", Coin::Form::first)
      .value("second", Coin::Form::second);
  coin.def(py::init<Eigen::Matrix2cd, Coin::Form>(), py::arg("U"), py::arg("form"))
      .def_readonly("U", &Coin::U);
  py::class_<WalkOperator>(m, "WalkOperator")
      .def("apply", &WalkOperator::apply)
      .def("dense", &WalkOperator::dense);
  m.def("cmv_walk", &cmv_walk);
  m.def("cmv_matrix", &cmv_matrix);
  m.def("coined_walk", &coined_walk);
  m.def("coined_walk_matrix", &coined_walk_matrix);
  m.def("evolve", &evolve);
  m.def("walk_win_prob", &walk_win_prob);
  py::class_<WalkGameResult>(m, "WalkGameResult")
      .def_readonly("P_A", &WalkGameResult::P_A)
      .def_readonly("P_Aprime", &WalkGameResult::P_Aprime)
      .def_readonly("P_geo", &WalkGameResult::P_geo);
  m.def("walk_geo_game", &walk_geo_game);
  m.def("walk_b_matrix", &walk_b_matrix);
  py::enum_<SymmetryCase>(m, "SymmetryCase")
      .value("i", SymmetryCase::i)
      .value("ii", SymmetryCase::ii)
      .value("iii", SymmetryCase::iii)
      .value("iv", SymmetryCase::iv)
      .value("v", SymmetryCase::v)
      .value("vi", SymmetryCase::vi);
  py::class_<SymmetryDetection>(m, "SymmetryDetection")
      .def_readonly("which", &SymmetryDetection::which)
      .def_readonly("omega", &SymmetryDetection::omega);
  m.def("detect_symmetry_case", &detect_symmetry_case);
  m.def("konno_sum_check", &konno_sum_check);
  py::class_<GaussianWalkGame>(m, "GaussianWalkGame")
      .def_readonly("triple", &GaussianWalkGame::triple)
      .def_readonly("momentum_a", &GaussianWalkGame::momentum_a)
      .def_readonly("overlap", &GaussianWalkGame::overlap);
  m.def("example_934_game", &example_934_game, py::arg("eps"), py::arg("sigma1"),
        py::arg("sigma2"), py::arg("n"));
  m.def("solve_momentum_a", &solve_momentum_a);

  // ---- verification suites ----
  py::class_<verify::PropertyResult>(m, "PropertyResult")
      .def_readonly("name", &verify::PropertyResult::name)
      .def_readonly("pass_", &verify::PropertyResult::pass)
      .def_readonly("detail", &verify::PropertyResult::detail);
  m.def("run_suite", &verify::run_suite, py::arg("name"), py::arg("seed") = 0,
        py::arg("samples") = 0);
  m.def("suite_names", &verify::suite_names);
}
