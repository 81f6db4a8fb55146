// Python bindings for the deformed-oscillator / q-Hermite core: parameter
// points, structure ladders, operators, polynomial families and their three
// evaluation routes, orthogonality measures, spectra, and coherent states.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qosc/coherent.hpp"
#include "qosc/measures.hpp"
#include "qosc/oscillator.hpp"
#include "qosc/polynomials.hpp"
#include "qosc/qseries.hpp"

namespace py = pybind11;
using namespace qosc;

namespace {

std::string radius_name(SeriesRadius k) {
  switch (k) {
    case SeriesRadius::zero: return "zero";
    case SeriesRadius::finite: return "finite";
    case SeriesRadius::infinite: return "infinite";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_qosc, m) {
  m.doc() =
      "Generalized deformed oscillator ladders, discrete q-Hermite-type "
      "polynomial families, orthogonality measures, spectra, and coherent "
      "states.";
  m.attr("__version__") = "0.1.0";

  // invalid-input exceptions surface as ValueError, runtime/numerical
  // failures as RuntimeError
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const TruncationError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  // ------------------------------------------------------------- oscillator

  py::class_<DeformationParams>(m, "DeformationParams",
                                "Parameter point (alpha, beta, l, q) of the "
                                "structure ladder f_n.")
      .def_readwrite("alpha", &DeformationParams::alpha)
      .def_readwrite("beta", &DeformationParams::beta)
      .def_readwrite("l", &DeformationParams::l)
      .def_readwrite("q", &DeformationParams::q)
      .def("qprime", &DeformationParams::qprime,
           "Derived base q' = q^(l-1).")
      .def("analytic_limit", &DeformationParams::analytic_limit,
           "True when l = 1 and the bracket takes its analytic limit n+1.")
      .def("__repr__", [](const DeformationParams& p) {
        return "DeformationParams(alpha=" + std::to_string(p.alpha) +
               ", beta=" + std::to_string(p.beta) +
               ", l=" + std::to_string(p.l) + ", q=" + std::to_string(p.q) +
               ")";
      });

  m.def("make_params", &make_params, py::arg("alpha"), py::arg("beta"),
        py::arg("l"), py::arg("q"),
        "Validated parameter point (q > 0, q != 1).");

  m.def(
      "preset",
      [](const std::string& name, double q, std::optional<double> l) {
        const Preset which = parse_preset(name);
        return l ? preset(which, q, *l) : preset(which, q);
      },
      py::arg("name"), py::arg("q"), py::arg("l") = py::none(),
      "Named parameter point: classical, BM-a, BM-b, symmetric (needs l), "
      "hermite_I, hermite_II.");

  m.def("structure_function", &structure_function, py::arg("params"),
        py::arg("n"), "Ladder value f_n; f_{-1} = 0.");
  m.def("log_structure_function", &log_structure_function, py::arg("params"),
        py::arg("n"), "log f_n, overflow-safe for large n.");

  py::enum_<OperatorFlavor>(m, "OperatorFlavor")
      .value("position", OperatorFlavor::position)
      .value("momentum", OperatorFlavor::momentum)
      .value("hamiltonian", OperatorFlavor::hamiltonian)
      .value("raising", OperatorFlavor::raising)
      .value("lowering", OperatorFlavor::lowering)
      .value("number", OperatorFlavor::number);

  py::class_<JacobiOperator>(m, "JacobiOperator",
                             "Truncated tridiagonal operator in the number "
                             "basis.")
      .def_readonly("dim", &JacobiOperator::dim)
      .def_readonly("diag", &JacobiOperator::diag)
      .def_readonly("offdiag", &JacobiOperator::offdiag)
      .def_readonly("flavor", &JacobiOperator::flavor);

  m.def("build_operator", &build_operator, py::arg("params"),
        py::arg("flavor"), py::arg("dim"));

  py::class_<RelationReport>(m, "RelationReport")
      .def_readonly("rel_quadratic_1", &RelationReport::rel_quadratic_1)
      .def_readonly("rel_quadratic_2", &RelationReport::rel_quadratic_2)
      .def_readonly("rel_number_lowering", &RelationReport::rel_number_lowering)
      .def_readonly("rel_number_raising", &RelationReport::rel_number_raising)
      .def_readonly("max_abs_deviation", &RelationReport::max_abs_deviation)
      .def_readonly("tol", &RelationReport::tol)
      .def_readonly("pass_", &RelationReport::pass)
      .def("__bool__", [](const RelationReport& r) { return r.pass; });

  m.def("verify_defining_relations", &verify_defining_relations,
        py::arg("params"), py::arg("dim") = 64, py::arg("tol") = 1e-12,
        "Check both quadratic ladder relations on the truncation interior.");

  m.def("hamiltonian_spectrum", &hamiltonian_spectrum, py::arg("params"),
        py::arg("n_max"),
        "Eigenvalues lambda_n = f_{n-1}^2 + f_n^2 for n = 0..n_max.");

  py::class_<SelfAdjointnessVerdict>(m, "SelfAdjointnessVerdict")
      .def_readonly("series_convergent",
                    &SelfAdjointnessVerdict::series_convergent)
      .def_readonly("deficiency_indices",
                    &SelfAdjointnessVerdict::deficiency_indices)
      .def_readonly("carleman_condition_holds",
                    &SelfAdjointnessVerdict::carleman_condition_holds)
      .def_readonly("log_concavity_holds",
                    &SelfAdjointnessVerdict::log_concavity_holds)
      .def_readonly("table_convergent",
                    &SelfAdjointnessVerdict::table_convergent)
      .def_readonly("on_table_boundary",
                    &SelfAdjointnessVerdict::on_table_boundary);

  m.def("classify_self_adjointness", &classify_self_adjointness,
        py::arg("params"),
        "Convergence of sum 1/f_n, deficiency indices, Carleman criterion, "
        "and the case-table verdict.");

  m.def("truncated_position_spectrum", &truncated_position_spectrum,
        py::arg("params"), py::arg("dim"),
        "Dense eigenvalues of the truncated position operator, sorted "
        "descending.");
  m.def("eigenvalue_count_below", &eigenvalue_count_below, py::arg("params"),
        py::arg("dim"), py::arg("mu"),
        "Inertia count of truncated-position eigenvalues below mu (LDL^T), "
        "robust when entries span hundreds of orders of magnitude.");

  // ------------------------------------------------------------ polynomials

  py::enum_<FamilyKind>(m, "FamilyKind")
      .value("classical", FamilyKind::classical)
      .value("discrete_I", FamilyKind::discrete_I)
      .value("discrete_II", FamilyKind::discrete_II)
      .value("generalized_I", FamilyKind::generalized_I)
      .value("generalized_II", FamilyKind::generalized_II);

  py::class_<PolynomialFamily>(m, "PolynomialFamily")
      .def_readonly("kind", &PolynomialFamily::kind)
      .def_readonly("params", &PolynomialFamily::params)
      .def_readonly("lattice_c", &PolynomialFamily::lattice_c);

  m.def("classical_family", &classical_family);
  m.def("discrete_family_I", &discrete_family_I, py::arg("q"));
  m.def("discrete_family_II", &discrete_family_II, py::arg("q"),
        py::arg("c") = 1.0);
  m.def("generalized_family_I", &generalized_family_I, py::arg("params"));
  m.def("generalized_family_II", &generalized_family_II, py::arg("params"),
        py::arg("c") = 1.0);

  py::enum_<RestrictionKind>(m, "RestrictionKind")
      .value("none", RestrictionKind::none)
      .value("alpha_eq_half_lminus1", RestrictionKind::alpha_eq_half_lminus1)
      .value("alpha_eq_minus_lminus1",
             RestrictionKind::alpha_eq_minus_lminus1);

  py::class_<ValidityRestriction>(m, "ValidityRestriction")
      .def_readonly("family", &ValidityRestriction::family)
      .def_readonly("restriction", &ValidityRestriction::restriction)
      .def_readonly("satisfied", &ValidityRestriction::satisfied);

  m.def("validity_restriction", &validity_restriction, py::arg("family"),
        "Which parameter restriction certifies the family's closed forms.");

  m.def("eval_recurrence", &eval_recurrence, py::arg("family"), py::arg("n"),
        py::arg("x"), "Three-term recurrence route.");
  m.def("eval_explicit", &eval_explicit, py::arg("family"), py::arg("n"),
        py::arg("x"), "Finite closed-form sum route.");
  m.def("eval_hypergeometric", &eval_hypergeometric, py::arg("family"),
        py::arg("n"), py::arg("x"),
        "Terminating basic-hypergeometric route; undefined at x = 0.");

  py::class_<PolyCoefficients>(m, "PolyCoefficients")
      .def_readonly("degree", &PolyCoefficients::degree)
      .def_readonly("coeffs", &PolyCoefficients::coeffs);

  m.def("coefficients", &coefficients, py::arg("family"), py::arg("n"),
        "Monomial coefficients; coeffs[i] multiplies x^i.");

  m.def("transition_coefficients", &transition_coefficients,
        py::arg("family"), py::arg("n"), py::arg("x"),
        "Orthonormal transition coefficient P_n(x).");
  m.def("transition_argument_scale", &transition_argument_scale,
        py::arg("family"));
  m.def("transition_prefactor", &transition_prefactor, py::arg("family"),
        py::arg("n"));

  py::class_<DualityPair>(m, "DualityPair")
      .def_readonly("lhs", &DualityPair::lhs)
      .def_readonly("rhs", &DualityPair::rhs);

  m.def("duality_transform_discrete", &duality_transform_discrete,
        py::arg("n"), py::arg("x"), py::arg("q"),
        "I-type at (ix, 1/q) against i^n times the II-type at (x, q).");
  m.def("duality_transform_generalized", &duality_transform_generalized,
        py::arg("params"), py::arg("n"), py::arg("x"));

  py::class_<ClassicalLimitReport>(m, "ClassicalLimitReport")
      .def_readonly("max_ladder_rel_dev",
                    &ClassicalLimitReport::max_ladder_rel_dev)
      .def_readonly("max_poly_rel_dev",
                    &ClassicalLimitReport::max_poly_rel_dev);

  m.def("classical_limit_check", &classical_limit_check, py::arg("q_near_1"),
        py::arg("n_max"), py::arg("x_grid"),
        "Deviation of the discrete-I ladder and polynomials from their "
        "classical limits at q near 1.");

  // ---------------------------------------------------------------- qseries

  m.def(
      "q_pochhammer",
      [](cplx a, double q, int n) { return q_pochhammer(a, q, n); },
      py::arg("a"), py::arg("q"), py::arg("n"),
      "(a; q)_n = prod_{k<n} (1 - a q^k).");
  m.def(
      "q_pochhammer_inf",
      [](cplx a, double q, double tol) {
        const auto s = q_pochhammer_inf(a, q, tol);
        return py::make_tuple(s.value, s.abs_error_bound, s.terms_used);
      },
      py::arg("a"), py::arg("q"), py::arg("tol") = 1e-15,
      "(a; q)_inf as (value, abs_error_bound, terms_used); needs 0 < q < 1.");

  // ---------------------------------------------------------------- measures

  py::class_<WeightedAtom>(m, "WeightedAtom")
      .def_readonly("point", &WeightedAtom::point)
      .def_readonly("weight", &WeightedAtom::weight);

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def_readonly("kind", &DiscreteMeasure::kind)
      .def_readonly("atoms", &DiscreteMeasure::atoms)
      .def_readonly("scale", &DiscreteMeasure::scale)
      .def_readonly("lattice_c", &DiscreteMeasure::lattice_c)
      .def_readonly("k_max", &DiscreteMeasure::k_max)
      .def_readonly("k_lo", &DiscreteMeasure::k_lo)
      .def_readonly("k_hi", &DiscreteMeasure::k_hi);

  m.def("build_measure", &build_measure, py::arg("family"), py::arg("k_max"),
        "Atomic orthogonality measure on the geometric lattice; requires "
        "on-restriction parameters for the generalized families.");

  py::class_<OrthogonalityCheck>(m, "OrthogonalityCheck")
      .def_readonly("lhs", &OrthogonalityCheck::lhs)
      .def_readonly("rhs", &OrthogonalityCheck::rhs)
      .def_readonly("abs_gap", &OrthogonalityCheck::abs_gap)
      .def_readonly("tail_ok", &OrthogonalityCheck::tail_ok);

  m.def("verify_orthogonality", &verify_orthogonality, py::arg("family"),
        py::arg("m"), py::arg("n"), py::arg("k_max"),
        "Lattice sum of weighted transition-coefficient products against "
        "the closed-form right side.");

  py::class_<SpectrumLattice>(m, "SpectrumLattice")
      .def_readonly("applicable", &SpectrumLattice::applicable)
      .def_readonly("points", &SpectrumLattice::points)
      .def_readonly("accumulates_at_zero",
                    &SpectrumLattice::accumulates_at_zero)
      .def_readonly("scale", &SpectrumLattice::scale)
      .def_readonly("k_lo", &SpectrumLattice::k_lo)
      .def_readonly("k_hi", &SpectrumLattice::k_hi);

  m.def("analytic_spectrum", &analytic_spectrum, py::arg("family"),
        py::arg("k_range") = 40,
        "Signed geometric lattice supporting the measure; not applicable "
        "for the classical family.");

  py::class_<SpectrumMatchRow>(m, "SpectrumMatchRow")
      .def_readonly("dim", &SpectrumMatchRow::dim)
      .def_readonly("rel_gaps", &SpectrumMatchRow::rel_gaps)
      .def_readonly("near_zero_count", &SpectrumMatchRow::near_zero_count)
      .def_readonly("smallest_abs", &SpectrumMatchRow::smallest_abs);

  py::class_<SpectraComparison>(m, "SpectraComparison")
      .def_readonly("applicable", &SpectraComparison::applicable)
      .def_readonly("rows", &SpectraComparison::rows)
      .def_readonly("gaps_shrink", &SpectraComparison::gaps_shrink);

  m.def("compare_spectra", &compare_spectra, py::arg("family"),
        py::arg("dim"), py::arg("top_k"),
        "Truncated Jacobi eigenvalues against the analytic lattice at dims "
        "dim/4, dim/2, dim.");

  // ---------------------------------------------------------------- coherent

  m.def("structure_factorial", &structure_factorial, py::arg("params"),
        py::arg("n"), "Product f_0 ... f_{n-1}; empty product is 1.");
  m.def("log_structure_factorial", &log_structure_factorial,
        py::arg("params"), py::arg("n"));

  py::class_<CoherentState>(m, "CoherentState")
      .def_readonly("z", &CoherentState::z)
      .def_readonly("coefficients", &CoherentState::coefficients)
      .def_readonly("norm_factor", &CoherentState::norm_factor)
      .def_readonly("log_norm_factor", &CoherentState::log_norm_factor)
      .def_readonly("N_trunc", &CoherentState::N_trunc)
      .def_readonly("tail_bound", &CoherentState::tail_bound)
      .def_readonly("tail_certified", &CoherentState::tail_certified);

  m.def("coherent_state", &coherent_state, py::arg("params"), py::arg("z"),
        py::arg("n_trunc") = 200, py::arg("require_certified") = false,
        "Normalized truncated eigenstate of the lowering operator.  When "
        "the defining series has zero radius the truncated state is still "
        "constructed; require_certified=True raises instead.");

  m.def("eigen_residual", &eigen_residual, py::arg("state"),
        py::arg("params"),
        "Max interior residual |f_n c_{n+1} - z c_n| of the eigen-relation.");
  m.def("overlap", &overlap, py::arg("a"), py::arg("b"),
        "Inner product of two normalized truncated states.");
  m.def("normalization_factor", &normalization_factor, py::arg("params"),
        py::arg("z_abs_sq"),
        "Defining normalization series evaluated at |z|^2 when it "
        "converges; may overflow to inf.");

  m.def(
      "coherent_series_radius",
      [](const DeformationParams& p) {
        double r2 = 0.0;
        const SeriesRadius k = coherent_series_radius(p, &r2);
        return py::make_tuple(radius_name(k), r2);
      },
      py::arg("params"),
      "Radius regime of the defining series as (kind, radius_sq): kind is "
      "'zero', 'finite', or 'infinite'.");

  py::class_<GeneratingFunctionCheck>(m, "GeneratingFunctionCheck")
      .def_readonly("series_side", &GeneratingFunctionCheck::series_side)
      .def_readonly("closed_side", &GeneratingFunctionCheck::closed_side)
      .def_readonly("gap", &GeneratingFunctionCheck::gap)
      .def_readonly("identity_mismatch",
                    &GeneratingFunctionCheck::identity_mismatch)
      .def_readonly("terms_used", &GeneratingFunctionCheck::terms_used);

  m.def("generating_function_check", &generating_function_check,
        py::arg("family"), py::arg("x"), py::arg("t"),
        py::arg("n_max") = 400,
        "Polynomial generating series against its closed form; raises "
        "RuntimeError when the series diverges at t.");
}
