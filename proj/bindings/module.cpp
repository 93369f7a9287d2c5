#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "rsreg/calculus.hpp"
#include "rsreg/io.hpp"
#include "rsreg/linalg.hpp"
#include "rsreg/model.hpp"
#include "rsreg/shift.hpp"
#include "rsreg/sketch.hpp"
#include "rsreg/solver.hpp"
#include "rsreg/spectral.hpp"
#include "rsreg/synth.hpp"

namespace py = pybind11;
using namespace rsreg;

namespace {

ProblemInstance make_instance(const Matrix& a, const Vector& b,
                              const Vector& w, const std::string& kind) {
    ProblemInstance instance;
    instance.A = a;
    instance.b = b;
    instance.w = w;
    instance.kind = parse_function_kind(kind);
    instance.validate();
    return instance;
}

}  // namespace

PYBIND11_MODULE(rsreg, m) {
    m.doc() =
        "Sketched Newton solver and certificate suite for rescaled "
        "hyperbolic-function regression";

    py::register_exception<Error>(m, "Error");

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init(&make_instance), py::arg("A"), py::arg("b"),
             py::arg("w"), py::arg("kind") = "exp")
        .def_readonly("A", &ProblemInstance::A)
        .def_readonly("b", &ProblemInstance::b)
        .def_readonly("w", &ProblemInstance::w)
        .def_property_readonly(
            "kind",
            [](const ProblemInstance& p) { return to_string(p.kind); })
        .def_property_readonly("n", &ProblemInstance::n)
        .def_property_readonly("d", &ProblemInstance::d);

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("x", &Evaluation::x)
        .def_readonly("ax", &Evaluation::ax)
        .def_readonly("u", &Evaluation::u)
        .def_readonly("v", &Evaluation::v)
        .def_readonly("alpha", &Evaluation::alpha)
        .def_readonly("c", &Evaluation::c)
        .def_readonly("loss_u", &Evaluation::loss_u)
        .def_readonly("loss_reg", &Evaluation::loss_reg)
        .def_readonly("loss", &Evaluation::loss);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("r", &BoundReport::r)
        .def_readonly("u_norm", &BoundReport::u_norm)
        .def_readonly("u_ceiling", &BoundReport::u_ceiling)
        .def_readonly("holds_u", &BoundReport::holds_u)
        .def_readonly("alpha_abs", &BoundReport::alpha_abs)
        .def_readonly("alpha_ceiling", &BoundReport::alpha_ceiling)
        .def_readonly("holds_alpha", &BoundReport::holds_alpha)
        .def_readonly("c_norm", &BoundReport::c_norm)
        .def_readonly("c_ceiling", &BoundReport::c_ceiling)
        .def_readonly("c_ceiling_tight", &BoundReport::c_ceiling_tight)
        .def_readonly("holds_c", &BoundReport::holds_c)
        .def("all", &BoundReport::all);

    py::class_<HessianView>(m, "HessianView")
        .def_readonly("b11", &HessianView::b11)
        .def_readonly("b12", &HessianView::b12)
        .def_readonly("b13", &HessianView::b13)
        .def_readonly("b14", &HessianView::b14)
        .def_readonly("b21", &HessianView::b21)
        .def_readonly("b22", &HessianView::b22)
        .def_readonly("b_full", &HessianView::b_full)
        .def_readonly("diag_surrogate", &HessianView::diag_surrogate)
        .def_readonly("h_full", &HessianView::h_full);

    py::class_<SketchedDiagonal>(m, "SketchedDiagonal")
        .def_readonly("indices", &SketchedDiagonal::indices)
        .def_readonly("values", &SketchedDiagonal::values)
        .def_readonly("n", &SketchedDiagonal::n)
        .def_readonly("seed", &SketchedDiagonal::seed)
        .def_readonly("eps", &SketchedDiagonal::eps)
        .def_readonly("delta", &SketchedDiagonal::delta)
        .def_readonly("oversampling", &SketchedDiagonal::oversampling)
        .def_property_readonly("nnz", &SketchedDiagonal::nnz)
        .def("dense", &SketchedDiagonal::dense);

    py::class_<CeilingValue>(m, "CeilingValue")
        .def_readonly("value", &CeilingValue::value)
        .def_readonly("log_value", &CeilingValue::log_value)
        .def_readonly("overflowed", &CeilingValue::overflowed)
        .def_readonly("r_hypothesis_met", &CeilingValue::r_hypothesis_met);

    py::class_<GTermReport>(m, "GTermReport")
        .def_readonly("norms", &GTermReport::norms)
        .def_readonly("sum", &GTermReport::sum)
        .def_readonly("r_inf", &GTermReport::r_inf)
        .def_readonly("du_norm", &GTermReport::du_norm)
        .def_readonly("dc_norm", &GTermReport::dc_norm)
        .def_readonly("part1_ceiling", &GTermReport::part1_ceiling)
        .def_readonly("part2_ceiling", &GTermReport::part2_ceiling)
        .def_readonly("part1_ok", &GTermReport::part1_ok)
        .def_readonly("part2_ok", &GTermReport::part2_ok);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("iter", &IterationRecord::iter)
        .def_readonly("x", &IterationRecord::x)
        .def_readonly("loss", &IterationRecord::loss)
        .def_readonly("grad_norm", &IterationRecord::grad_norm)
        .def_readonly("step_norm", &IterationRecord::step_norm)
        .def_readonly("dist_to_ref", &IterationRecord::dist_to_ref)
        .def_readonly("sketch_nnz", &IterationRecord::sketch_nnz)
        .def_readonly("wall_ms", &IterationRecord::wall_ms);

    py::class_<ConvergenceTrace>(m, "ConvergenceTrace")
        .def_readonly("iterations", &ConvergenceTrace::iterations)
        .def_property_readonly(
            "status",
            [](const ConvergenceTrace& t) { return to_string(t.status); })
        .def_readonly("final_x", &ConvergenceTrace::final_x);

    py::class_<GoodnessCertificate>(m, "GoodnessCertificate")
        .def_readonly("l", &GoodnessCertificate::l)
        .def_readonly("m", &GoodnessCertificate::m)
        .def_readonly("r0", &GoodnessCertificate::r0)
        .def_readonly("ok_local_min", &GoodnessCertificate::ok_local_min)
        .def_readonly("ok_lipschitz", &GoodnessCertificate::ok_lipschitz)
        .def_readonly("ok_init", &GoodnessCertificate::ok_init)
        .def("good", &GoodnessCertificate::good);

    py::class_<ContractionStep>(m, "ContractionStep")
        .def_readonly("iter", &ContractionStep::iter)
        .def_readonly("r_before", &ContractionStep::r_before)
        .def_readonly("r_after", &ContractionStep::r_after)
        .def_readonly("ratio", &ContractionStep::ratio)
        .def_readonly("ceiling", &ContractionStep::ceiling)
        .def_readonly("ok", &ContractionStep::ok);

    py::class_<ContractionAudit>(m, "ContractionAudit")
        .def_readonly("steps", &ContractionAudit::steps)
        .def_readonly("all_ok", &ContractionAudit::all_ok);

    py::class_<ShiftResult>(m, "ShiftResult")
        .def_readonly("delta_b", &ShiftResult::delta_b)
        .def_readonly("reconstruction_residual",
                      &ShiftResult::reconstruction_residual)
        .def_readonly("bound_value", &ShiftResult::bound_value)
        .def_readonly("within_bound", &ShiftResult::within_bound)
        .def_readonly("alpha_inv_abs", &ShiftResult::alpha_inv_abs)
        .def_readonly("dc_norm", &ShiftResult::dc_norm);

    py::class_<BlockBoundReport>(m, "BlockBoundReport")
        .def_readonly("rank_cross_norm", &BlockBoundReport::rank_cross_norm)
        .def_readonly("rank_cross_ceiling",
                      &BlockBoundReport::rank_cross_ceiling)
        .def_readonly("diag1_norm", &BlockBoundReport::diag1_norm)
        .def_readonly("diag1_ceiling", &BlockBoundReport::diag1_ceiling)
        .def_readonly("diag2_norm", &BlockBoundReport::diag2_norm)
        .def_readonly("diag2_ceiling", &BlockBoundReport::diag2_ceiling)
        .def_readonly("b_norm", &BlockBoundReport::b_norm)
        .def_readonly("b_ceiling", &BlockBoundReport::b_ceiling)
        .def("all", &BlockBoundReport::all);

    m.def("evaluate", &evaluate, py::arg("instance"), py::arg("x"));
    m.def("check_norm_bounds", &check_norm_bounds, py::arg("instance"),
          py::arg("eval"), py::arg("r"));
    m.def("gradient", &gradient, py::arg("instance"), py::arg("eval"));
    m.def("hessian", &hessian, py::arg("instance"), py::arg("eval"));
    m.def("hessian_blocks", &hessian_blocks, py::arg("instance"),
          py::arg("eval"));
    m.def("hessian_diag_surrogate", &hessian_diag_surrogate,
          py::arg("instance"), py::arg("eval"));
    m.def("fd_gradient", &fd_gradient, py::arg("instance"), py::arg("x"),
          py::arg("step") = kFdGradientStep);
    m.def("fd_hessian", &fd_hessian, py::arg("instance"), py::arg("x"),
          py::arg("step") = kFdHessianStep);

    m.def(
        "weight_threshold",
        [](double r0, double sigma_min_a, double l, const std::string& mode) {
            return weight_threshold(r0, sigma_min_a, l,
                                    mode == "dominance"
                                        ? ThresholdMode::Dominance
                                        : ThresholdMode::Psd);
        },
        py::arg("r0"), py::arg("sigma_min"), py::arg("l"),
        py::arg("mode") = "psd");
    m.def("certify_psd", &certify_psd, py::arg("h_full"), py::arg("l"));
    m.def("certify_dominance", &certify_dominance, py::arg("b_full"),
          py::arg("w"));
    m.def("point_radius", &point_radius, py::arg("instance"), py::arg("eval"));
    m.def("lipschitz_ceiling", &lipschitz_ceiling, py::arg("n"), py::arg("r"));
    m.def("ceiling_holds", &ceiling_holds, py::arg("ratio"),
          py::arg("ceiling"));
    m.def("empirical_lipschitz", &empirical_lipschitz, py::arg("instance"),
          py::arg("x"), py::arg("y"), py::arg("r"));
    m.def("g_terms", &g_terms, py::arg("instance"), py::arg("x"), py::arg("y"),
          py::arg("r"));
    m.def("check_block_bounds", &check_block_bounds, py::arg("instance"),
          py::arg("eval"));
    py::class_<SpectralCertificate>(m, "SpectralCertificate")
        .def_readonly("r0", &SpectralCertificate::r0)
        .def_readonly("r_inf", &SpectralCertificate::r_inf)
        .def_readonly("sigma_min", &SpectralCertificate::sigma_min)
        .def_readonly("l", &SpectralCertificate::l)
        .def_readonly("m", &SpectralCertificate::m)
        .def_readonly("passed", &SpectralCertificate::passed)
        .def("all", &SpectralCertificate::all);
    m.def("certify_spectral", &certify_spectral, py::arg("instance"),
          py::arg("x"), py::arg("y"), py::arg("l"), py::arg("r"));
    m.def("spectral_norm", &spectral_norm, py::arg("m"));
    m.def("sigma_min", &sigma_min, py::arg("m"));

    m.def("leverage_scores", &leverage_scores, py::arg("A"),
          py::arg("d_diag"));
    m.def("subsample", &subsample, py::arg("A"), py::arg("d_diag"),
          py::arg("eps"), py::arg("delta"), py::arg("seed"),
          py::arg("oversampling") = kDefaultOversampling);
    m.def("verify_sandwich", &verify_sandwich, py::arg("A"), py::arg("d_diag"),
          py::arg("sketched"), py::arg("eps"));
    m.def("sketched_gram", &sketched_gram, py::arg("A"), py::arg("sketched"));

    m.def("newton_step_exact", &newton_step_exact, py::arg("instance"),
          py::arg("x"));
    m.def("newton_step_sketched", &newton_step_sketched, py::arg("instance"),
          py::arg("x"), py::arg("eps1"), py::arg("delta1"), py::arg("seed"));
    m.def(
        "solve",
        [](const ProblemInstance& instance, const Vector& x0,
           const std::string& mode, double eps, double delta, double eps1,
           int max_iters, std::uint64_t seed,
           const std::optional<Vector>& reference,
           const std::optional<int>& fixed_iterations, bool timing,
           double damping) {
            SolveOptions options;
            options.mode = parse_solve_mode(mode);
            options.eps = eps;
            options.delta = delta;
            options.eps1 = eps1;
            options.max_iters = max_iters;
            options.seed = seed;
            options.reference = reference;
            options.fixed_iterations = fixed_iterations;
            options.timing = timing;
            options.damping = damping;
            return solve(instance, x0, options);
        },
        py::arg("instance"), py::arg("x0"), py::arg("mode") = "exact",
        py::arg("eps") = 1e-8, py::arg("delta") = 0.05,
        py::arg("eps1") = 0.05, py::arg("max_iters") = 50, py::arg("seed") = 0,
        py::arg("reference") = std::nullopt,
        py::arg("fixed_iterations") = std::nullopt, py::arg("timing") = true,
        py::arg("damping") = 1.0);
    m.def("certify_goodness", &certify_goodness, py::arg("instance"),
          py::arg("x_star"), py::arg("x0"), py::arg("l"), py::arg("m"),
          py::arg("stationarity_tol") = 1e-8);
    m.def("audit_contraction", &audit_contraction, py::arg("trace"),
          py::arg("x_star"), py::arg("l"), py::arg("m"), py::arg("eps0"));

    m.def("shift_in_x", &shift_in_x, py::arg("instance"), py::arg("x_t"),
          py::arg("x_next"), py::arg("r"));
    m.def("shift_in_A", &shift_in_A, py::arg("instance_t"),
          py::arg("instance_next"), py::arg("x"), py::arg("r"));

    m.def(
        "synthesize",
        [](Index n, Index d, std::uint64_t seed, double radius,
           const std::string& kind, const std::string& weight_policy,
           double l) {
            SynthesisOptions options;
            options.n = n;
            options.d = d;
            options.seed = seed;
            options.radius = radius;
            options.kind = parse_function_kind(kind);
            options.policy = parse_weight_policy(weight_policy);
            options.l = l;
            SynthesizedInstance synth = synthesize(options);
            return py::make_tuple(synth.instance, synth.anchor);
        },
        py::arg("n"), py::arg("d"), py::arg("seed") = 0,
        py::arg("radius") = 1.0, py::arg("kind") = "exp",
        py::arg("weight_policy") = "explicit", py::arg("l") = 1.0);

    m.def(
        "trace_to_json",
        [](const ConvergenceTrace& trace) {
            return trace_to_json(trace, RunConfig{});
        },
        py::arg("trace"));

    m.attr("OVERFLOW_GUARD") = kOverflowGuard;
    m.attr("DEFAULT_OVERSAMPLING") = kDefaultOversampling;
    m.attr("__version__") = "0.1.0";
}
