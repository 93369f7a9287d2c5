// Command-line front end: instance ingestion or synthesis, solver runs, and
// the certificate suite.

#include <cxxabi.h>

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <typeinfo>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsreg/calculus.hpp"
#include "rsreg/io.hpp"
#include "rsreg/linalg.hpp"
#include "rsreg/model.hpp"
#include "rsreg/rng.hpp"
#include "rsreg/shift.hpp"
#include "rsreg/sketch.hpp"
#include "rsreg/solver.hpp"
#include "rsreg/spectral.hpp"
#include "rsreg/synth.hpp"

using namespace rsreg;

namespace {

std::string qualified_name(const std::exception& err) {
    int status = 0;
    std::unique_ptr<char, void (*)(void*)> demangled(
        abi::__cxa_demangle(typeid(err).name(), nullptr, nullptr, &status),
        std::free);
    return status == 0 && demangled ? demangled.get() : typeid(err).name();
}

struct CliOptions {
    std::string function = "exp";
    std::string matrix_path;
    std::string target_path;
    std::string weights_path;
    std::string weight_policy;
    std::string synthesize_spec;
    std::uint64_t seed = 0;
    double radius = 1.0;
    std::string mode = "exact";
    double eps = 1e-8;
    double delta = 0.05;
    double eps1 = 0.05;
    int max_iters = 50;
    std::string out = "trace.json";
    std::string x0_path;
    bool certify = false;
    bool no_timing = false;
};

struct PreparedInstance {
    ProblemInstance instance;
    Vector probe_point;  // anchor of the synthesis or a seeded sample
    bool synthesized = false;
};

// Seeded point inside the radius ball that also keeps ||Ax||_inf small.
Vector sample_probe_point(const ProblemInstance& instance, double radius,
                          std::uint64_t seed) {
    Rng rng(seed);
    Vector x(instance.d());
    for (Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
    if (x.norm() == 0.0) return x;
    x *= 0.5 * radius / x.norm();
    const double reach = (instance.A * x).lpNorm<Eigen::Infinity>();
    if (reach > 1.0) x /= reach;
    return x;
}

PreparedInstance prepare_instance(const CliOptions& cli) {
    const FunctionKind kind = parse_function_kind(cli.function);
    PreparedInstance prepared;
    if (!cli.synthesize_spec.empty()) {
        SynthesisOptions options;
        const auto comma = cli.synthesize_spec.find(',');
        if (comma == std::string::npos)
            throw Error("--synthesize expects n,d");
        options.n = std::stol(cli.synthesize_spec.substr(0, comma));
        options.d = std::stol(cli.synthesize_spec.substr(comma + 1));
        options.seed = cli.seed;
        options.radius = cli.radius;
        options.kind = kind;
        options.policy = cli.weight_policy.empty()
                             ? WeightPolicy::Explicit
                             : parse_weight_policy(cli.weight_policy);
        SynthesizedInstance synth = synthesize(options);
        prepared.instance = std::move(synth.instance);
        prepared.probe_point = std::move(synth.anchor);
        prepared.synthesized = true;
        return prepared;
    }

    if (cli.matrix_path.empty() || cli.target_path.empty())
        throw Error("either --synthesize or --matrix/--target is required");
    prepared.instance = ingest(
        kind, cli.matrix_path, cli.target_path,
        cli.weights_path.empty() ? std::nullopt
                                 : std::optional<std::string>(cli.weights_path));
    prepared.probe_point =
        sample_probe_point(prepared.instance, cli.radius, cli.seed);

    if (!cli.weight_policy.empty()) {
        const WeightPolicy policy = parse_weight_policy(cli.weight_policy);
        if (policy != WeightPolicy::Explicit) {
            const Evaluation eval =
                evaluate(prepared.instance, prepared.probe_point);
            const double r0 = point_radius(prepared.instance, eval);
            const double smin = sigma_min(prepared.instance.A);
            const double wsq = weight_threshold(
                r0, smin, 1.0,
                policy == WeightPolicy::AutoPsd ? ThresholdMode::Psd
                                                : ThresholdMode::Dominance);
            prepared.instance.w =
                Vector::Constant(prepared.instance.n(), std::sqrt(wsq));
        }
    }
    return prepared;
}

RunConfig make_config(const CliOptions& cli, const PreparedInstance& prepared) {
    RunConfig config;
    config.function = cli.function;
    config.mode = cli.mode;
    config.eps = cli.eps;
    config.delta = cli.delta;
    config.eps1 = cli.eps1;
    config.max_iters = cli.max_iters;
    config.seed = cli.seed;
    config.radius = cli.radius;
    config.n = prepared.instance.n();
    config.d = prepared.instance.d();
    config.weight_policy =
        cli.weight_policy.empty() ? "explicit" : cli.weight_policy;
    config.matrix_path = cli.matrix_path;
    config.target_path = cli.target_path;
    config.weights_path = cli.weights_path;
    config.synthesized = prepared.synthesized;
    config.timing = !cli.no_timing;
    return config;
}

int run_solver(const CliOptions& cli, const PreparedInstance& prepared) {
    SolveOptions options;
    options.mode = parse_solve_mode(cli.mode);
    options.eps = cli.eps;
    options.delta = cli.delta;
    options.eps1 = cli.eps1;
    options.max_iters = cli.max_iters;
    options.seed = cli.seed;
    options.timing = !cli.no_timing;

    Vector x0 = Vector::Zero(prepared.instance.d());
    if (!cli.x0_path.empty()) {
        x0 = read_csv_vector(cli.x0_path);
        if (x0.size() != prepared.instance.d())
            throw DimensionMismatch("--x0 vector length does not match d");
    }
    const ConvergenceTrace trace = solve(prepared.instance, x0, options);
    write_trace(trace, make_config(cli, prepared), cli.out);

    const IterationRecord& last = trace.iterations.back();
    std::printf("status: %s\n", to_string(trace.status).c_str());
    std::printf("iterations: %zu\n", trace.iterations.size());
    std::printf("final loss: %.17g\n", last.loss);
    std::printf("final step norm: %.17g\n", last.step_norm);
    std::printf("trace: %s\n", cli.out.c_str());

    switch (trace.status) {
        case SolveStatus::Converged: return 0;
        case SolveStatus::MaxIters: return 2;
        case SolveStatus::Diverged: return 3;
    }
    return 3;
}

struct CheckLine {
    std::string name;
    bool ok = false;
    nlohmann::ordered_json detail;
};

int run_certificates(const CliOptions& cli, const PreparedInstance& prepared) {
    const ProblemInstance& instance = prepared.instance;
    const Vector& x = prepared.probe_point;
    std::vector<CheckLine> checks;

    const Evaluation eval = evaluate(instance, x);
    const double a_norm = spectral_norm(instance.A);
    const double r_eff = std::max(
        {a_norm, x.norm(), instance.b.norm(), 1e-12});

    {
        const BoundReport bounds = check_norm_bounds(instance, eval, r_eff);
        checks.push_back(
            {"norm-bounds", bounds.all(),
             {{"r", bounds.r},
              {"u_norm", bounds.u_norm},
              {"u_ceiling", bounds.u_ceiling},
              {"alpha_abs", bounds.alpha_abs},
              {"alpha_ceiling", bounds.alpha_ceiling},
              {"c_norm", bounds.c_norm},
              {"c_ceiling", bounds.c_ceiling},
              {"c_ceiling_tight", bounds.c_ceiling_tight}}});
    }
    {
        const BlockBoundReport blocks = check_block_bounds(instance, eval);
        checks.push_back({"kernel-block-bounds", blocks.all(),
                          {{"rank_cross_norm", blocks.rank_cross_norm},
                           {"rank_cross_ceiling", blocks.rank_cross_ceiling},
                           {"diag1_norm", blocks.diag1_norm},
                           {"diag1_ceiling", blocks.diag1_ceiling},
                           {"diag2_norm", blocks.diag2_norm},
                           {"diag2_ceiling", blocks.diag2_ceiling},
                           {"b_norm", blocks.b_norm},
                           {"b_ceiling", blocks.b_ceiling}}});
    }
    const double r0 = point_radius(instance, eval);
    const double smin = sigma_min(instance.A);
    {
        const double threshold = weight_threshold(r0, smin, 1.0, ThresholdMode::Psd);
        const double w_min_sq = instance.w.array().square().minCoeff();
        const bool meets = w_min_sq >= threshold * (1.0 - 1e-12);
        const bool psd = certify_psd(hessian(instance, eval), 1.0);
        checks.push_back({"psd-floor", !meets || psd,
                          {{"weight_threshold", threshold},
                           {"w_min_sq", w_min_sq},
                           {"threshold_met", meets},
                           {"lambda_floor_certified", psd}}});
    }
    {
        const double threshold =
            weight_threshold(r0, smin, 1.0, ThresholdMode::Dominance);
        const double w_min_sq = instance.w.array().square().minCoeff();
        const bool meets = w_min_sq >= threshold * (1.0 - 1e-12);
        bool dominance = false;
        std::string note;
        try {
            const HessianView view = hessian_blocks(instance, eval);
            dominance = certify_dominance(view.b_full, instance.w);
        } catch (const Error& err) {
            note = err.what();
        }
        checks.push_back({"weight-dominance", !meets || dominance,
                          {{"weight_threshold", threshold},
                           {"w_min_sq", w_min_sq},
                           {"threshold_met", meets},
                           {"band_certified", dominance},
                           {"note", note}}});
    }
    {
        Rng rng(mix_seed(cli.seed, 1));
        Vector delta(instance.d());
        for (Index i = 0; i < delta.size(); ++i) delta(i) = rng.normal();
        const double reach = (instance.A * delta).lpNorm<Eigen::Infinity>();
        Vector y = x;
        if (reach > 0.0) {
            delta *= 0.005 / reach;
            y = x + delta;
            while (y.norm() > r_eff) {
                delta *= 0.5;
                y = x + delta;
            }
        }
        const double ratio = empirical_lipschitz(instance, x, y, r_eff);
        const CeilingValue ceiling = lipschitz_ceiling(instance.n(), r_eff);
        const GTermReport g = g_terms(instance, x, y, r_eff);
        checks.push_back({"hessian-lipschitz",
                          ceiling_holds(ratio, ceiling) && g.part1_ok && g.part2_ok,
                          {{"empirical", ratio},
                           {"ceiling_log", ceiling.log_value},
                           {"ceiling_overflowed", ceiling.overflowed},
                           {"r_hypothesis_met", ceiling.r_hypothesis_met},
                           {"g_sum", g.sum},
                           {"g_part1_ceiling", g.part1_ceiling},
                           {"g_part2_ceiling", g.part2_ceiling}}});

        std::string shift_note;
        bool shift_ok = true;
        nlohmann::ordered_json shift_detail;
        try {
            const ShiftResult moved = shift_in_x(instance, x, y, r_eff);
            shift_ok = moved.reconstruction_residual <= 1e-10;
            shift_detail = {{"residual", moved.reconstruction_residual},
                            {"delta_b_norm", moved.delta_b.norm()},
                            {"bound_value", moved.bound_value},
                            {"within_bound", moved.within_bound}};
        } catch (const AlphaZero&) {
            shift_note = "skipped: alpha vanishes at the probe point";
            shift_detail = {{"note", shift_note}};
        }
        checks.push_back({"target-shift", shift_ok, shift_detail});
    }
    {
        bool sandwich = false;
        std::string note;
        try {
            const Vector surrogate = hessian_diag_surrogate(instance, eval);
            const SketchedDiagonal sketched = subsample(
                instance.A, surrogate, cli.eps1, cli.delta, cli.seed);
            sandwich =
                verify_sandwich(instance.A, surrogate, sketched, cli.eps1);
            checks.push_back({"sketch-sandwich", sandwich,
                              {{"nnz", sketched.nnz()},
                               {"eps1", cli.eps1},
                               {"delta", cli.delta}}});
        } catch (const Error& err) {
            note = err.what();
            checks.push_back({"sketch-sandwich", false, {{"note", note}}});
        }
    }

    nlohmann::ordered_json doc;
    doc["kind"] = cli.function;
    doc["n"] = instance.n();
    doc["d"] = instance.d();
    doc["seed"] = cli.seed;
    doc["r_eff"] = r_eff;
    doc["r0"] = r0;
    doc["sigma_min"] = smin;
    {
        Rng rng(mix_seed(cli.seed, 2));
        Vector delta(instance.d());
        for (Index i = 0; i < delta.size(); ++i) delta(i) = rng.normal();
        const double reach = (instance.A * delta).lpNorm<Eigen::Infinity>();
        Vector y = x;
        if (reach > 0.0) {
            delta *= 0.005 / reach;
            y = x + delta;
            while (y.norm() > r_eff) {
                delta *= 0.5;
                y = x + delta;
            }
        }
        const SpectralCertificate cert =
            certify_spectral(instance, x, y, 1.0, r_eff);
        doc["spectral_certificate"] = {
            {"r0", cert.r0},
            {"r_inf", cert.r_inf},
            {"sigma_min", cert.sigma_min},
            {"l", cert.l},
            {"m", cert.m},
            {"passed", cert.passed},
            {"all", cert.all()}};
    }
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (const auto& check : checks) {
        std::printf("%s  %s\n", check.ok ? "PASS" : "FAIL", check.name.c_str());
        all_ok = all_ok && check.ok;
        nlohmann::ordered_json item;
        item["name"] = check.name;
        item["ok"] = check.ok;
        item["detail"] = check.detail;
        items.push_back(std::move(item));
    }
    doc["checks"] = std::move(items);
    std::ofstream out(cli.out);
    if (!out) throw Error("cannot open '" + cli.out + "' for writing");
    out << doc.dump(2) << "\n";
    std::printf("report: %s\n", cli.out.c_str());
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CliOptions cli;
    CLI::App app{
        "Iterative solver and certificate suite for rescaled "
        "hyperbolic-function regression"};
    app.add_option("--function", cli.function, "exp|cosh|sinh")
        ->check(CLI::IsMember({"exp", "cosh", "sinh"}));
    auto* matrix_opt =
        app.add_option("--matrix", cli.matrix_path,
                       "A as dense CSV or Matrix Market coordinate file");
    auto* target_opt =
        app.add_option("--target", cli.target_path, "b as CSV vector");
    auto* weights_opt =
        app.add_option("--weights", cli.weights_path, "w as CSV vector");
    app.add_option("--weight-policy", cli.weight_policy,
                   "psd|dominance: set w from the matching threshold")
        ->check(CLI::IsMember({"psd", "dominance"}))
        ->excludes(weights_opt);
    app.add_option("--synthesize", cli.synthesize_spec,
                   "n,d: synthesize a seeded Gaussian instance")
        ->excludes(matrix_opt)
        ->excludes(target_opt)
        ->excludes(weights_opt);
    app.add_option("--seed", cli.seed, "RNG seed");
    app.add_option("--radius", cli.radius, "synthesis radius");
    app.add_option("--mode", cli.mode, "exact|sketched")
        ->check(CLI::IsMember({"exact", "sketched"}));
    app.add_option("--eps", cli.eps, "stop when the step norm falls below");
    app.add_option("--delta", cli.delta, "total sketch failure budget");
    app.add_option("--eps1", cli.eps1, "per-iteration sketch accuracy");
    app.add_option("--max-iters", cli.max_iters, "iteration cap");
    app.add_option("--out", cli.out, "trace or report path");
    app.add_option("--x0", cli.x0_path,
                   "starting point as CSV vector (default: zero)");
    app.add_flag("--certify", cli.certify,
                 "run the certificate suite instead of solving");
    app.add_flag("--no-timing", cli.no_timing,
                 "emit wall_ms as 0 for byte-stable traces");

    CLI11_PARSE(app, argc, argv);

    try {
        const PreparedInstance prepared = prepare_instance(cli);
        return cli.certify ? run_certificates(cli, prepared)
                           : run_solver(cli, prepared);
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s: %s\n", qualified_name(err).c_str(),
                     err.what());
        return 3;
    }
}
