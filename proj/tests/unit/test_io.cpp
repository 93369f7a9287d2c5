#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rsreg/io.hpp"
#include "rsreg/linalg.hpp"
#include "rsreg/rng.hpp"
#include "rsreg/solver.hpp"
#include "rsreg/calculus.hpp"
#include "rsreg/spectral.hpp"
#include "rsreg/synth.hpp"
#include "testutil.hpp"

using namespace rsreg;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path(std::string("/tmp/rsreg_test_") + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

Matrix random_matrix(Index n, Index d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) m(i, j) = rng.normal() * 1e3;
    return m;
}

}  // namespace

TEST_CASE("csv round trip is bit exact") {
    TempFile file("roundtrip.csv");
    const Matrix m = random_matrix(6, 4, 1);
    write_csv_matrix(m, file.path);
    const Matrix back = read_csv_matrix(file.path);
    CHECK(back == m);
}

TEST_CASE("matrix market round trip is bit exact") {
    TempFile file("roundtrip.mtx");
    Matrix m = random_matrix(6, 3, 2);
    m(1, 2) = 0.0;  // exercise the implicit-zero path
    m(4, 0) = 0.0;
    write_matrix_market(m, file.path);
    const Matrix back = read_matrix_market(file.path);
    CHECK(back == m);
}

TEST_CASE("vector round trip and row-vector reads") {
    TempFile file("vec.csv");
    Vector v(4);
    v << 1.5, -2.25, 3.0, 1e-17;
    write_csv_vector(v, file.path);
    CHECK(read_csv_vector(file.path) == v);

    write_text(file.path, "1.0,2.0,3.0\n");
    const Vector row = read_csv_vector(file.path);
    CHECK(row.size() == 3);
    CHECK(row(1) == 2.0);
}

TEST_CASE("parse errors carry line and column information") {
    TempFile file("bad.csv");
    write_text(file.path, "1.0,2.0\n3.0,oops\n");
    CHECK_THROWS_WITH_AS(read_csv_matrix(file.path),
                         doctest::Contains("line 2"), ParseError);

    write_text(file.path, "1.0,2.0\n3.0\n");
    CHECK_THROWS_WITH_AS(read_csv_matrix(file.path),
                         doctest::Contains("expected 2 columns"), ParseError);

    write_text(file.path, "");
    CHECK_THROWS_AS(read_csv_matrix(file.path), ParseError);

    CHECK_THROWS_AS(read_csv_matrix("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("matrix market rejects malformed headers and indices") {
    TempFile file("bad.mtx");
    write_text(file.path, "%%MatrixMarket matrix coordinate complex general\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(file.path), ParseError);

    write_text(file.path,
               "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(file.path),
                         doctest::Contains("out of range"), ParseError);
}

TEST_CASE("ingest cross-checks dimensions") {
    TempFile a("a.csv"), b("b.csv"), w("w.csv");
    write_text(a.path, "1.0,0.0\n0.0,1.0\n");
    write_text(b.path, "0.5\n0.5\n");
    const ProblemInstance ok =
        ingest(FunctionKind::Exp, a.path, b.path, std::nullopt);
    CHECK(ok.n() == 2);
    CHECK(ok.d() == 2);
    CHECK(ok.w == Vector::Ones(2));

    write_text(b.path, "0.5\n0.5\n0.5\n");
    CHECK_THROWS_AS(ingest(FunctionKind::Exp, a.path, b.path, std::nullopt),
                    DimensionMismatch);

    write_text(b.path, "0.5\n0.5\n");
    write_text(w.path, "1.0\n");
    CHECK_THROWS_AS(ingest(FunctionKind::Exp, a.path, b.path, w.path),
                    DimensionMismatch);
}

TEST_CASE("ingest reads matrix market files") {
    TempFile a("a6x3.mtx"), b("b6.csv");
    Matrix m = random_matrix(6, 3, 3);
    write_matrix_market(m, a.path);
    write_text(b.path, "0.1\n0.2\n0.3\n0.4\n0.5\n0.6\n");
    const ProblemInstance instance =
        ingest(FunctionKind::Cosh, a.path, b.path, std::nullopt);
    CHECK(instance.n() == 6);
    CHECK(instance.d() == 3);
    CHECK(instance.A == m);
}

TEST_CASE("trace serialization is deterministic and schema complete") {
    ProblemInstance instance;
    instance.A = Matrix::Identity(2, 2);
    instance.b = Vector::Zero(2);
    instance.w = Vector::Ones(2);
    instance.kind = FunctionKind::Sinh;
    Vector x0(2);
    x0 << 0.1, -0.1;
    SolveOptions options;
    options.mode = SolveMode::Exact;
    options.eps = 1e-10;
    options.timing = false;
    const ConvergenceTrace trace = solve(instance, x0, options);

    RunConfig config;
    config.function = "sinh";
    config.mode = "exact";
    config.eps = options.eps;
    config.n = 2;
    config.d = 2;
    config.timing = false;
    const std::string once = trace_to_json(trace, config);
    const std::string twice =
        trace_to_json(solve(instance, x0, options), config);
    CHECK(once == twice);

    const auto doc = nlohmann::json::parse(once);
    CHECK(doc["status"] == "converged");
    REQUIRE(doc["iterations"].is_array());
    REQUIRE(!doc["iterations"].empty());
    const auto& row = doc["iterations"][0];
    for (const char* key : {"iter", "loss", "grad_norm", "step_norm",
                            "dist_to_ref", "sketch_nnz", "wall_ms"})
        CHECK(row.contains(key));
    CHECK(row["dist_to_ref"].is_null());
    CHECK(row["wall_ms"] == 0.0);
}

TEST_CASE("synthesis is deterministic and respects the radius") {
    SynthesisOptions options;
    options.n = 12;
    options.d = 4;
    options.seed = 99;
    options.radius = 0.8;
    options.kind = FunctionKind::Cosh;
    const SynthesizedInstance a = synthesize(options);
    const SynthesizedInstance c = synthesize(options);
    CHECK(a.instance.A == c.instance.A);
    CHECK(a.instance.b == c.instance.b);
    CHECK(a.instance.w == c.instance.w);
    CHECK(a.anchor == c.anchor);
    CHECK(spectral_norm(a.instance.A) == doctest::Approx(0.8));
    CHECK(a.instance.b.norm() == doctest::Approx(0.8));
    CHECK(a.anchor.norm() <= 0.8 + 1e-12);

    options.seed = 100;
    const SynthesizedInstance other = synthesize(options);
    CHECK(a.instance.A != other.instance.A);
}

TEST_CASE("auto weight policies certify at the anchor") {
    for (int trial = 0; trial < 6; ++trial) {
        SynthesisOptions options;
        options.n = 10;
        options.d = 3;
        options.seed = 200 + trial;
        options.kind = testutil::kind_for(trial);

        options.policy = WeightPolicy::AutoPsd;
        const SynthesizedInstance psd = synthesize(options);
        const Evaluation psd_eval = evaluate(psd.instance, psd.anchor);
        CHECK(certify_psd(hessian(psd.instance, psd_eval), options.l));

        options.policy = WeightPolicy::AutoDominance;
        const SynthesizedInstance dom = synthesize(options);
        const Evaluation dom_eval = evaluate(dom.instance, dom.anchor);
        const HessianView view = hessian_blocks(dom.instance, dom_eval);
        CHECK(certify_dominance(view.b_full, dom.instance.w));
    }
}
