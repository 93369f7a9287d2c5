#include <Eigen/Dense>
#include <cmath>
#include <algorithm>
#include <array>
#include <chrono>

#include "doctest.h"
#include "rsreg/rng.hpp"
#include "rsreg/sketch.hpp"
#include "testutil.hpp"

using namespace rsreg;

namespace {

Matrix gaussian_matrix(Index n, Index d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) a(i, j) = rng.normal();
    return a;
}

}  // namespace

TEST_CASE("leverage scores of orthonormal and rank-one cases") {
    const Matrix eye = Matrix::Identity(4, 4);
    const Vector tau_eye = leverage_scores(eye, Vector::Ones(4));
    CHECK(tau_eye.isApprox(Vector::Ones(4), 1e-12));

    Matrix column(2, 1);
    column << 1.0, 1.0;
    const Vector tau_col = leverage_scores(column, Vector::Ones(2));
    CHECK(tau_col(0) == doctest::Approx(0.5));
    CHECK(tau_col(1) == doctest::Approx(0.5));
}

TEST_CASE("leverage scores sum to the column count") {
    const Matrix a = gaussian_matrix(20, 3, 5);
    const Vector d_diag = Vector::Constant(20, 1.0) +
                          0.5 * gaussian_matrix(20, 1, 6).col(0).cwiseAbs();
    const Vector tau = leverage_scores(a, d_diag);
    CHECK(std::abs(tau.sum() - 3.0) <= 1e-8);
    CHECK((tau.array() >= -1e-12).all());
    CHECK((tau.array() <= 1.0 + 1e-12).all());
}

TEST_CASE("leverage scores only see the column space") {
    // invariant under any invertible change of basis on the right
    const Matrix a = gaussian_matrix(25, 3, 21);
    const Vector d_diag = Vector::Constant(25, 1.3);
    Matrix basis(3, 3);
    basis << 2.0, 1.0, 0.0, 0.0, -1.5, 0.5, 0.0, 0.0, 3.0;
    const Vector tau = leverage_scores(a, d_diag);
    const Vector tau_rotated = leverage_scores(a * basis, d_diag);
    CHECK(tau.isApprox(tau_rotated, 1e-10));
}

TEST_CASE("leverage scores reject rank deficiency and bad diagonals") {
    Matrix rank1(4, 2);
    rank1.col(0) = Vector::Ones(4);
    rank1.col(1) = 2.0 * Vector::Ones(4);
    CHECK_THROWS_AS(leverage_scores(rank1, Vector::Ones(4)), RankDeficient);

    const Matrix a = gaussian_matrix(5, 2, 7);
    Vector with_zero = Vector::Ones(5);
    with_zero(3) = 0.0;
    CHECK_THROWS_AS(leverage_scores(a, with_zero), NonPositiveDiagonal);
}

TEST_CASE("subsample parameter validation") {
    const Matrix a = gaussian_matrix(10, 2, 8);
    const Vector d_diag = Vector::Ones(10);
    CHECK_THROWS_AS(subsample(a, d_diag, 0.5, 0.05, 1), InvalidEps);
    CHECK_THROWS_AS(subsample(a, d_diag, 0.0, 0.05, 1), InvalidEps);
    CHECK_THROWS_AS(subsample(a, d_diag, 0.05, 0.5, 1), InvalidDelta);
    Vector with_zero = d_diag;
    with_zero(0) = 0.0;
    CHECK_THROWS_AS(subsample(a, with_zero, 0.05, 0.05, 1),
                    NonPositiveDiagonal);
}

TEST_CASE("saturated probabilities reproduce the diagonal exactly") {
    // at this scale every p_i clips to 1, so the sketch is D itself
    const Matrix a = gaussian_matrix(30, 3, 9);
    const Vector d_diag =
        (Vector::Ones(30) + gaussian_matrix(30, 1, 10).col(0).cwiseAbs());
    const SketchedDiagonal sketched = subsample(a, d_diag, 0.05, 0.05, 123);
    CHECK(sketched.nnz() == 30);
    CHECK(sketched.dense().isApprox(d_diag, 1e-15));
    CHECK(verify_sandwich(a, d_diag, sketched, 1e-9));
}

TEST_CASE("uniform inflation by two violates the sandwich") {
    const Matrix a = gaussian_matrix(12, 2, 11);
    const Vector d_diag = Vector::Ones(12);
    SketchedDiagonal doubled;
    doubled.n = 12;
    for (Index i = 0; i < 12; ++i) {
        doubled.indices.push_back(i);
        doubled.values.push_back(2.0);
    }
    CHECK_FALSE(verify_sandwich(a, d_diag, doubled, 0.1));
    CHECK(verify_sandwich(a, d_diag, doubled, 0.1) == false);
}

TEST_CASE("identical seeds give identical sketches") {
    const Matrix a = gaussian_matrix(40, 3, 12);
    const Vector d_diag = Vector::Constant(40, 2.0);
    // small oversampling so the Bernoulli path is actually exercised
    const SketchedDiagonal s1 = subsample(a, d_diag, 0.09, 0.05, 777, 0.01);
    const SketchedDiagonal s2 = subsample(a, d_diag, 0.09, 0.05, 777, 0.01);
    CHECK(s1.indices == s2.indices);
    CHECK(s1.values == s2.values);
    const SketchedDiagonal s3 = subsample(a, d_diag, 0.09, 0.05, 778, 0.01);
    CHECK(s1.indices != s3.indices);
}

TEST_CASE("sparsity stays under the oversampling budget") {
    const Matrix a = gaussian_matrix(200, 4, 13);
    const Vector d_diag = Vector::Constant(200, 1.5);
    const double eps = 0.09;
    const double delta = 0.05;
    const double budget = kDefaultOversampling * 4.0 *
                          std::log(200.0 / delta) / (eps * eps);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SketchedDiagonal sketched = subsample(a, d_diag, eps, delta, seed);
        CHECK(static_cast<double>(sketched.nnz()) <=
              std::min(200.0, budget));
        CHECK((Eigen::Map<const Vector>(sketched.values.data(),
                                        sketched.nnz())
                   .array() > 0.0)
                  .all());
    }
}

TEST_CASE("horvitz-thompson rescaling is unbiased under real sampling") {
    // tiny oversampling forces p_i < 1 so the estimator genuinely samples
    const Matrix a = gaussian_matrix(50, 3, 14);
    Rng drng(15);
    Vector d_diag(50);
    for (Index i = 0; i < 50; ++i) d_diag(i) = 0.5 + std::abs(drng.normal());
    const Matrix exact = a.transpose() * d_diag.asDiagonal() * a;

    const int trials = 4000;
    Matrix mean = Matrix::Zero(3, 3);
    double nnz_sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const SketchedDiagonal sketched =
            subsample(a, d_diag, 0.09, 0.05, 100000 + trial, 0.01);
        mean += sketched_gram(a, sketched);
        nnz_sum += static_cast<double>(sketched.nnz());
    }
    mean /= static_cast<double>(trials);
    CHECK(nnz_sum / trials < 50.0);  // genuinely sparse on average

    const double scale = exact.cwiseAbs().maxCoeff();
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) {
            const double denom = std::max(std::abs(exact(i, j)), 0.05 * scale);
            CHECK(std::abs(mean(i, j) - exact(i, j)) / denom <= 0.02);
        }
}

TEST_CASE("sandwich holds with the default oversampling across trials") {
    const Matrix a = gaussian_matrix(60, 3, 16);
    const Vector d_diag = Vector::Constant(60, 1.0);
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SketchedDiagonal sketched =
            subsample(a, d_diag, 0.09, 0.05, seed);
        if (!verify_sandwich(a, d_diag, sketched, 0.09)) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("subsample cost grows near-linearly in n at fixed d") {
    // coarse guard against an accidentally quadratic path: quadrupling n may
    // cost at most ~16x (median of 3 runs, generous margin for noise)
    auto median_cost = [](Index n) {
        const Matrix a = gaussian_matrix(n, 4, 99);
        const Vector d_diag = Vector::Constant(n, 1.0);
        std::array<double, 3> runs{};
        for (auto& run : runs) {
            const auto start = std::chrono::steady_clock::now();
            subsample(a, d_diag, 0.09, 0.05, 1);
            run = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        }
        std::sort(runs.begin(), runs.end());
        return runs[1];
    };
    median_cost(2000);  // warm up
    const double small = median_cost(2000);
    const double large = median_cost(8000);
    CHECK(large <= 16.0 * std::max(small, 1e-4));
}

TEST_CASE("verify_sandwich rejects an indefinite base") {
    Matrix a(2, 2);
    a << 1.0, 0.0, 0.0, 0.0;  // rank deficient, so A^T D A is singular
    SketchedDiagonal sketched;
    sketched.n = 2;
    sketched.indices = {0, 1};
    sketched.values = {1.0, 1.0};
    CHECK_THROWS_AS(verify_sandwich(a, Vector::Ones(2), sketched, 0.1),
                    IndefiniteBase);
}
