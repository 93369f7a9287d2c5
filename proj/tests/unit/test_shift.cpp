#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "rsreg/linalg.hpp"
#include "rsreg/shift.hpp"
#include "testutil.hpp"

using namespace rsreg;
using rsreg::testutil::SeededCase;

TEST_CASE("coincident points give a zero shift") {
    SeededCase cs = testutil::seeded_case(120, 8, 3, FunctionKind::Exp);
    const ShiftResult result = shift_in_x(cs.instance, cs.x, cs.x, 1.0);
    CHECK(result.delta_b.norm() == 0.0);
    CHECK(result.reconstruction_residual == doctest::Approx(0.0));
    CHECK(result.within_bound);
}

TEST_CASE("hand-evaluated shift at the exp identity point") {
    ProblemInstance instance;
    instance.A = Matrix::Identity(2, 2);
    instance.b = Vector::Constant(2, 0.5);
    instance.w = Vector::Ones(2);
    instance.kind = FunctionKind::Exp;
    Vector x_next(2);
    x_next << 0.01, 0.0;
    const ShiftResult result =
        shift_in_x(instance, Vector::Zero(2), x_next, 1.0);
    const double expected = (std::exp(0.01) - 1.0) / 4.0;  // ~0.0025125
    CHECK(result.delta_b(0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(result.delta_b(1) == doctest::Approx(-expected).epsilon(1e-12));
    CHECK(result.reconstruction_residual <= 1e-10);
    CHECK(result.within_bound);
}

TEST_CASE("sinh at the origin has no rescaling factor") {
    SeededCase cs = testutil::seeded_case(121, 6, 3, FunctionKind::Sinh);
    Vector x_next = testutil::admissible_partner(cs.instance, Vector::Zero(3),
                                                 1.0, 5);
    CHECK_THROWS_AS(shift_in_x(cs.instance, Vector::Zero(3), x_next, 1.0),
                    AlphaZero);
}

TEST_CASE("closed form equals the rescaled c increment exactly") {
    for (int trial = 0; trial < 20; ++trial) {
        const FunctionKind kind =
            trial % 2 == 0 ? FunctionKind::Exp : FunctionKind::Cosh;
        SeededCase cs = testutil::seeded_case(13000 + trial, 9, 4, kind);
        const Vector y =
            testutil::admissible_partner(cs.instance, cs.x, 1.0, 41 + trial);
        const ShiftResult result = shift_in_x(cs.instance, cs.x, y, 1.0);
        CHECK(result.delta_b.norm() ==
              doctest::Approx(result.alpha_inv_abs * result.dc_norm)
                  .epsilon(1e-12));
        CHECK(result.reconstruction_residual <= 1e-10);
        CHECK(result.within_bound);
    }
}

TEST_CASE("alpha inverse is bounded by exp(r^2) for exp and cosh") {
    for (int trial = 0; trial < 12; ++trial) {
        const FunctionKind kind =
            trial % 2 == 0 ? FunctionKind::Exp : FunctionKind::Cosh;
        SeededCase cs = testutil::seeded_case(14000 + trial, 7, 3, kind);
        const Vector y =
            testutil::admissible_partner(cs.instance, cs.x, 1.0, 51 + trial);
        const ShiftResult result = shift_in_x(cs.instance, cs.x, y, 1.0);
        CHECK(result.alpha_inv_abs <= std::exp(1.0) * (1.0 + 1e-12));
        if (kind == FunctionKind::Cosh)
            CHECK(result.alpha_inv_abs <= 1.0 / 7.0 + 1e-12);  // alpha >= n
    }
}

TEST_CASE("shift preconditions are enforced") {
    SeededCase cs = testutil::seeded_case(122, 6, 3, FunctionKind::Exp);
    CHECK_THROWS_AS(shift_in_x(cs.instance, cs.x, 10.0 * Vector::Ones(3), 1.0),
                    PreconditionViolated);
}

TEST_CASE("A-shift with identical matrices is zero") {
    SeededCase cs = testutil::seeded_case(123, 7, 3, FunctionKind::Exp);
    const ShiftResult result =
        shift_in_A(cs.instance, cs.instance, cs.x, 1.0);
    CHECK(result.delta_b.norm() == 0.0);
    CHECK(result.within_bound);
}

TEST_CASE("A-shift on seeded perturbations") {
    for (int trial = 0; trial < 15; ++trial) {
        const FunctionKind kind =
            trial % 2 == 0 ? FunctionKind::Exp : FunctionKind::Cosh;
        SeededCase cs = testutil::seeded_case(15000 + trial, 8, 3, kind);
        Rng rng(61 + trial);
        Matrix bump(8, 3);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 3; ++j) bump(i, j) = rng.normal();
        bump *= 1e-3 / spectral_norm(bump);

        ProblemInstance next = cs.instance;
        next.A = cs.instance.A + bump;
        if (spectral_norm(next.A) > 1.0) {
            next.A *= 1.0 / spectral_norm(next.A);
        }
        const ShiftResult result = shift_in_A(cs.instance, next, cs.x, 1.0);
        CHECK(result.reconstruction_residual <= 1e-10);
        CHECK(result.delta_b.norm() ==
              doctest::Approx(result.alpha_inv_abs * result.dc_norm)
                  .epsilon(1e-12));
        CHECK(result.within_bound);

        // the u increment obeys the matrix-perturbation Lipschitz bound
        const Evaluation at = evaluate(cs.instance, cs.x);
        const Evaluation moved = evaluate(next, cs.x);
        const double da = spectral_norm(next.A - cs.instance.A);
        CHECK((at.u - moved.u).norm() <=
              2.0 * std::sqrt(8.0) * 1.0 * std::exp(1.0) * da * (1.0 + 1e-9));
    }
}

TEST_CASE("A-shift rejects mismatched instances") {
    SeededCase a = testutil::seeded_case(124, 6, 3, FunctionKind::Exp);
    SeededCase b = testutil::seeded_case(125, 6, 3, FunctionKind::Cosh);
    CHECK_THROWS_AS(shift_in_A(a.instance, b.instance, a.x, 1.0),
                    PreconditionViolated);
}
