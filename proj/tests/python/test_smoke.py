"""Smoke tests for the python bindings: one pass over every major operation."""

import json

import numpy as np
import pytest

import rsreg


def make_instance(kind="exp", n=10, d=3, seed=1, policy="explicit"):
    inst, anchor = rsreg.synthesize(n, d, seed=seed, kind=kind,
                                    weight_policy=policy)
    return inst, anchor


def test_evaluate_matches_numpy():
    inst, anchor = make_instance(kind="cosh")
    ev = rsreg.evaluate(inst, anchor)
    ax = inst.A @ anchor
    assert np.allclose(ev.ax, ax)
    assert np.allclose(ev.u, np.cosh(ax))
    assert np.allclose(ev.v, np.sinh(ax))
    assert ev.alpha == pytest.approx(np.cosh(ax).sum())
    c = np.cosh(ax) - ev.alpha * inst.b
    assert np.allclose(ev.c, c)
    assert ev.loss_u == pytest.approx(0.5 * np.dot(c, c))
    assert ev.loss_reg == pytest.approx(0.5 * np.dot(inst.w * ax, inst.w * ax))


def test_gradient_against_finite_differences():
    for kind in ("exp", "cosh", "sinh"):
        inst, anchor = make_instance(kind=kind, seed=7)
        ev = rsreg.evaluate(inst, anchor)
        g = rsreg.gradient(inst, ev)
        g_fd = rsreg.fd_gradient(inst, anchor)
        assert np.linalg.norm(g - g_fd) <= 1e-5 * max(1.0, np.linalg.norm(g))


def test_hessian_blocks_are_consistent():
    inst, anchor = make_instance(kind="sinh", seed=3)
    ev = rsreg.evaluate(inst, anchor)
    view = rsreg.hessian_blocks(inst, ev)
    assert np.allclose(view.h_full, rsreg.hessian(inst, ev))
    assert np.allclose(view.b12, view.b13.T)
    surrogate = rsreg.hessian_diag_surrogate(inst, ev)
    assert np.allclose(surrogate, view.diag_surrogate)


def test_norm_bounds_hold():
    inst, anchor = make_instance(kind="exp", seed=11)
    report = rsreg.check_norm_bounds(inst, rsreg.evaluate(inst, anchor), 1.0)
    assert report.all()
    assert report.c_ceiling == pytest.approx(2.0 * report.c_ceiling_tight)


def test_solver_demo_converges_quickly():
    inst = rsreg.ProblemInstance(np.eye(2), np.zeros(2), np.ones(2), "sinh")
    trace = rsreg.solve(inst, np.array([0.1, -0.1]), mode="exact", eps=1e-10,
                        max_iters=20)
    assert trace.status == "converged"
    assert len(trace.iterations) <= 6
    assert np.linalg.norm(trace.final_x) <= 1e-10


def test_sketched_solve_is_deterministic():
    inst, _ = make_instance(kind="exp", n=20, d=4, seed=5, policy="dominance")
    kwargs = dict(mode="sketched", eps=1e-8, max_iters=40, seed=17,
                  timing=False)
    a = rsreg.solve(inst, np.zeros(4), **kwargs)
    b = rsreg.solve(inst, np.zeros(4), **kwargs)
    assert a.status == b.status == "converged"
    assert len(a.iterations) == len(b.iterations)
    for ra, rb in zip(a.iterations, b.iterations):
        assert np.array_equal(ra.x, rb.x)
        assert ra.step_norm == rb.step_norm
    assert rsreg.trace_to_json(a) == rsreg.trace_to_json(b)


def test_certificates_with_threshold_weights():
    inst, anchor = make_instance(kind="exp", seed=9, policy="psd")
    ev = rsreg.evaluate(inst, anchor)
    assert rsreg.certify_psd(rsreg.hessian(inst, ev), 1.0)

    inst, anchor = make_instance(kind="cosh", seed=9, policy="dominance")
    ev = rsreg.evaluate(inst, anchor)
    view = rsreg.hessian_blocks(inst, ev)
    assert rsreg.certify_dominance(view.b_full, inst.w)
    assert rsreg.check_block_bounds(inst, ev).all()


def test_sketch_round_trip():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(60, 3))
    d_diag = 1.0 + np.abs(rng.normal(size=60))
    tau = rsreg.leverage_scores(a, d_diag)
    assert tau.sum() == pytest.approx(3.0, abs=1e-8)
    sk = rsreg.subsample(a, d_diag, 0.09, 0.05, seed=4)
    assert rsreg.verify_sandwich(a, d_diag, sk, 0.09)
    again = rsreg.subsample(a, d_diag, 0.09, 0.05, seed=4)
    assert list(sk.indices) == list(again.indices)


def test_shift_closed_form():
    inst, anchor = make_instance(kind="exp", seed=13)
    x_next = anchor + 1e-3 * np.ones(3) / np.linalg.norm(np.ones(3))
    res = rsreg.shift_in_x(inst, anchor, x_next, 1.0)
    assert res.reconstruction_residual <= 1e-10
    assert np.linalg.norm(res.delta_b) == pytest.approx(
        res.alpha_inv_abs * res.dc_norm, rel=1e-12)
    assert res.within_bound


def test_errors_surface_as_python_exceptions():
    inst = rsreg.ProblemInstance(np.eye(2), np.zeros(2), np.ones(2), "exp")
    with pytest.raises(rsreg.Error):
        rsreg.evaluate(inst, np.array([200.0, 0.0]))  # overflow guard
    with pytest.raises(rsreg.Error):
        rsreg.evaluate(inst, np.zeros(3))  # dimension mismatch
    with pytest.raises(rsreg.Error):
        rsreg.subsample(np.eye(2), np.ones(2), 0.5, 0.05, seed=1)


def test_trace_json_schema():
    inst, _ = make_instance(kind="exp", n=12, d=3, seed=2, policy="dominance")
    trace = rsreg.solve(inst, np.zeros(3), mode="sketched", timing=False)
    doc = json.loads(rsreg.trace_to_json(trace))
    assert doc["status"] == "converged"
    row = doc["iterations"][0]
    for key in ("iter", "loss", "grad_norm", "step_norm", "dist_to_ref",
                "sketch_nnz", "wall_ms"):
        assert key in row
