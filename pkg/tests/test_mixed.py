"""Free-block instances: solving, certification, and the adjustable flag."""

import numpy as np
import pytest

from aarlcp import (
    DimensionMismatch,
    Instance,
    MixedExtension,
    MixedPolicy,
    Policy,
    SolveOptions,
    SolveStatus,
    build_mixed_node_lp,
    compute_lin_hull,
    lp,
    mixed_solve,
    oracle_enumerate,
    verify_mixed,
)
from support import golden_instance, mixed_1d


def test_decoupled_example():
    inst = mixed_1d(0.0)
    basis = compute_lin_hull(inst)
    report = mixed_solve(inst, basis)
    assert report.status is SolveStatus.FEASIBLE
    pol = report.policy
    assert pol.s[0] == pytest.approx(3.0, abs=1e-8)
    assert pol.r[0] == pytest.approx(2.0, abs=1e-8)
    assert pol.D[0, 0] == pytest.approx(-0.5, abs=1e-8)
    assert report.verification.verified
    assert report.verification.equality_residual <= 1e-8
    assert report.verification.equality_direction_residual <= 1e-8


def test_coupled_example():
    # the free variable feeds the slack row: 2r + s - 4 = 0 with s = 3
    inst = mixed_1d(1.0)
    basis = compute_lin_hull(inst)
    report = mixed_solve(inst, basis)
    assert report.status is SolveStatus.FEASIBLE
    pol = report.policy
    assert pol.r[0] == pytest.approx(0.5, abs=1e-8)
    assert pol.D[0, 0] == pytest.approx(-0.5, abs=1e-8)
    assert pol.s[0] == pytest.approx(3.0, abs=1e-8)


def _coupled_adjustable_instance(y_adjustable):
    # equality ties y to -z, and the slack needs y to move with u
    mx = MixedExtension(
        V=np.array([[1.0]]),
        W=np.array([[1.0]]),
        N=np.array([[1.0]]),
        p=np.array([0.0]),
        P=np.array([[0.0]]),
        y_adjustable=y_adjustable,
    )
    return Instance(
        M=np.array([[2.0]]),
        q=np.array([-4.0]),
        T=np.array([[1.0]]),
        Theta=np.array([[1.0], [-1.0]]),
        zeta=np.array([-1.0, -1.0]),
        mixed=mx,
    )


def test_adjustable_flag_changes_feasibility():
    adjustable = _coupled_adjustable_instance(True)
    pinned = _coupled_adjustable_instance(False)
    basis = compute_lin_hull(adjustable)
    rep_adj = mixed_solve(adjustable, basis)
    rep_pin = mixed_solve(pinned, compute_lin_hull(pinned))
    assert rep_adj.status is SolveStatus.FEASIBLE
    assert rep_pin.status is SolveStatus.INFEASIBLE
    pol = rep_adj.policy
    # y(u) = -z(u): slack becomes z - 4 + u, so r = 4, D = -1
    assert pol.r[0] == pytest.approx(4.0, abs=1e-8)
    assert pol.D[0, 0] == pytest.approx(-1.0, abs=1e-8)
    assert pol.E[0, 0] == pytest.approx(1.0, abs=1e-8)
    assert pol.s[0] == pytest.approx(-4.0, abs=1e-8)


def test_pinned_flag_forces_constant_rule():
    inst = mixed_1d(0.0, y_adjustable=False)
    basis = compute_lin_hull(inst)
    report = mixed_solve(inst, basis)
    assert report.status is SolveStatus.FEASIBLE
    assert np.allclose(report.policy.E, 0.0)


def test_verify_mixed_flags_broken_equality():
    inst = mixed_1d(0.0)
    basis = compute_lin_hull(inst)
    pol = Policy(
        D=np.array([[-0.5]]),
        r=np.array([2.0]),
        x=np.array([1]),
        E=np.zeros((1, 1)),
        s=np.array([7.0]),  # equation wants 3
    )
    report = verify_mixed(inst, basis, pol)
    assert not report.verified
    assert report.equality_residual == pytest.approx(4.0, abs=1e-9)
    assert any("equations off" in v for v in report.violations)


def test_mixed_policy_wrapper():
    base = Policy(
        D=np.zeros((1, 1)),
        r=np.zeros(1),
        x=np.zeros(1),
        E=np.zeros((1, 1)),
        s=np.zeros(1),
    )
    mp = MixedPolicy.from_policy(base)
    assert mp.n == 1 and mp.k == 1 and mp.m == 1
    with pytest.raises(ValueError):
        MixedPolicy.from_policy(Policy(D=np.zeros((1, 1)), r=np.zeros(1), x=np.zeros(1)))


def test_mixed_node_lp_guard():
    inst = golden_instance()
    basis = compute_lin_hull(inst)
    with pytest.raises(DimensionMismatch):
        build_mixed_node_lp(inst, basis, (1, 1))
    with pytest.raises(DimensionMismatch):
        mixed_solve(inst, basis)
    with pytest.raises(DimensionMismatch):
        verify_mixed(inst, basis, None)


def test_mixed_node_lp_solves():
    inst = mixed_1d(1.0)
    basis = compute_lin_hull(inst)
    model = build_mixed_node_lp(inst, basis, (1,))
    assert lp.lp_feasible(model).status is lp.LpStatus.OPTIMAL


def test_oracle_handles_mixed():
    inst = mixed_1d(1.0)
    basis = compute_lin_hull(inst)
    report = oracle_enumerate(inst, basis)
    assert report.status is SolveStatus.FEASIBLE
    assert isinstance(report.policy, MixedPolicy)
    assert report.verification.verified
    assert report.policy.r[0] == pytest.approx(0.5, abs=1e-8)


def test_mixed_parallel_search():
    inst = mixed_1d(1.0)
    basis = compute_lin_hull(inst)
    report = mixed_solve(inst, basis, SolveOptions(parallel=True))
    assert report.status is SolveStatus.FEASIBLE
    assert report.verification.verified
