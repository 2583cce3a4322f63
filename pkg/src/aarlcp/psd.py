"""Shortcut for positive semidefinite matrices.

When the square matrix is PSD, the nominal problem (uncertainty frozen at
zero) has a convex polyhedral solution set, and the only support vector an
affine rule can use is the set of indices that some nominal solution makes
positive.  That turns the tree search into a single node: solve the nominal
problem by complementary pivoting, read off the maximal support, and solve
one LP.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import lp
from .core import EPS_FEAS, EPS_ZERO, Instance
from .errors import DimensionMismatch, NotPsd, NumericalFailure
from .linhull import LinHullBasis
from .milp import NodeLpBuilder
from .verify import VerifyReport, verify_policy


class PsdStatus(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NOT_PSD = "not_psd"


@dataclass(eq=False)
class PsdReport:
    is_psd: bool
    status: PsdStatus
    nominal: np.ndarray | None = None
    support_p: frozenset = frozenset()
    policy: object | None = None
    verification: VerifyReport | None = None
    lp_calls: int = 0


def check_psd(M: np.ndarray, tol: float = 1e-9) -> bool:
    """Positive semidefiniteness of the symmetric part, by pivoted Cholesky.

    Runs full-pivoting outer-product elimination on (M + M^T)/2; the matrix
    is PSD exactly when every pivot stays nonnegative and whatever remains
    after the pivots run out is negligible.
    """
    S = np.asarray(M, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch("square matrix required")
    A = 0.5 * (S + S.T)
    thresh = tol * max(1.0, float(np.abs(np.diag(A)).sum()))
    while A.shape[0]:
        d = np.diag(A)
        j = int(np.argmax(d))
        if d[j] <= thresh:
            return bool(np.all(np.abs(A) <= 10.0 * thresh))
        perm = [j] + [t for t in range(A.shape[0]) if t != j]
        A = A[np.ix_(perm, perm)]
        a = A[1:, 0]
        A = A[1:, 1:] - np.outer(a, a) / A[0, 0]
    return True


def lemke_nominal(
    M: np.ndarray, q: np.ndarray, tol: float = 1e-9
) -> np.ndarray | None:
    """Solve the nominal problem by complementary pivoting.

    Requires a PSD matrix, where a secondary ray proves there is no solution
    at all; returns None in that case, otherwise a solution vector.
    """
    M = np.asarray(M, dtype=float)
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatch("matrix and vector sizes disagree")
    if not check_psd(M, tol):
        raise NotPsd("complementary pivoting here is restricted to PSD input")
    if np.all(q >= -tol):
        return np.zeros(n)

    # Columns: w_0..w_{n-1}, z_0..z_{n-1}, the covering column, rhs.
    zcov = 2 * n
    T = np.zeros((n, 2 * n + 2))
    T[:, :n] = np.eye(n)
    T[:, n : 2 * n] = -M
    T[:, zcov] = -1.0
    T[:, -1] = q
    basis = list(range(n))

    def pivot(row: int, col: int) -> None:
        T[row] /= T[row, col]
        for rr in range(n):
            if rr != row and T[rr, col] != 0.0:
                T[rr] -= T[rr, col] * T[row]
        basis[row] = col

    t = int(np.argmin(q))
    pivot(t, zcov)
    entering = n + t  # complement of the w that just left

    cap = 1000 + 100 * n
    for _ in range(cap):
        col = T[:, entering]
        candidates = [i for i in range(n) if col[i] > tol]
        if not candidates:
            return None  # secondary ray
        ratios = T[candidates, -1] / col[candidates]
        best = ratios.min()
        window = tol * (1.0 + abs(best))
        tied = [i for i, rho in zip(candidates, ratios) if rho <= best + window]
        row = next((i for i in tied if basis[i] == zcov), None)
        if row is None:
            row = min(tied, key=lambda i: basis[i])
        leaving = basis[row]
        pivot(row, entering)
        if leaving == zcov:
            z = np.zeros(n)
            for i, b in enumerate(basis):
                if n <= b < 2 * n:
                    z[b - n] = T[i, -1]
            z = np.maximum(z, 0.0)
            w = M @ z + q
            scale = max(1.0, float(np.abs(q).max()))
            if w.min() < -1e-6 * scale or abs(z @ w) > 1e-6 * scale * max(
                1.0, float(z.max())
            ):
                raise NumericalFailure("pivoting returned an inconsistent point")
            return z
        entering = leaving + n if leaving < n else leaving - n
    raise NumericalFailure("complementary pivoting exceeded its iteration cap")


def solution_set_rows(
    M: np.ndarray, q: np.ndarray, zbar: np.ndarray, tol: float = 1e-8
) -> list[tuple[np.ndarray, str, float]]:
    """Linear rows cutting out the full nominal solution set around zbar.

    For PSD matrices the solution set is exactly the nonnegative vectors
    that keep the slack nonnegative, reproduce the inner product of zbar
    with q, and agree with zbar under the symmetrized matrix.
    """
    M = np.asarray(M, dtype=float)
    q = np.asarray(q, dtype=float)
    zbar = np.asarray(zbar, dtype=float)
    n = q.shape[0]
    scale = max(1.0, float(np.abs(q).max()), float(np.abs(zbar).max()))
    w = M @ zbar + q
    if zbar.min() < -tol * scale or w.min() < -tol * scale or abs(
        zbar @ w
    ) > tol * scale * scale:
        raise ValueError("reference point does not solve the nominal problem")
    S = M + M.T
    rows: list[tuple[np.ndarray, str, float]] = []
    for i in range(n):
        rows.append((M[i].copy(), lp.GE, -q[i]))
    rows.append((q.copy(), lp.EQ, float(q @ zbar)))
    target = S @ zbar
    for i in range(n):
        rows.append((S[i].copy(), lp.EQ, float(target[i])))
    return rows


def compute_support_p(
    M: np.ndarray,
    q: np.ndarray,
    zbar: np.ndarray,
    tol: float = 1e-8,
    eps_zero: float = EPS_ZERO,
) -> frozenset:
    """Indices some nominal solution makes positive: one maximization each."""
    n = q.shape[0]
    rows = solution_set_rows(M, q, zbar, tol)
    members = set()
    for i in range(n):
        objective = np.zeros(n)
        objective[i] = 1.0
        model = lp.LpModel(n, objective)
        model.rows = list(rows)
        res = lp.lp_solve(model, tol)
        if res.status is lp.LpStatus.UNBOUNDED:
            members.add(i)
        elif res.status is lp.LpStatus.OPTIMAL:
            if res.value > eps_zero:
                members.add(i)
        else:
            raise NumericalFailure(
                "solution set probe infeasible around a valid point"
            )
    return frozenset(members)


def psd_solve(
    inst: Instance,
    basis: LinHullBasis,
    tol: float = 1e-8,
    eps_zero: float = EPS_ZERO,
    verify_tol: float = EPS_FEAS,
) -> PsdReport:
    """Single-node solve for PSD instances.

    The support is forced by the nominal solution set, so the search space
    collapses: no nominal solution means Infeasible, otherwise one node LP
    at the forced support decides the matter.
    """
    if inst.mixed is not None:
        raise DimensionMismatch("the shortcut covers pure instances only")
    if not check_psd(inst.M, max(tol, 1e-9)):
        return PsdReport(is_psd=False, status=PsdStatus.NOT_PSD)
    zbar = lemke_nominal(inst.M, inst.q, max(tol, 1e-9))
    if zbar is None:
        return PsdReport(is_psd=True, status=PsdStatus.INFEASIBLE)
    support = compute_support_p(inst.M, inst.q, zbar, tol, eps_zero)
    fixed = tuple(1 if i in support else 0 for i in range(inst.n))
    builder = NodeLpBuilder(inst, basis)
    res = lp.lp_feasible(builder.model(fixed), tol)
    lp_calls = inst.n + 1
    if res.status is lp.LpStatus.INFEASIBLE:
        return PsdReport(
            is_psd=True,
            status=PsdStatus.INFEASIBLE,
            nominal=zbar,
            support_p=support,
            lp_calls=lp_calls,
        )
    policy = builder.extract_policy(res.point, fixed, eps_zero)
    report = verify_policy(inst, basis, policy, verify_tol, eps_zero)
    if not report.verified:
        raise NumericalFailure(
            "forced-support policy failed certification: "
            + "; ".join(report.violations)
        )
    return PsdReport(
        is_psd=True,
        status=PsdStatus.FEASIBLE,
        nominal=zbar,
        support_p=support,
        policy=policy,
        verification=report,
        lp_calls=lp_calls,
    )
