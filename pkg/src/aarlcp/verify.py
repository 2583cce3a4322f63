"""Certification of affine policies, and an exhaustive support-set oracle.

A policy is accepted when the rows with positive nominal value satisfy the
tight nominal and direction conditions, and when both affine pieces stay
nonnegative over the whole uncertainty set.  The nonnegativity side is
checked with fresh minimization LPs per row, independent of whatever dual
reasoning produced the policy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import lp
from .core import (
    EPS_FEAS,
    EPS_ZERO,
    Instance,
    Policy,
    policy_matches_instance,
    uncertainty_lp,
)
from .errors import NotCompact, OracleLimitExceeded
from .linhull import LinHullBasis

if TYPE_CHECKING:
    from .milp import SolveReport


@dataclass(eq=False)
class VerifyReport:
    """Residuals, per-row minima, and the verdict of a certification run.

    support: rows whose truncated nominal value is strictly positive.
    nominal_residual: worst violation of the tight nominal condition on the
        support rows.
    direction_residual: worst violation of the tight direction condition on
        the support rows, over all hull basis vectors.
    min_z / min_w: per-row minima of the two affine pieces over the set.
    violations: human-readable failures; empty exactly when verified.
    """

    support: frozenset[int]
    nominal_residual: float
    direction_residual: float
    min_z: np.ndarray
    min_w: np.ndarray
    violations: tuple[str, ...] = ()
    equality_residual: float | None = None
    equality_direction_residual: float | None = None

    @property
    def verified(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "verified" if self.verified else "violations"


def _min_over_set(Theta, zeta, c, tol) -> float:
    """Minimum of c @ u over the set, via maximizing the negation."""
    if not np.any(c):
        return 0.0
    res = lp.lp_solve(uncertainty_lp(Theta, zeta, -np.asarray(c, float)), tol)
    if res.status is lp.LpStatus.UNBOUNDED:
        raise NotCompact("minimization over the uncertainty set is unbounded")
    if res.status is not lp.LpStatus.OPTIMAL:
        raise ValueError("the uncertainty set is empty")
    return -res.value


def certify_affine(
    Theta: np.ndarray,
    zeta: np.ndarray,
    vectors: tuple[np.ndarray, ...],
    r_trunc: np.ndarray,
    D: np.ndarray,
    w_lin: np.ndarray,
    w_const: np.ndarray,
    tol: float,
) -> VerifyReport:
    """Shared certification core.

    r_trunc must already be truncated at the zero threshold; w_lin and
    w_const describe the slack piece w(u) = w_lin @ u + w_const computed
    from the truncated policy.
    """
    n = len(r_trunc)
    support = sorted(i for i in range(n) if r_trunc[i] > 0.0)

    nominal_residual = 0.0
    direction_residual = 0.0
    if support:
        nominal_residual = float(np.abs(w_const[support]).max())
        for v in vectors:
            d = np.abs(w_lin[support] @ v)
            if d.size:
                direction_residual = max(direction_residual, float(d.max()))

    min_z = np.zeros(n)
    min_w = np.zeros(n)
    for i in range(n):
        min_z[i] = r_trunc[i] + _min_over_set(Theta, zeta, D[i], tol)
        min_w[i] = w_const[i] + _min_over_set(Theta, zeta, w_lin[i], tol)

    violations = []
    if nominal_residual > tol:
        violations.append(
            f"tight nominal condition violated on the support: residual {nominal_residual:g}"
        )
    if direction_residual > tol:
        violations.append(
            f"tight direction condition violated on the support: residual {direction_residual:g}"
        )
    for i in range(n):
        if min_z[i] < -tol:
            violations.append(f"decision row {i} dips to {min_z[i]:g} over the set")
        if min_w[i] < -tol:
            violations.append(f"slack row {i} dips to {min_w[i]:g} over the set")

    return VerifyReport(
        support=frozenset(support),
        nominal_residual=nominal_residual,
        direction_residual=direction_residual,
        min_z=min_z,
        min_w=min_w,
        violations=tuple(violations),
    )


def verify_policy(
    inst: Instance,
    basis: LinHullBasis,
    pol: Policy,
    tol: float = EPS_FEAS,
    eps_zero: float = EPS_ZERO,
) -> VerifyReport:
    """Certify an affine policy for a pure instance.

    Entries of r at or below eps_zero are truncated to zero first and the
    truncated rule is what gets certified.
    """
    policy_matches_instance(inst, pol)
    r = pol.r.copy()
    r[r <= eps_zero] = 0.0
    w_lin = inst.M @ pol.D + inst.T
    w_const = inst.M @ r + inst.q
    return certify_affine(
        inst.Theta, inst.zeta, basis.vectors, r, pol.D, w_lin, w_const, tol
    )


def oracle_enumerate(
    inst: Instance,
    basis: LinHullBasis,
    tol: float = 1e-8,
    eps_zero: float = EPS_ZERO,
    limit: int = 16,
) -> "SolveReport":
    """Exhaustive search over all support vectors, smallest supports first.

    Each support is probed in two stages: first the equality system alone
    (tight rows, pinned rows, coupling rows), then the full node LP with the
    nonnegativity machinery.  The first feasible support wins and its policy
    is certified before being returned.  The returned report carries a tally
    of how the losing supports failed.
    """
    from .milp import NodeLpBuilder, SolveReport, SolveStatus

    n = inst.n
    if n > limit:
        raise OracleLimitExceeded(
            f"instance has {n} rows; enumeration is capped at {limit}"
        )
    builder = NodeLpBuilder(inst, basis)
    lp_calls = 0
    tested = 0
    eq_infeasible = 0
    nonneg_infeasible = 0
    for size in range(n + 1):
        for supp in itertools.combinations(range(n), size):
            fixed = tuple(1 if i in supp else 0 for i in range(n))
            tested += 1
            probe = lp.lp_feasible(builder.support_model(fixed), tol)
            lp_calls += 1
            if probe.status is lp.LpStatus.INFEASIBLE:
                eq_infeasible += 1
                continue
            res = lp.lp_feasible(builder.model(fixed), tol)
            lp_calls += 1
            if res.status is lp.LpStatus.INFEASIBLE:
                nonneg_infeasible += 1
                continue
            policy = builder.extract_policy(res.point, fixed, eps_zero)
            if inst.mixed is None:
                report = verify_policy(inst, basis, policy, max(tol, EPS_FEAS))
            else:
                from .mixed import MixedPolicy, verify_mixed

                policy = MixedPolicy.from_policy(policy)
                report = verify_mixed(inst, basis, policy, max(tol, EPS_FEAS))
            return SolveReport(
                status=SolveStatus.FEASIBLE,
                policy=policy,
                nodes_explored=tested,
                lp_calls=lp_calls,
                verification=report,
                tolerances={"tol": tol, "eps_zero": eps_zero},
                tally={
                    "tested": tested,
                    "equality_infeasible": eq_infeasible,
                    "nonnegativity_infeasible": nonneg_infeasible,
                    "feasible_support": tuple(int(i) for i in supp),
                },
            )
    return SolveReport(
        status=SolveStatus.INFEASIBLE,
        policy=None,
        nodes_explored=tested,
        lp_calls=lp_calls,
        verification=None,
        tolerances={"tol": tol, "eps_zero": eps_zero},
        tally={
            "tested": tested,
            "equality_infeasible": eq_infeasible,
            "nonnegativity_infeasible": nonneg_infeasible,
            "feasible_support": None,
        },
    )
