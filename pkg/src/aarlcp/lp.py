"""Dense two-phase primal simplex solver.

Every linear subproblem in the package runs through this module: direction
maximizations over the uncertainty polyhedron, verification minimizations,
support probes, and the node relaxations inside the tree search.  Problems
are desk scale by design, so the solver keeps a dense tableau and trades
sparsity tricks for predictable, debuggable behavior.

A model is built row by row and then solved.  Solving never mutates the
model, so one model may be shared by concurrent calls.

Internals, in brief: general bounds are reduced to shifts plus explicit
rows, free variables are split into positive and negative parts, rows are
equilibrated, and phase one drives a full artificial basis to zero.  Pricing
is Dantzig's rule until a long run of degenerate pivots switches the loop to
Bland's rule, which is kept until the phase ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericalFailure

LE = "<="
EQ = "="
GE = ">="

_RELATIONS = (LE, EQ, GE)

# Entries smaller than this are never accepted as pivots, independent of the
# caller's feasibility tolerance.
_PIV_EPS = 1e-9


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    """Outcome of a solve.

    value and point are filled only for OPTIMAL.  The point lives in the
    model's original variable space.
    """

    status: LpStatus
    value: float | None = None
    point: np.ndarray | None = None


class LpModel:
    """Maximize ``objective @ x`` subject to rows and variable bounds.

    Variables default to the bounds [0, +inf); use :meth:`set_free` or
    :meth:`set_bounds` to change them.  Rows are (coefficients, relation,
    rhs) with relation one of "<=", "=", ">=".
    """

    def __init__(self, num_vars: int, objective=None):
        self.num_vars = int(num_vars)
        if objective is None:
            self.objective = np.zeros(self.num_vars)
        else:
            self.objective = np.asarray(objective, dtype=float).copy()
            if self.objective.shape != (self.num_vars,):
                raise ValueError("objective length does not match num_vars")
        self.rows: list[tuple[np.ndarray, str, float]] = []
        self.lower = np.zeros(self.num_vars)
        self.upper = np.full(self.num_vars, np.inf)

    def add_row(self, coeffs, relation: str, rhs: float) -> None:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.num_vars,):
            raise ValueError("row length does not match num_vars")
        if relation not in _RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        self.rows.append((coeffs, relation, float(rhs)))

    def set_free(self, indices=None) -> None:
        if indices is None:
            self.lower[:] = -np.inf
            self.upper[:] = np.inf
        else:
            for i in np.atleast_1d(indices):
                self.lower[int(i)] = -np.inf
                self.upper[int(i)] = np.inf

    def set_bounds(self, i: int, lower: float, upper: float) -> None:
        self.lower[int(i)] = lower
        self.upper[int(i)] = upper


def lp_solve(model: LpModel, tol: float = 1e-8) -> LpResult:
    """Solve the model to optimality, infeasibility, or unboundedness."""
    return _solve(model, tol, want_phase2=True)


def lp_feasible(model: LpModel, tol: float = 1e-8) -> LpResult:
    """Feasibility probe: phase one only, objective untouched.

    Returns OPTIMAL with some feasible point, or INFEASIBLE.  Never
    UNBOUNDED.
    """
    return _solve(model, tol, want_phase2=False)


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r, :] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r, :])
    T[:, j] = 0.0
    T[r, j] = 1.0


def _price_out(T: np.ndarray, basis: np.ndarray) -> None:
    m = T.shape[0] - 1
    for r in range(m):
        cb = T[-1, basis[r]]
        if cb != 0.0:
            T[-1, :] -= cb * T[r, :]


def _iterate(T: np.ndarray, basis: np.ndarray, nact: int, tol: float) -> str:
    """Run the pivot loop on the priced tableau.  Returns "optimal" or
    "unbounded"; raises NumericalFailure when safeguards run out."""
    m = T.shape[0] - 1
    bland = False
    degen_run = 0
    bland_pivots = 0
    total_pivots = 0
    budget = 50 * (T.shape[0] + T.shape[1])
    hard_cap = 10 * budget
    while True:
        red = T[-1, :nact]
        if bland:
            cand = np.nonzero(red > tol)[0]
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])
        else:
            j = int(np.argmax(red))
            if red[j] <= tol:
                return "optimal"
        col = T[:m, j]
        pos = col > _PIV_EPS
        if not pos.any():
            return "unbounded"
        rhs = T[:m, -1]
        ratios = np.full(m, np.inf)
        ratios[pos] = rhs[pos] / col[pos]
        best = float(ratios.min())
        ties = np.nonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))[0]
        if bland:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[0])
        _pivot(T, r, j)
        basis[r] = j
        rhs = T[:m, -1]
        small = (rhs < 0.0) & (rhs > -1e-9)
        if small.any():
            rhs[small] = 0.0
        if (rhs < -1e-6).any():
            raise NumericalFailure("tableau right-hand side went negative")
        total_pivots += 1
        if best <= tol:
            degen_run += 1
            if not bland and degen_run >= 10 * max(m, 1):
                bland = True
        else:
            degen_run = 0
        if bland:
            bland_pivots += 1
            if bland_pivots > budget:
                raise NumericalFailure("pivot limit exhausted")
        if total_pivots > hard_cap:
            raise NumericalFailure("pivot limit exhausted")


def _solve(model: LpModel, tol: float, want_phase2: bool) -> LpResult:
    n = model.num_vars
    lower, upper = model.lower, model.upper
    if np.any(lower > upper):
        raise ValueError("variable lower bound exceeds upper bound")

    # Variable transform x = offsets + S @ y with y >= 0.
    offsets = np.zeros(n)
    scols: list[tuple[int, float]] = []
    bound_rows: list[tuple[int, float]] = []
    for i in range(n):
        lo, hi = lower[i], upper[i]
        if np.isfinite(lo):
            offsets[i] = lo
            scols.append((i, 1.0))
            if np.isfinite(hi):
                bound_rows.append((len(scols) - 1, hi - lo))
        elif np.isfinite(hi):
            offsets[i] = hi
            scols.append((i, -1.0))
        else:
            scols.append((i, 1.0))
            scols.append((i, -1.0))
    ns = len(scols)
    S = np.zeros((n, ns))
    for c, (i, sgn) in enumerate(scols):
        S[i, c] = sgn

    nrows = len(model.rows)
    C = np.zeros((nrows, n))
    rhs0 = np.zeros(nrows)
    senses = []
    for r, (coeffs, relation, b) in enumerate(model.rows):
        C[r] = coeffs
        rhs0[r] = b
        senses.append(relation)

    m = nrows + len(bound_rows)
    A = np.zeros((m, ns))
    b = np.zeros(m)
    if nrows:
        A[:nrows] = C @ S
        b[:nrows] = rhs0 - C @ offsets
    for t, (col, ub) in enumerate(bound_rows):
        A[nrows + t, col] = 1.0
        b[nrows + t] = ub
        senses.append(LE)

    # Row equilibration keeps big coefficients (for example big-M rows) from
    # washing out the tolerances.
    if m:
        scale = np.maximum(1.0, np.maximum(np.abs(A).max(axis=1), np.abs(b)))
        A /= scale[:, None]
        b /= scale

    flip = b < 0
    if flip.any():
        A[flip] *= -1.0
        b[flip] *= -1.0
        for r in np.nonzero(flip)[0]:
            if senses[r] == LE:
                senses[r] = GE
            elif senses[r] == GE:
                senses[r] = LE

    n_slack = sum(1 for s in senses if s != EQ)
    n_art = sum(1 for s in senses if s != LE)
    total = ns + n_slack + n_art
    T = np.zeros((m + 1, total + 1))
    T[:m, :ns] = A
    T[:m, -1] = b
    basis = np.zeros(m, dtype=int)
    sl = ns
    ar = ns + n_slack
    art_cols = []
    for r in range(m):
        s = senses[r]
        if s == LE:
            T[r, sl] = 1.0
            basis[r] = sl
            sl += 1
        elif s == GE:
            T[r, sl] = -1.0
            sl += 1
            T[r, ar] = 1.0
            basis[r] = ar
            art_cols.append(ar)
            ar += 1
        else:
            T[r, ar] = 1.0
            basis[r] = ar
            art_cols.append(ar)
            ar += 1

    n_real = ns + n_slack
    if art_cols:
        T[-1, :] = 0.0
        T[-1, art_cols] = -1.0
        _price_out(T, basis)
        status = _iterate(T, basis, total, tol)
        if status == "unbounded":
            raise NumericalFailure("phase one reported unbounded")
        # Phase one maximizes the negated artificial sum; the tableau stores
        # its negation, so infeasibility shows up as a positive entry.
        if T[-1, -1] > tol:
            return LpResult(LpStatus.INFEASIBLE)
        T, basis = _purge_artificials(T, basis, n_real)

    mc = T.shape[0] - 1
    if want_phase2:
        c_std = S.T @ model.objective
        T[-1, :] = 0.0
        T[-1, :ns] = c_std
        _price_out(T, basis)
        status = _iterate(T, basis, n_real, tol)
        if status == "unbounded":
            return LpResult(LpStatus.UNBOUNDED)

    y = np.zeros(n_real)
    y[basis] = T[:mc, -1]
    x = offsets + S @ y[:ns]
    value = float(model.objective @ x)

    # Catastrophic-failure detector only; fine-grained residual checks are
    # the callers' and the tests' job.
    if nrows:
        vals = C @ x
        guard = 1e-5 * max(1.0, float(np.abs(rhs0).max()))
        worst = 0.0
        for r in range(nrows):
            d = vals[r] - rhs0[r]
            rel = model.rows[r][1]
            if rel == LE:
                worst = max(worst, d)
            elif rel == GE:
                worst = max(worst, -d)
            else:
                worst = max(worst, abs(d))
        if worst > guard:
            raise NumericalFailure("solution failed the residual check")

    return LpResult(LpStatus.OPTIMAL, value, x)


def _purge_artificials(T: np.ndarray, basis: np.ndarray, n_real: int):
    """Pivot lingering artificials out of the basis, dropping rows that are
    redundant, then cut the artificial columns from the tableau."""
    m = T.shape[0] - 1
    drop = []
    for r in range(m):
        if basis[r] >= n_real:
            row = T[r, :n_real]
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > _PIV_EPS:
                _pivot(T, r, j)
                basis[r] = j
            else:
                drop.append(r)
    if drop:
        T = np.delete(T, drop, axis=0)
        basis = np.delete(basis, drop)
    T = np.delete(T, np.s_[n_real:-1], axis=1)
    return T, basis
