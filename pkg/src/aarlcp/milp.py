"""Binary-support feasibility reformulation.

The search for an affine rule is driven by a support vector x in {0,1}^n:
row i is tight (x_i = 1, nominal value free to be positive) or off
(x_i = 0, nominal value pinned to zero).  Internally no big-M rows exist;
each tree node solves an LP with the always-valid nonnegativity machinery
plus exact indicator rows for the already-fixed entries.  The big-M form is
produced only by the export path, for hand-off to external integer
programming tools.

Node LP row families, shared with the oracle and the fast path:

* z_dual_value / z_dual_match: a nonnegative multiplier per set row
  certifies that the decision rule stays nonnegative on the whole set.
* w_dual_value / w_dual_match: the same certificate for the slack rule.
* here_and_now: the first h decision rows do not react to the uncertainty.
* mixed_nominal / mixed_direction: equality coupling of the free block.
* indicator rows: x_i = 1 pins the slack rule of row i to zero along the
  hull; x_i = 0 pins r_i to zero.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import lp
from .core import EPS_FEAS, EPS_ZERO, Instance, Policy
from .errors import DimensionMismatch, NodeLimitExceeded, NumericalFailure
from .linhull import LinHullBasis
from .verify import VerifyReport, verify_policy

TAG_SUPPORT_LINK = "support_link"
TAG_NOMINAL_COMP = "nominal_comp"
TAG_DIRECTION_COMP = "direction_comp"
TAG_Z_DUAL_VALUE = "z_dual_value"
TAG_Z_DUAL_MATCH = "z_dual_match"
TAG_W_DUAL_VALUE = "w_dual_value"
TAG_W_DUAL_MATCH = "w_dual_match"
TAG_HERE_AND_NOW = "here_and_now"
TAG_MIXED_NOMINAL = "mixed_nominal"
TAG_MIXED_DIRECTION = "mixed_direction"

ALL_TAGS = (
    TAG_SUPPORT_LINK,
    TAG_NOMINAL_COMP,
    TAG_DIRECTION_COMP,
    TAG_Z_DUAL_VALUE,
    TAG_Z_DUAL_MATCH,
    TAG_W_DUAL_VALUE,
    TAG_W_DUAL_MATCH,
    TAG_HERE_AND_NOW,
    TAG_MIXED_NOMINAL,
    TAG_MIXED_DIRECTION,
)

UNFIXED = -1


class SolveStatus(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class NodeState:
    """Partial support assignment: per index one of 1, 0, or UNFIXED."""

    fixed: tuple[int, ...]

    @property
    def depth(self) -> int:
        return sum(1 for f in self.fixed if f != UNFIXED)


@dataclass
class SolveOptions:
    tol: float = 1e-8
    eps_zero: float = EPS_ZERO
    verify_tol: float = EPS_FEAS
    node_limit: int | None = None
    branching: str = "heuristic"  # or "index"
    parallel: bool = False


@dataclass(eq=False)
class SolveReport:
    status: SolveStatus
    policy: object | None = None
    nodes_explored: int = 0
    lp_calls: int = 0
    verification: VerifyReport | None = None
    tolerances: dict = field(default_factory=dict)
    tally: dict | None = None


def _normalize_fixed(node, n: int) -> tuple[int, ...]:
    if isinstance(node, NodeState):
        fixed = node.fixed
    else:
        fixed = tuple(int(f) for f in node)
    if len(fixed) != n:
        raise DimensionMismatch(f"fixed vector must have length {n}")
    if any(f not in (UNFIXED, 0, 1) for f in fixed):
        raise ValueError("fixed entries must be 1, 0, or UNFIXED")
    return fixed


class NodeLpBuilder:
    """Assembles node LPs for one instance and hull basis.

    The always-valid rows are built once; per node only the indicator rows
    are appended.  Models share the bound arrays, which the solver never
    mutates.
    """

    def __init__(self, inst: Instance, basis: LinHullBasis):
        self.inst = inst
        self.basis = basis
        n, k, g = inst.n, inst.k, inst.g
        mixed = inst.mixed
        m = mixed.m if mixed is not None else 0
        self.n, self.k, self.g, self.m = n, k, g, m

        self._d0 = 0
        self._r0 = n * k
        self._a0 = self._r0 + n
        self._c0 = self._a0 + g * n
        self._s0 = self._c0 + g * n
        self._e0 = self._s0 + m
        self.total = self._e0 + m * k

        lower = np.zeros(self.total)
        upper = np.full(self.total, np.inf)
        lower[: self._r0] = -np.inf  # D rows react both ways
        if m:
            lower[self._s0 :] = -np.inf
        self._lower = lower
        self._upper = upper
        self._lower.setflags(write=False)
        self._upper.setflags(write=False)
        self._objective = np.zeros(self.total)
        self._objective.setflags(write=False)

        vectors = basis.vectors
        M, q, T = inst.M, inst.q, inst.T
        Theta, zeta = inst.Theta, inst.zeta
        N = mixed.N if mixed is not None else None

        static: list[tuple[np.ndarray, str, float]] = []
        eq_static: list[tuple[np.ndarray, str, float]] = []

        for i in range(n):
            row = np.zeros(self.total)
            row[self._acol(slice(None), i)] = zeta
            row[self._r0 + i] = 1.0
            static.append((row, lp.GE, 0.0))
        for i in range(n):
            for c in range(k):
                row = np.zeros(self.total)
                row[self._acol(slice(None), i)] = Theta[:, c]
                row[self._dcol(i, c)] = -1.0
                static.append((row, lp.EQ, 0.0))
        for i in range(n):
            row = np.zeros(self.total)
            row[self._ccol(slice(None), i)] = zeta
            row[self._r0 : self._r0 + n] = M[i]
            if m:
                row[self._s0 : self._s0 + m] = N[i]
            static.append((row, lp.GE, -q[i]))
        for i in range(n):
            for c in range(k):
                row = np.zeros(self.total)
                row[self._ccol(slice(None), i)] = Theta[:, c]
                for a in range(n):
                    row[self._dcol(a, c)] = -M[i, a]
                if m:
                    for a in range(m):
                        row[self._ecol(a, c)] = -N[i, a]
                static.append((row, lp.EQ, T[i, c]))

        pins: list[tuple[np.ndarray, str, float]] = []
        for i in range(inst.h):
            for c in range(k):
                row = np.zeros(self.total)
                row[self._dcol(i, c)] = 1.0
                pins.append((row, lp.EQ, 0.0))
        if mixed is not None:
            V, W, p, P = mixed.V, mixed.W, mixed.p, mixed.P
            for a in range(m):
                row = np.zeros(self.total)
                row[self._r0 : self._r0 + n] = V[a]
                row[self._s0 : self._s0 + m] = W[a]
                pins.append((row, lp.EQ, -p[a]))
            for v in vectors:
                for a in range(m):
                    row = np.zeros(self.total)
                    for b in range(n):
                        if V[a, b] != 0.0:
                            for c in range(k):
                                row[self._dcol(b, c)] = V[a, b] * v[c]
                    for b in range(m):
                        if W[a, b] != 0.0:
                            for c in range(k):
                                row[self._ecol(b, c)] += W[a, b] * v[c]
                    pins.append((row, lp.EQ, -float(P[a] @ v)))
            if not mixed.y_adjustable:
                for a in range(m):
                    for c in range(k):
                        row = np.zeros(self.total)
                        row[self._ecol(a, c)] = 1.0
                        pins.append((row, lp.EQ, 0.0))

        self._static = static + pins
        self._eq_static = pins

        # Exact indicator rows, cached per index.
        self._on_rows: list[list[tuple[np.ndarray, str, float]]] = []
        self._off_rows: list[tuple[np.ndarray, str, float]] = []
        for i in range(n):
            rows_i = []
            row = np.zeros(self.total)
            row[self._r0 : self._r0 + n] = M[i]
            if m:
                row[self._s0 : self._s0 + m] = N[i]
            rows_i.append((row, lp.EQ, -q[i]))
            for v in vectors:
                row = np.zeros(self.total)
                for a in range(n):
                    if M[i, a] != 0.0:
                        for c in range(k):
                            row[self._dcol(a, c)] = M[i, a] * v[c]
                if m:
                    for a in range(m):
                        if N[i, a] != 0.0:
                            for c in range(k):
                                row[self._ecol(a, c)] += N[i, a] * v[c]
                rows_i.append((row, lp.EQ, -float(T[i] @ v)))
            self._on_rows.append(rows_i)
            off = np.zeros(self.total)
            off[self._r0 + i] = 1.0
            self._off_rows.append((off, lp.EQ, 0.0))

    def _dcol(self, i, c):
        return self._d0 + i * self.k + c

    def _acol(self, j, i):
        if isinstance(j, slice):
            return slice(self._a0 + i * self.g, self._a0 + (i + 1) * self.g)
        return self._a0 + i * self.g + j

    def _ccol(self, j, i):
        if isinstance(j, slice):
            return slice(self._c0 + i * self.g, self._c0 + (i + 1) * self.g)
        return self._c0 + i * self.g + j

    def _ecol(self, a, c):
        return self._e0 + a * self.k + c

    def _assemble(self, rows) -> lp.LpModel:
        model = lp.LpModel.__new__(lp.LpModel)
        model.num_vars = self.total
        model.objective = self._objective
        model.rows = rows
        model.lower = self._lower
        model.upper = self._upper
        return model

    def model(self, node) -> lp.LpModel:
        """Full node LP: always-valid rows plus indicators for fixed entries."""
        fixed = _normalize_fixed(node, self.n)
        rows = list(self._static)
        for i, f in enumerate(fixed):
            if f == 1:
                rows.extend(self._on_rows[i])
            elif f == 0:
                rows.append(self._off_rows[i])
        return self._assemble(rows)

    def support_model(self, node) -> lp.LpModel:
        """Equality side only: indicators and pinning rows, nothing else.

        Used to split infeasibility causes when enumerating supports."""
        fixed = _normalize_fixed(node, self.n)
        rows = list(self._eq_static)
        for i, f in enumerate(fixed):
            if f == 1:
                rows.extend(self._on_rows[i])
            elif f == 0:
                rows.append(self._off_rows[i])
        return self._assemble(rows)

    def r_of(self, point: np.ndarray) -> np.ndarray:
        return point[self._r0 : self._r0 + self.n]

    def extract_policy(self, point, node, eps_zero: float = EPS_ZERO) -> Policy:
        """Read the affine rule off a node LP point at a fully fixed node."""
        fixed = _normalize_fixed(node, self.n)
        if any(f == UNFIXED for f in fixed):
            raise ValueError("policy extraction needs a fully fixed node")
        n, k, m = self.n, self.k, self.m
        D = np.array(point[: n * k]).reshape(n, k)
        if self.inst.h:
            D[: self.inst.h] = 0.0
        r = np.maximum(np.array(point[self._r0 : self._r0 + n]), 0.0)
        E = s = None
        if m:
            s = np.array(point[self._s0 : self._s0 + m])
            E = np.array(point[self._e0 : self._e0 + m * k]).reshape(m, k)
            if not self.inst.mixed.y_adjustable:
                E[:] = 0.0
        return Policy(D=D, r=r, x=np.array(fixed, dtype=int), E=E, s=s)


def build_node_lp(inst: Instance, basis: LinHullBasis, node) -> lp.LpModel:
    """One-shot node LP assembly; the tree search caches a builder instead."""
    return NodeLpBuilder(inst, basis).model(node)


class _Budget:
    """Thread-safe node counter with a hard cap."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self._lock = threading.Lock()

    def tick(self) -> None:
        with self._lock:
            self.used += 1
            if self.used > self.limit:
                raise NodeLimitExceeded(
                    f"node budget of {self.limit} exhausted without a conclusion"
                )


def _branch_choice(fixed, rhat, opts):
    unfixed = [i for i, f in enumerate(fixed) if f == UNFIXED]
    if opts.branching == "index":
        return unfixed[0], 0
    i = max(unfixed, key=lambda t: (rhat[t], -t))
    first = 1 if rhat[i] > opts.eps_zero else 0
    return i, first


def _with(fixed, i, val):
    out = list(fixed)
    out[i] = val
    return tuple(out)


def _dfs(builder, root, opts, budget, stop):
    """Depth-first search below one root assignment.

    Returns (fixed, point) of the first feasible leaf, or None when the
    subtree is exhausted or the stop event fires.
    """
    stack = [root]
    while stack:
        if stop is not None and stop.is_set():
            return None
        fixed = stack.pop()
        budget.tick()
        res = lp.lp_feasible(builder.model(fixed), opts.tol)
        if res.status is lp.LpStatus.INFEASIBLE:
            continue
        if all(f != UNFIXED for f in fixed):
            return fixed, res.point
        i, first = _branch_choice(fixed, builder.r_of(res.point), opts)
        stack.append(_with(fixed, i, 1 - first))
        stack.append(_with(fixed, i, first))
    return None


def _run_search(builder, inst, opts, make_policy, verify_fn) -> SolveReport:
    n = builder.n
    # a full binary tree over n indices has 2^(n+1) - 1 nodes counting the
    # root, so this default always lets an exhaustive run finish
    limit = opts.node_limit if opts.node_limit else 2 ** min(n + 1, 21)
    budget = _Budget(limit)

    if opts.parallel:
        leaf = _parallel_search(builder, opts, budget)
    else:
        leaf = _dfs(builder, tuple([UNFIXED] * n), opts, budget, None)

    tolerances = {
        "tol": opts.tol,
        "eps_zero": opts.eps_zero,
        "verify_tol": opts.verify_tol,
    }
    if leaf is None:
        return SolveReport(
            status=SolveStatus.INFEASIBLE,
            nodes_explored=budget.used,
            lp_calls=budget.used,
            tolerances=tolerances,
        )
    fixed, point = leaf
    policy = make_policy(point, fixed)
    report = verify_fn(policy)
    if not report.verified:
        raise NumericalFailure(
            "search returned a policy that fails certification: "
            + "; ".join(report.violations)
        )
    return SolveReport(
        status=SolveStatus.FEASIBLE,
        policy=policy,
        nodes_explored=budget.used,
        lp_calls=budget.used,
        verification=report,
        tolerances=tolerances,
    )


def _parallel_search(builder, opts, budget):
    """Split the root once and explore the two children concurrently."""
    n = builder.n
    root = tuple([UNFIXED] * n)
    budget.tick()
    res = lp.lp_feasible(builder.model(root), opts.tol)
    if res.status is lp.LpStatus.INFEASIBLE:
        return None
    if all(f != UNFIXED for f in root):
        return root, res.point
    i, first = _branch_choice(root, builder.r_of(res.point), opts)
    children = [_with(root, i, first), _with(root, i, 1 - first)]

    stop = threading.Event()
    results: list = [None, None]
    errors: list = [None, None]

    def work(slot, child):
        try:
            out = _dfs(builder, child, opts, budget, stop)
            if out is not None:
                results[slot] = out
                stop.set()
        except BaseException as exc:  # propagate to the caller
            errors[slot] = exc
            stop.set()

    threads = [
        threading.Thread(target=work, args=(slot, child))
        for slot, child in enumerate(children)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for exc in errors:
        if exc is not None:
            raise exc
    for out in results:
        if out is not None:
            return out
    return None


def bnb_solve(
    inst: Instance, basis: LinHullBasis, opts: SolveOptions | None = None
) -> SolveReport:
    """Search support vectors depth first, pruning by node LP infeasibility.

    Feasible results always carry a policy that passed certification; an
    Infeasible status means the whole tree was exhausted.  lp_calls counts
    node relaxation solves.  Mixed instances belong to mixed_solve.
    """
    if inst.mixed is not None:
        raise DimensionMismatch(
            "instance carries a free block; use mixed_solve instead"
        )
    opts = opts or SolveOptions()
    builder = NodeLpBuilder(inst, basis)
    return _run_search(
        builder,
        inst,
        opts,
        make_policy=lambda pt, fx: builder.extract_policy(pt, fx, opts.eps_zero),
        verify_fn=lambda pol: verify_policy(
            inst, basis, pol, opts.verify_tol, opts.eps_zero
        ),
    )


# ---------------------------------------------------------------------------
# Big-M model and text export


@dataclass
class MilpRow:
    name: str
    coeffs: dict[str, float]
    relation: str
    rhs: float
    tag: str


@dataclass(eq=False)
class MilpModel:
    """Explicit big-M mixed-binary model, ready for text export.

    Variable names follow x{i}, D{i}_{c}, r{i}, A{j}_{i}, C{j}_{i} with
    1-based indices.  Every row carries exactly one tag.
    """

    n: int
    k: int
    g: int
    ell: int
    h: int
    big_m: float
    rows: list[MilpRow]
    binaries: list[str]
    continuous: list[str]
    free: list[str]

    def rows_by_tag(self, tag: str) -> list[MilpRow]:
        return [row for row in self.rows if row.tag == tag]


def default_big_m(inst: Instance) -> float:
    """10^4 times the largest of the data magnitudes (at least one)."""

    def inf_norm_mat(a):
        return float(np.abs(a).sum(axis=1).max()) if a.size else 0.0

    return 1e4 * max(
        1.0,
        inf_norm_mat(inst.M),
        float(np.abs(inst.q).max()),
        inf_norm_mat(inst.T),
        float(np.abs(inst.zeta).max()) if inst.zeta.size else 0.0,
    )


def build_milp(
    inst: Instance, basis: LinHullBasis, big_m: float | None = None
) -> MilpModel:
    """Assemble the big-M feasibility model for export.

    The search itself never uses this form; a finite big_m below the size of
    a genuine policy can make the exported model infeasible.
    """
    if inst.mixed is not None:
        raise DimensionMismatch("export covers pure instances only")
    if big_m is None:
        big_m = default_big_m(inst)
    big_m = float(big_m)
    if not np.isfinite(big_m) or big_m <= 0:
        raise ValueError("big_m must be positive and finite")

    n, k, g = inst.n, inst.k, inst.g
    M, q, T = inst.M, inst.q, inst.T
    Theta, zeta = inst.Theta, inst.zeta
    vectors = basis.vectors
    ell = len(vectors)
    h = inst.h

    x = [f"x{i + 1}" for i in range(n)]
    Dn = [[f"D{i + 1}_{c + 1}" for c in range(k)] for i in range(n)]
    rn = [f"r{i + 1}" for i in range(n)]
    An = [[f"A{j + 1}_{i + 1}" for i in range(n)] for j in range(g)]
    Cn = [[f"C{j + 1}_{i + 1}" for i in range(n)] for j in range(g)]

    rows: list[MilpRow] = []

    def add(name, coeffs, rel, rhs, tag):
        clean = {v: float(c) for v, c in coeffs if c != 0.0}
        rows.append(MilpRow(name, clean, rel, float(rhs), tag))

    for i in range(n):
        add(
            f"sl{i + 1}",
            [(rn[i], 1.0), (x[i], -big_m)],
            lp.LE,
            0.0,
            TAG_SUPPORT_LINK,
        )
    for i in range(n):
        terms = [(rn[a], M[i, a]) for a in range(n)]
        add(
            f"ncu{i + 1}",
            terms + [(x[i], big_m)],
            lp.LE,
            big_m - q[i],
            TAG_NOMINAL_COMP,
        )
        add(f"ncl{i + 1}", list(terms), lp.GE, -q[i], TAG_NOMINAL_COMP)
    for i in range(n):
        for j, v in enumerate(vectors):
            terms = [
                (Dn[a][c], M[i, a] * v[c]) for a in range(n) for c in range(k)
            ]
            t_iv = float(T[i] @ v)
            add(
                f"dcu{i + 1}_{j + 1}",
                terms + [(x[i], big_m)],
                lp.LE,
                big_m - t_iv,
                TAG_DIRECTION_COMP,
            )
            add(
                f"dcl{i + 1}_{j + 1}",
                terms + [(x[i], -big_m)],
                lp.GE,
                -big_m - t_iv,
                TAG_DIRECTION_COMP,
            )
    for i in range(n):
        add(
            f"zv{i + 1}",
            [(An[j][i], zeta[j]) for j in range(g)] + [(rn[i], 1.0)],
            lp.GE,
            0.0,
            TAG_Z_DUAL_VALUE,
        )
    for i in range(n):
        for c in range(k):
            add(
                f"zm{i + 1}_{c + 1}",
                [(An[j][i], Theta[j, c]) for j in range(g)] + [(Dn[i][c], -1.0)],
                lp.EQ,
                0.0,
                TAG_Z_DUAL_MATCH,
            )
    for i in range(n):
        add(
            f"wv{i + 1}",
            [(Cn[j][i], zeta[j]) for j in range(g)]
            + [(rn[a], M[i, a]) for a in range(n)],
            lp.GE,
            -q[i],
            TAG_W_DUAL_VALUE,
        )
    for i in range(n):
        for c in range(k):
            add(
                f"wm{i + 1}_{c + 1}",
                [(Cn[j][i], Theta[j, c]) for j in range(g)]
                + [(Dn[a][c], -M[i, a]) for a in range(n)],
                lp.EQ,
                T[i, c],
                TAG_W_DUAL_MATCH,
            )
    for i in range(h):
        for c in range(k):
            add(f"hn{i + 1}_{c + 1}", [(Dn[i][c], 1.0)], lp.EQ, 0.0, TAG_HERE_AND_NOW)

    continuous = (
        [name for block in Dn for name in block]
        + rn
        + [An[j][i] for i in range(n) for j in range(g)]
        + [Cn[j][i] for i in range(n) for j in range(g)]
    )
    free = [name for block in Dn for name in block]
    return MilpModel(
        n=n,
        k=k,
        g=g,
        ell=ell,
        h=h,
        big_m=big_m,
        rows=rows,
        binaries=x,
        continuous=continuous,
        free=free,
    )


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _lp_expr(coeffs: dict[str, float], placeholder: str) -> str:
    if not coeffs:
        return f"0 {placeholder}"
    parts = []
    for idx, (var, c) in enumerate(coeffs.items()):
        mag = abs(c)
        if idx == 0:
            if c == 1.0:
                parts.append(var)
            elif c == -1.0:
                parts.append(f"- {var}")
            else:
                parts.append(f"{_fmt_num(c)} {var}")
        else:
            sign = "-" if c < 0 else "+"
            if mag == 1.0:
                parts.append(f"{sign} {var}")
            else:
                parts.append(f"{sign} {_fmt_num(mag)} {var}")
    return " ".join(parts)


_CAVEAT = (
    "rows bounding tight values by multiples of (1 - x_i) can cut genuine"
    " policies when the constant is too small; raise it if a known feasible"
    " instance exports as infeasible"
)


def export_milp(model: MilpModel, fmt: str = "lp") -> str:
    """Render the big-M model as LP ("lp") or fixed-field MPS ("mps") text."""
    if fmt == "lp":
        return _export_lp(model)
    if fmt == "mps":
        return _export_mps(model)
    raise ValueError(f"unknown export format {fmt!r}")


def _export_lp(model: MilpModel) -> str:
    out = [
        f"\\ big-M feasibility model, constant b = {_fmt_num(model.big_m)}",
        f"\\ {_CAVEAT}",
        "Minimize",
        " obj: 0",
        "Subject To",
    ]
    placeholder = "r1"
    for row in model.rows:
        expr = _lp_expr(row.coeffs, placeholder)
        out.append(f" {row.name}: {expr} {row.relation} {_fmt_num(row.rhs)}")
    out.append("Bounds")
    for name in model.free:
        out.append(f" {name} free")
    out.append("Binaries")
    out.append(" " + " ".join(model.binaries))
    out.append("End")
    return "\n".join(out) + "\n"


def _export_mps(model: MilpModel) -> str:
    rel_tag = {lp.LE: "L", lp.GE: "G", lp.EQ: "E"}
    out = [
        f"* big-M feasibility model, constant b = {_fmt_num(model.big_m)}",
        f"* {_CAVEAT}",
        "NAME          AARLCP",
        "ROWS",
        " N  COST",
    ]
    for row in model.rows:
        out.append(f" {rel_tag[row.relation]}  {row.name}")
    out.append("COLUMNS")
    by_var: dict[str, list[tuple[str, float]]] = {
        name: [] for name in model.binaries + model.continuous
    }
    for row in model.rows:
        for var, c in row.coeffs.items():
            by_var[var].append((row.name, c))
    for var in model.binaries + model.continuous:
        for rname, c in by_var[var]:
            out.append(f"    {var:<10}{rname:<10}{_fmt_num(c)}")
    out.append("RHS")
    for row in model.rows:
        if row.rhs != 0.0:
            out.append(f"    {'RHS':<10}{row.name:<10}{_fmt_num(row.rhs)}")
    out.append("BOUNDS")
    for var in model.binaries:
        out.append(f" BV {'BND':<10}{var}")
    for var in model.free:
        out.append(f" FR {'BND':<10}{var}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# LP text parsing (round-trip support)


@dataclass(eq=False)
class ParsedLp:
    """Outcome of parsing LP text: rows, binaries, and bound declarations."""

    objective: dict[str, float]
    rows: list[tuple[str, dict[str, float], str, float]]
    binaries: list[str]
    bounds: dict[str, tuple[float, float]]

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for _, terms, _, _ in self.rows:
            for v in terms:
                seen.setdefault(v, None)
        for v in self.objective:
            seen.setdefault(v, None)
        for v in self.binaries:
            seen.setdefault(v, None)
        for v in self.bounds:
            seen.setdefault(v, None)
        return list(seen)


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def _parse_terms(tokens: list[str]) -> tuple[dict[str, float], float]:
    terms: dict[str, float] = {}
    const = 0.0
    sign = 1.0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            i += 1
            continue
        if tok == "-":
            sign = -sign
            i += 1
            continue
        if _is_number(tok):
            val = sign * float(tok)
            if i + 1 < len(tokens) and not _is_number(tokens[i + 1]) and tokens[
                i + 1
            ] not in ("+", "-"):
                var = tokens[i + 1]
                terms[var] = terms.get(var, 0.0) + val
                i += 2
            else:
                const += val
                i += 1
        else:
            terms[tok] = terms.get(tok, 0.0) + sign
            i += 1
        sign = 1.0
    return terms, const


def parse_lp_text(text: str) -> ParsedLp:
    """Parse the LP text subset produced by export_milp."""
    objective: dict[str, float] = {}
    rows: list[tuple[str, dict[str, float], str, float]] = []
    binaries: list[str] = []
    bounds: dict[str, tuple[float, float]] = {}

    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "min", "maximize", "max"):
            section = "objective"
            continue
        if low in ("subject to", "st", "s.t.", "such that"):
            section = "rows"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low in ("binaries", "binary", "bin"):
            section = "binaries"
            continue
        if low == "end":
            break

        if section == "objective":
            body = line.split(":", 1)[1] if ":" in line else line
            terms, _ = _parse_terms(body.split())
            for var, c in terms.items():
                objective[var] = objective.get(var, 0.0) + c
        elif section == "rows":
            if ":" in line:
                name, body = line.split(":", 1)
                name = name.strip()
            else:
                name, body = f"row{len(rows) + 1}", line
            tokens = body.split()
            rel_pos = next(
                (t for t, tok in enumerate(tokens) if tok in (lp.LE, lp.GE, lp.EQ)),
                None,
            )
            if rel_pos is None:
                raise ValueError(f"constraint without relation: {line!r}")
            relation = tokens[rel_pos]
            terms, const = _parse_terms(tokens[:rel_pos])
            _, rhs_const = _parse_terms(tokens[rel_pos + 1 :])
            rows.append((name, terms, relation, rhs_const - const))
        elif section == "bounds":
            tokens = line.split()
            if len(tokens) == 2 and tokens[1].lower() == "free":
                bounds[tokens[0]] = (-np.inf, np.inf)
            elif len(tokens) == 5 and tokens[1] == lp.LE and tokens[3] == lp.LE:
                bounds[tokens[2]] = (float(tokens[0]), float(tokens[4]))
            elif len(tokens) == 3 and tokens[1] in (lp.LE, lp.GE):
                lo, hi = (0.0, float(tokens[2])) if tokens[1] == lp.LE else (
                    float(tokens[2]),
                    np.inf,
                )
                bounds[tokens[0]] = (lo, hi)
            else:
                raise ValueError(f"unsupported bound line: {line!r}")
        elif section == "binaries":
            binaries.extend(line.split())

    return ParsedLp(objective=objective, rows=rows, binaries=binaries, bounds=bounds)
