"""Linear hull of the uncertainty polyhedron.

Rows whose inequality is tight over the entire set are implicit equalities.
Because the origin lies in the relative interior, each such row has a zero
right-hand side, so the set spans exactly the kernel of the stacked tight
rows.  A basis of that kernel is what the direction constraints of the
reformulation range over.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .core import Instance, rref_kernel_basis, uncertainty_lp
from .errors import EmptyUncertaintySet, NotCompact, RelintViolation


@dataclass(frozen=True, eq=False)
class LinHullBasis:
    """Basis of the linear hull plus the implicit-equality split.

    vectors: tuple of length-k arrays spanning the hull, each scaled to unit
    infinity norm, ordered by the free column of the underlying elimination.
    phi: the stacked implicit-equality rows (possibly zero rows).
    inequality_rows: indices of the rows that stay strict somewhere.
    """

    vectors: tuple[np.ndarray, ...]
    phi: np.ndarray
    inequality_rows: frozenset[int]

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def compute_lin_hull(inst: Instance, tol: float = 1e-8) -> LinHullBasis:
    """Split the set description into implicit equalities and strict rows,
    then return a kernel basis of the equality part.

    Expects a validated instance (compact set, origin in the relative
    interior).  One maximization per row; a row is tight everywhere exactly
    when its maximum equals its right-hand side, tested relative to the
    magnitude of that side.
    """
    Theta, zeta = inst.Theta, inst.zeta
    g, k = Theta.shape
    eq_rows: list[int] = []
    for j in range(g):
        res = lp.lp_solve(uncertainty_lp(Theta, zeta, Theta[j]), tol)
        if res.status is lp.LpStatus.UNBOUNDED:
            raise NotCompact(f"direction of row {j} is unbounded over the set")
        if res.status is lp.LpStatus.INFEASIBLE:
            raise EmptyUncertaintySet("the uncertainty set is empty")
        if abs(res.value - zeta[j]) <= tol * max(1.0, abs(zeta[j])):
            if abs(zeta[j]) > tol:
                raise RelintViolation(
                    f"row {j} is tight everywhere with nonzero right-hand side"
                )
            eq_rows.append(j)

    phi = Theta[eq_rows] if eq_rows else np.zeros((0, k))
    raw = rref_kernel_basis(phi, tol)
    vectors = []
    for v in raw:
        v = v / np.abs(v).max()
        v.setflags(write=False)
        vectors.append(v)
    phi = phi.copy()
    phi.setflags(write=False)
    return LinHullBasis(
        vectors=tuple(vectors),
        phi=phi,
        inequality_rows=frozenset(range(g)) - frozenset(eq_rows),
    )
