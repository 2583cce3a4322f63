"""Polyhedral uncertainty sets and what the hull computation sees.

Every set is given as {u : Theta u >= zeta}.  The pipeline insists on two
things before it will touch an instance: the set must be bounded, and the
origin must sit in its relative interior.  Boundedness keeps the inner
minimizations finite; the relative-interior condition is what lets a
finite list of hull directions certify nonnegativity of an affine rule
over the whole set.

This script walks a few sets through validate() and compute_lin_hull()
and shows how degeneracy shrinks the hull.
"""

import numpy as np

from aarlcp import (
    EmptyUncertaintySet,
    Instance,
    NotCompact,
    RelintViolation,
    compute_lin_hull,
    validate,
)


def instance_with_set(Theta, zeta):
    """Wrap a set in a trivial one-dimensional instance."""
    k = Theta.shape[1]
    return Instance(
        M=np.array([[1.0]]),
        q=np.array([1.0]),
        T=np.zeros((1, k)),
        Theta=Theta,
        zeta=zeta,
    )


def show(title, Theta, zeta):
    print(f"-- {title} --")
    inst = instance_with_set(np.asarray(Theta, float), np.asarray(zeta, float))
    try:
        rep = validate(inst)
        print(f"compact: {rep.compact}, origin interior: {rep.zero_in_relint}")
        if rep.implicit_equality_rows:
            print(f"rows tight on the whole set: {sorted(rep.implicit_equality_rows)}")
        basis = compute_lin_hull(inst)
    except (NotCompact, EmptyUncertaintySet, RelintViolation) as exc:
        print(f"rejected: {exc}")
        print()
        return
    print(f"hull dimension: {basis.dimension} (ambient {inst.k})")
    for v in basis.vectors:
        print(f"  direction {np.round(v, 6)}")
    print()


def main():
    # the plain box: full-dimensional, hull = ambient space
    show(
        "box, radius 1",
        [[1, 0], [-1, 0], [0, 1], [0, -1]],
        [-1, -1, -1, -1],
    )

    # a pair of opposite rows with zero offset pins u1 = u2: the set is a
    # segment and the hull collapses to one direction
    show(
        "segment via a tight pair",
        [[1, -1], [-1, 1], [1, 0], [-1, 0]],
        [0, 0, -2, -2],
    )

    # all rows tight: the set is {0}; dimension 0 means decision rules are
    # only ever judged at the nominal point
    show("singleton at the origin", [[1], [-1]], [0, 0])

    # a half-space is unbounded, so worst cases need not exist
    show("half-space (rejected)", [[1, 0]], [-1])

    # shifting the tight pair off the origin breaks the relative-interior
    # requirement even though the set itself is perfectly fine
    show(
        "segment missing the origin (rejected)",
        [[1, -1], [-1, 1], [1, 0], [-1, 0]],
        [1, -1, -2, -2],
    )

    # contradictory rows: empty set
    show("empty set (rejected)", [[1], [-1]], [1, 1])


if __name__ == "__main__":
    main()
