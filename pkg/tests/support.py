"""Shared instance builders and independent oracles for the tests.

The oracles here deliberately avoid the library's own reasoning: box minima
are computed from closed forms, sets are probed by rejection sampling, and
the exported big-M text is solved by brute-force enumeration over the
binaries with one continuous LP per assignment.
"""

import itertools

import numpy as np

from aarlcp import Instance, MixedExtension
from aarlcp import lp


def box_set(k, radius=1.0):
    """Theta, zeta for the box of the given radius around the origin."""
    rows = []
    rhs = []
    for c in range(k):
        e = np.zeros(k)
        e[c] = 1.0
        rows += [e, -e]
        rhs += [-radius, -radius]
    return np.array(rows), np.array(rhs)


def golden_instance():
    """Two rows, singular matrix, diagonal set {-2 <= u1 = u2 <= 2}."""
    return Instance(
        M=np.array([[1.0, -1.0], [1.0, -1.0]]),
        q=np.array([-1.0, -1.0]),
        T=np.eye(2),
        Theta=np.array([[1.0, -1.0], [-1.0, 1.0], [1.0, 0.0], [-1.0, 0.0]]),
        zeta=np.array([0.0, 0.0, -2.0, -2.0]),
    )


def reduction_instance(q):
    """Singleton set {0}; feasibility collapses to the nominal problem."""
    return Instance(
        M=np.array([[0.0, 0.0], [1.0, 0.0]]),
        q=np.asarray(q, dtype=float),
        T=np.array([[1.0], [1.0]]),
        Theta=np.array([[1.0], [-1.0]]),
        zeta=np.array([0.0, 0.0]),
    )


def export_1d_instance():
    """One row over [-1, 1]; the unique policy needs r = 2."""
    return Instance(
        M=np.array([[2.0]]),
        q=np.array([-4.0]),
        T=np.array([[1.0]]),
        Theta=np.array([[1.0], [-1.0]]),
        zeta=np.array([-1.0, -1.0]),
    )


def psd_desk_instance():
    Theta, zeta = box_set(2, 0.5)
    return Instance(
        M=np.array([[2.0, 0.0], [0.0, 0.0]]),
        q=np.array([-2.0, 1.0]),
        T=np.eye(2),
        Theta=Theta,
        zeta=zeta,
    )


def psd_infeasible_instance():
    # identity matrix, but the set is too wide for any affine rule
    Theta, zeta = box_set(2, 2.0)
    return Instance(
        M=np.eye(2),
        q=np.array([-1.0, -1.0]),
        T=np.eye(2),
        Theta=Theta,
        zeta=zeta,
    )


def mixed_1d(coupling, y_adjustable=True):
    """One complementarity row, one free variable fixed by y = 3."""
    mx = MixedExtension(
        V=np.array([[0.0]]),
        W=np.array([[1.0]]),
        N=np.array([[coupling]]),
        p=np.array([-3.0]),
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


def random_set(rng, k, g, tight_pair=False):
    """Compact polyhedron with 0 in the relative interior, exactly g rows.

    Always starts from a box (compactness), then spends the remaining rows
    on random cuts, or on one implicit-equality pair when asked.
    """
    radius = float(rng.uniform(0.5, 2.0))
    rows = []
    rhs = []
    for c in range(k):
        e = np.zeros(k)
        e[c] = 1.0
        rows += [e, -e]
        rhs += [-radius, -radius]
    if len(rows) > g:
        raise ValueError("g too small for a box")
    if tight_pair and g - len(rows) >= 2 and k >= 2:
        v = rng.standard_normal(k)
        v /= np.linalg.norm(v)
        rows += [v, -v]
        rhs += [0.0, 0.0]
    while len(rows) < g:
        v = rng.standard_normal(k)
        nv = np.linalg.norm(v)
        if nv < 1e-6:
            continue
        rows.append(v / nv)
        rhs.append(-float(rng.uniform(0.3, 2.0)))
    return np.array(rows), np.array(rhs)


def random_instance(rng, n, k, g, tight_pair=False):
    Theta, zeta = random_set(rng, k, g, tight_pair)
    return Instance(
        M=rng.standard_normal((n, n)),
        q=rng.standard_normal(n),
        T=rng.standard_normal((n, k)),
        Theta=Theta,
        zeta=zeta,
    )


def planted_instance(rng, n, k, g, tight_pair=False):
    """Instance built around a known feasible policy; returns (inst, support)."""
    Theta, zeta = random_set(rng, k, g, tight_pair)
    # the set sits inside the max box radius 2, so the L1 norm bounds minima
    size = int(rng.integers(1, n + 1))
    S = set(int(i) for i in rng.choice(n, size=size, replace=False))
    D = np.zeros((n, k))
    r = np.zeros(n)
    for i in S:
        D[i] = rng.standard_normal(k) * 0.3
        r[i] = 2.0 * np.abs(D[i]).sum() + rng.uniform(0.1, 1.0)
    M = rng.standard_normal((n, n))
    T = rng.standard_normal((n, k))
    q = rng.standard_normal(n)
    for i in range(n):
        if i in S:
            T[i] = -M[i] @ D
            q[i] = -float(M[i] @ r)
        else:
            q[i] = -float(M[i] @ r) + 2.0 * np.abs(M[i] @ D + T[i]).sum() + float(
                rng.uniform(0.05, 0.5)
            )
    return Instance(M=M, q=q, T=T, Theta=Theta, zeta=zeta), S


def planted_mixed_instance(rng, n, m, k):
    """Mixed pair built around a pinned-block feasible policy.

    Returns (pinned, freed, support): identical data, only the
    adjustability flag differs.  The planted policy keeps the free block
    constant, so the pinned variant is feasible by construction.
    """
    Theta, zeta = random_set(rng, k, 2 * k)
    size = int(rng.integers(0, n + 1))
    S = set(int(i) for i in rng.choice(n, size=size, replace=False))
    D = np.zeros((n, k))
    r = np.zeros(n)
    for i in S:
        D[i] = rng.standard_normal(k) * 0.3
        r[i] = 2.0 * np.abs(D[i]).sum() + rng.uniform(0.1, 1.0)
    y = rng.standard_normal(m)
    V = rng.standard_normal((m, n)) * 0.5
    W = rng.standard_normal((m, m)) + 2.0 * np.eye(m)
    N = rng.standard_normal((n, m)) * 0.5
    P = -(V @ D)
    p = -(V @ r + W @ y)
    M = rng.standard_normal((n, n))
    T = rng.standard_normal((n, k))
    q = np.zeros(n)
    for i in range(n):
        if i in S:
            T[i] = -(M[i] @ D)
            q[i] = -float(M[i] @ r + N[i] @ y)
        else:
            q[i] = -float(M[i] @ r + N[i] @ y) + 2.0 * np.abs(
                M[i] @ D + T[i]
            ).sum() + float(rng.uniform(0.05, 0.5))
    common = dict(M=M, q=q, T=T, Theta=Theta, zeta=zeta)
    pinned = Instance(
        mixed=MixedExtension(V=V, W=W, N=N, p=p, P=P, y_adjustable=False),
        **common,
    )
    freed = Instance(
        mixed=MixedExtension(V=V, W=W, N=N, p=p, P=P, y_adjustable=True),
        **common,
    )
    return pinned, freed, S


def affine_min_on_box(c, const, radius):
    """Exact minimum of c @ u + const over the box of the given radius."""
    return const - radius * float(np.abs(np.asarray(c)).sum())


def sample_points(rng, Theta, zeta, count=200, radius=2.5):
    """Points of the set, by rejection from a covering box; includes 0."""
    k = Theta.shape[1]
    points = [np.zeros(k)]
    tries = 0
    while len(points) < count and tries < 200 * count:
        u = rng.uniform(-radius, radius, size=k)
        if np.all(Theta @ u >= zeta - 1e-12):
            points.append(u)
        tries += 1
    return np.array(points)


def bigm_status(parsed, tol=1e-8):
    """Solve a parsed big-M model by enumerating the binaries.

    Returns "feasible" or "infeasible".  Each assignment substitutes the
    binaries into the rows and asks the LP solver about what remains.
    """
    bins = list(parsed.binaries)
    binset = set(bins)
    cont = [v for v in parsed.variables() if v not in binset]
    idx = {v: i for i, v in enumerate(cont)}

    for assign in itertools.product((0.0, 1.0), repeat=len(bins)):
        bval = dict(zip(bins, assign))
        model = lp.LpModel(len(cont))
        for name, (lo, hi) in parsed.bounds.items():
            if name in idx:
                model.set_bounds(idx[name], lo, hi)
        consistent = True
        for _, terms, rel, rhs in parsed.rows:
            coeffs = np.zeros(len(cont))
            shift = 0.0
            for var, c in terms.items():
                if var in bval:
                    shift += c * bval[var]
                else:
                    coeffs[idx[var]] += c
            b = rhs - shift
            if np.any(coeffs):
                model.add_row(coeffs, rel, b)
                continue
            # constant row: check it outright
            if rel == lp.LE and b < -tol:
                consistent = False
            elif rel == lp.GE and b > tol:
                consistent = False
            elif rel == lp.EQ and abs(b) > tol:
                consistent = False
            if not consistent:
                break
        if not consistent:
            continue
        if lp.lp_feasible(model, tol).status is lp.LpStatus.OPTIMAL:
            return "feasible"
    return "infeasible"
