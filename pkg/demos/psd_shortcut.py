"""When M is positive semidefinite the tree collapses to one probe.

For PSD coupling the nominal problem is solvable by complementary
pivoting, its solution set is a polyhedron, and the rows that can carry a
positive value anywhere on that polyhedron are exactly the support the
robust problem needs.  So instead of branching over 2^n supports we:

  1. run Lemke's method on (M, q) at u = 0,
  2. probe each row's maximum over the nominal solution set (n LPs),
  3. solve a single node LP with the support fixed to the positive-capable
     rows.

The script runs the shortcut next to the general search and compares
work counts.
"""

import numpy as np

from aarlcp import (
    Instance,
    PsdStatus,
    bnb_solve,
    check_psd,
    compute_lin_hull,
    compute_support_p,
    lemke_nominal,
    psd_solve,
)


def desk_example():
    # rank-one coupling: row 2 of M is zero, so z2 never feeds back
    return Instance(
        M=np.array([[2.0, 0.0], [0.0, 0.0]]),
        q=np.array([-2.0, 1.0]),
        T=np.array([[0.5, 0.0], [0.0, 0.5]]),
        Theta=np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float),
        zeta=np.array([-0.5, -0.5, -0.5, -0.5]),
    )


def random_gram(rng, n, rank):
    G = rng.standard_normal((rank, n))
    return G.T @ G


def main():
    inst = desk_example()
    basis = compute_lin_hull(inst)

    print("== the pieces, one at a time ==")
    print(f"M PSD: {check_psd(inst.M)}")
    zbar = lemke_nominal(inst.M, inst.q)
    print(f"nominal solution from pivoting: {zbar}")
    support = compute_support_p(inst.M, inst.q, zbar)
    print(f"positive-capable rows: {sorted(support)}")

    print()
    print("== shortcut vs general search ==")
    fast = psd_solve(inst, basis)
    slow = bnb_solve(inst, basis)
    print(f"shortcut: {fast.status.value}, {fast.lp_calls} LP calls")
    print(f"tree:     {slow.status.value}, {slow.nodes_explored} nodes")
    print(f"shortcut policy r = {fast.policy.r}, verified: "
          f"{fast.verification.verified}")

    print()
    print("== agreement on random PSD draws ==")
    rng = np.random.default_rng(7)
    agree = 0
    trials = 25
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        M = random_gram(rng, n, rank=int(rng.integers(1, n + 1)))
        rad = rng.uniform(0.3, 1.0)
        k = 2
        box = np.vstack([np.eye(k), -np.eye(k)])
        cand = Instance(
            M=M,
            q=rng.standard_normal(n),
            T=rng.standard_normal((n, k)) * 0.5,
            Theta=box,
            zeta=np.full(2 * k, -rad),
        )
        b = compute_lin_hull(cand)
        fast = psd_solve(cand, b)
        slow = bnb_solve(cand, b)
        same = (fast.status is PsdStatus.FEASIBLE) == (
            slow.status.value == "feasible"
        )
        agree += int(same)
    print(f"status agreement: {agree}/{trials}")

    print()
    print("== a non-PSD instance is refused by the shortcut ==")
    skew = Instance(
        M=np.array([[0.0, 1.0], [-1.0, 0.0]]) + np.array([[0.0, 0.0], [0.0, -1.0]]),
        q=np.array([1.0, 1.0]),
        T=np.zeros((2, 1)),
        Theta=np.array([[1.0], [-1.0]]),
        zeta=np.array([-1.0, -1.0]),
    )
    rep = psd_solve(skew, compute_lin_hull(skew))
    print(f"status: {rep.status.value} (fall back to bnb_solve instead)")


if __name__ == "__main__":
    main()
