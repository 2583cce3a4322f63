"""A first tour: one uncertain complementarity problem, start to finish.

The instance is deliberately tiny (two decisions, two uncertain
coordinates) but it already shows the core phenomenon: no constant
decision works, yet a rule that is allowed to lean on the uncertainty
solves the problem exactly.

We ask for z(u) = D u + r with

    0 <= z(u)  perp  M z(u) + q + T u >= 0   for every u in the set,

where the set is the segment-shaped polyhedron {u : Theta u >= zeta}.
"""

import numpy as np

from aarlcp import (
    Instance,
    Policy,
    bnb_solve,
    compute_lin_hull,
    validate,
    verify_policy,
)


def build_instance():
    # M is singular on purpose: both rows read z1 - z2
    return Instance(
        M=np.array([[1.0, -1.0], [1.0, -1.0]]),
        q=np.array([-1.0, -1.0]),
        T=np.eye(2),
        Theta=np.array([[1.0, -1.0], [-1.0, 1.0], [1.0, 0.0], [-1.0, 0.0]]),
        zeta=np.array([0.0, 0.0, -2.0, -2.0]),
    )


def main():
    inst = build_instance()

    print("== validation ==")
    report = validate(inst)
    print(f"set compact: {report.compact}")
    print(f"origin in relative interior: {report.zero_in_relint}")

    print()
    print("== the hull of the set ==")
    # The set here is the segment u1 = u2, |u1| <= 2.  Its affine hull is a
    # line, so decision rules only ever get probed along one direction.
    basis = compute_lin_hull(inst)
    print(f"hull dimension: {basis.dimension}")
    for v in basis.vectors:
        print(f"direction: {v}")

    print()
    print("== a constant rule fails ==")
    frozen = Policy(D=np.zeros((2, 2)), r=np.array([2.0, 1.0]), x=np.array([1, 1]))
    check = verify_policy(inst, basis, frozen)
    print(f"verdict: {check.verdict}")
    for line in check.violations:
        print(f"  {line}")

    print()
    print("== an affine rule succeeds ==")
    rule = Policy(
        D=np.array([[-1.0, 0.0], [0.0, 0.0]]),
        r=np.array([2.0, 1.0]),
        x=np.array([1, 1]),
    )
    check = verify_policy(inst, basis, rule)
    print(f"verdict: {check.verdict}")
    print(f"support rows (0-based): {sorted(check.support)}")
    print(f"nominal residual:   {check.nominal_residual:.2e}")
    print(f"direction residual: {check.direction_residual:.2e}")

    print()
    print("== the search finds one on its own ==")
    result = bnb_solve(inst, basis)
    print(f"status: {result.status.value}")
    print(f"nodes explored: {result.nodes_explored}")
    print(f"D =\n{result.policy.D}")
    print(f"r = {result.policy.r}")
    print(f"verified: {result.verification.verified}")


if __name__ == "__main__":
    main()
