"""Exporting the search problem for an off-the-shelf MILP solver.

The internal search never forms big-M constraints: branching fixes
indicator variables and the node LPs carry exact equalities.  For
interoperability the same feasibility problem can be written out as a
single mixed-integer model in LP or MPS text, with the indicator logic
linearized through a constant b:

    r_i <= b x_i                 a row can only be positive on the support
    M_i r + b x_i <= b - q_i     on the support the slack closes at u = 0
    ...                          and along every hull direction

The translation is faithful only while b actually bounds the policy
values, which is why the export embeds a warning comment and the
constant is a parameter.
"""

import numpy as np

from aarlcp import (
    Instance,
    bnb_solve,
    build_milp,
    compute_lin_hull,
    default_big_m,
    export_milp,
    parse_lp_text,
)


def one_row_instance():
    # unique policy: support {1}, r = 2, D = -1/2
    return Instance(
        M=np.array([[2.0]]),
        q=np.array([-4.0]),
        T=np.array([[1.0]]),
        Theta=np.array([[1.0], [-1.0]]),
        zeta=np.array([-1.0, -1.0]),
    )


def main():
    inst = one_row_instance()
    basis = compute_lin_hull(inst)

    print("== what the search says ==")
    rep = bnb_solve(inst, basis)
    print(f"status: {rep.status.value}, r = {rep.policy.r}")

    print()
    print("== LP text ==")
    model = build_milp(inst, basis)
    print(f"suggested constant: b = {default_big_m(inst):g}")
    text = export_milp(model, "lp")
    print(text)

    print("== MPS text (first rows) ==")
    mps = export_milp(model, "mps")
    print("\n".join(mps.splitlines()[:14]))
    print("...")

    print()
    print("== round trip ==")
    parsed = parse_lp_text(text)
    print(f"rows parsed back: {len(parsed.rows)}")
    print(f"binaries: {parsed.binaries}")

    print()
    print("== the caveat is real ==")
    # The only feasible policy needs r1 = 2.  With b = 0.1 the support row
    # r1 <= b x1 caps r1 at 0.1, so the exported model turns infeasible
    # even though the instance is not.  Never undersize b.
    small = export_milp(build_milp(inst, basis, big_m=0.1), "lp")
    for line in small.splitlines():
        if "sl1" in line or "ncl1" in line:
            print(line)
    print("(these two rows already contradict each other for either x1)")


if __name__ == "__main__":
    main()
