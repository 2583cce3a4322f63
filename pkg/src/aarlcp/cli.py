"""Command line front end.

Subcommands map one-to-one onto the library surface: validate, solve,
verify, oracle, linhull, export.  Exit codes are uniform across commands:

* 0: set is usable / policy found / policy verified
* 1: honest negative answer (infeasible, violations, bad set)
* 2: input or usage errors
* 3: numerical failure or an exhausted node budget

Instances travel as JSON with explicit dimensions and dense row-major
matrices; policies travel as JSON with exact float round-trip (the writer
uses the shortest representation that parses back to the same double).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import EPS_ZERO, Instance, MixedExtension, Policy, validate
from .errors import AarlcpError, NodeLimitExceeded, NumericalFailure
from .linhull import compute_lin_hull
from .milp import (
    SolveOptions,
    SolveStatus,
    bnb_solve,
    build_milp,
    export_milp,
)
from .mixed import mixed_solve, verify_mixed
from .psd import PsdStatus, check_psd, psd_solve
from .verify import oracle_enumerate, verify_policy


def _reject_constant(token: str):
    raise ValueError(f"non-finite number {token} in input")


def _load_json(path: str):
    with open(path) as handle:
        return json.load(handle, parse_constant=_reject_constant)


def read_instance(path: str) -> Instance:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ValueError("instance file must hold a JSON object")
    for key in ("n", "k", "g", "M", "T", "Theta", "q", "zeta"):
        if key not in data:
            raise ValueError(f"instance file lacks key {key!r}")
    n, k, g = int(data["n"]), int(data["k"]), int(data["g"])
    h = int(data.get("h", 0))

    def arr(key, shape):
        a = np.asarray(data[key], dtype=float)
        if a.shape != shape:
            raise ValueError(
                f"{key} has shape {a.shape}, expected {shape} from the declared sizes"
            )
        return a

    mixed = None
    if data.get("mixed") is not None:
        mblock = data["mixed"]
        if not isinstance(mblock, dict):
            raise ValueError("mixed block must be a JSON object")
        for key in ("m", "V", "W", "N", "p", "P"):
            if key not in mblock:
                raise ValueError(f"mixed block lacks key {key!r}")
        m = int(mblock["m"])

        def marr(key, shape):
            a = np.asarray(mblock[key], dtype=float)
            if a.shape != shape:
                raise ValueError(
                    f"mixed {key} has shape {a.shape}, expected {shape}"
                )
            return a

        mixed = MixedExtension(
            V=marr("V", (m, n)),
            W=marr("W", (m, m)),
            N=marr("N", (n, m)),
            p=marr("p", (m,)),
            P=marr("P", (m, k)),
            y_adjustable=bool(mblock.get("y_adjustable", True)),
        )

    return Instance(
        M=arr("M", (n, n)),
        q=arr("q", (n,)),
        T=arr("T", (n, k)),
        Theta=arr("Theta", (g, k)),
        zeta=arr("zeta", (g,)),
        h=h,
        mixed=mixed,
    )


def _policy_payload(status: str, policy, nodes: int, lp_calls: int, tolerances) -> dict:
    payload: dict = {"status": status}
    if policy is not None:
        payload["x"] = [int(v) for v in policy.x]
        payload["r"] = [float(v) for v in policy.r]
        payload["D"] = [[float(v) for v in row] for row in policy.D]
        if getattr(policy, "E", None) is not None:
            payload["E"] = [[float(v) for v in row] for row in policy.E]
            payload["s"] = [float(v) for v in policy.s]
    payload["diagnostics"] = {
        "nodes_explored": int(nodes),
        "lp_calls": int(lp_calls),
        "tolerances": {kk: float(vv) for kk, vv in dict(tolerances).items()},
    }
    return payload


def write_policy_file(path: str, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def read_policy(path: str) -> Policy:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ValueError("policy file must hold a JSON object")
    status = data.get("status", "feasible")
    if status != "feasible":
        raise ValueError(f"policy file records status {status!r}, nothing to verify")
    for key in ("D", "r", "x"):
        if key not in data:
            raise ValueError(f"policy file lacks key {key!r}")
    E = np.asarray(data["E"], dtype=float) if "E" in data else None
    s = np.asarray(data["s"], dtype=float) if "s" in data else None
    return Policy(
        D=np.asarray(data["D"], dtype=float),
        r=np.asarray(data["r"], dtype=float),
        x=np.asarray(data["x"], dtype=float),
        E=E,
        s=s,
    )


def _support_str(x) -> str:
    members = [str(i + 1) for i, v in enumerate(x) if int(v) == 1]
    return " ".join(members) if members else "(empty)"


def _vec_str(v) -> str:
    return " ".join(f"{float(t):g}" for t in v)


def cmd_validate(args) -> int:
    inst = read_instance(args.instance)
    report = validate(inst, args.tol)
    print(f"compact: {'yes' if report.compact else 'no'}")
    print(f"zero in relative interior: {'yes' if report.zero_in_relint else 'no'}")
    eq = sorted(report.implicit_equality_rows)
    print(
        "implicit equality rows: "
        + (" ".join(str(j + 1) for j in eq) if eq else "none")
    )
    for w in report.warnings:
        print(f"warning: {w}")
    print(f"status: {'ok' if report.ok else 'bad set'}")
    return 0 if report.ok else 1


def cmd_linhull(args) -> int:
    inst = read_instance(args.instance)
    basis = compute_lin_hull(inst, args.tol)
    eq = sorted(basis.inequality_rows.symmetric_difference(range(inst.g)))
    print(
        "implicit equality rows: "
        + (" ".join(str(j + 1) for j in eq) if eq else "none")
    )
    print(f"hull dimension: {basis.dimension}")
    for t, v in enumerate(basis.vectors):
        print(f"v{t + 1}: {_vec_str(v)}")
    return 0


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    vreport = validate(inst, args.tol)
    if not vreport.ok:
        raise ValueError(
            "the uncertainty set fails validation; run the validate command"
        )
    basis = compute_lin_hull(inst, args.tol)

    use_psd = False
    if args.psd == "force":
        if inst.mixed is not None:
            raise ValueError("the PSD shortcut covers pure instances only")
        if not check_psd(inst.M):
            raise ValueError("matrix is not positive semidefinite")
        use_psd = True
    elif args.psd == "auto":
        use_psd = inst.mixed is None and check_psd(inst.M)

    if use_psd:
        report = psd_solve(inst, basis, tol=args.tol)
        if report.status is PsdStatus.NOT_PSD:
            raise ValueError("matrix is not positive semidefinite")
        feasible = report.status is PsdStatus.FEASIBLE
        policy = report.policy
        nodes, lp_calls = 1, report.lp_calls
        tolerances = {"tol": args.tol, "eps_zero": EPS_ZERO}
        print("path: forced support")
        if report.nominal is not None:
            print(f"nominal solution: {_vec_str(report.nominal)}")
            print(
                "positive-capable rows: "
                + (
                    " ".join(str(i + 1) for i in sorted(report.support_p))
                    or "(none)"
                )
            )
    else:
        opts = SolveOptions(
            tol=args.tol,
            node_limit=args.node_limit,
            parallel=args.parallel,
            branching=args.branching,
        )
        solver = mixed_solve if inst.mixed is not None else bnb_solve
        report = solver(inst, basis, opts)
        feasible = report.status is SolveStatus.FEASIBLE
        policy = report.policy
        nodes, lp_calls = report.nodes_explored, report.lp_calls
        tolerances = report.tolerances
        print("path: tree search")

    status = "feasible" if feasible else "infeasible"
    print(f"status: {status}")
    print(f"nodes explored: {nodes}")
    print(f"lp calls: {lp_calls}")
    if feasible:
        print(f"support: {_support_str(policy.x)}")
        print(f"r: {_vec_str(policy.r)}")
    if args.out:
        payload = _policy_payload(status, policy if feasible else None, nodes, lp_calls, tolerances)
        write_policy_file(args.out, payload)
        print(f"policy written to {args.out}")
    return 0 if feasible else 1


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    pol = read_policy(args.policy)
    basis = compute_lin_hull(inst, args.tol)
    if inst.mixed is not None:
        report = verify_mixed(inst, basis, pol)
    else:
        report = verify_policy(inst, basis, pol)
    print(f"verdict: {report.verdict}")
    print(
        "support: "
        + (" ".join(str(i + 1) for i in sorted(report.support)) or "(empty)")
    )
    print(f"nominal residual: {report.nominal_residual:g}")
    print(f"direction residual: {report.direction_residual:g}")
    if report.equality_residual is not None:
        print(f"equation residual: {report.equality_residual:g}")
        print(f"equation direction residual: {report.equality_direction_residual:g}")
    print(f"min z over set: {_vec_str(report.min_z)}")
    print(f"min w over set: {_vec_str(report.min_w)}")
    for v in report.violations:
        print(f"violation: {v}")
    return 0 if report.verified else 1


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    basis = compute_lin_hull(inst, args.tol)
    report = oracle_enumerate(inst, basis, tol=args.tol, limit=args.limit)
    feasible = report.status is SolveStatus.FEASIBLE
    print(f"status: {'feasible' if feasible else 'infeasible'}")
    tally = report.tally or {}
    print(f"supports tested: {tally.get('tested', report.nodes_explored)}")
    print(f"equality-stage prunes: {tally.get('equality_infeasible', 0)}")
    print(f"nonnegativity-stage prunes: {tally.get('nonnegativity_infeasible', 0)}")
    if feasible:
        print(f"support: {_support_str(report.policy.x)}")
        print(f"verification: {report.verification.verdict}")
    if args.out:
        payload = _policy_payload(
            "feasible" if feasible else "infeasible",
            report.policy if feasible else None,
            report.nodes_explored,
            report.lp_calls,
            report.tolerances,
        )
        write_policy_file(args.out, payload)
        print(f"policy written to {args.out}")
    return 0 if feasible else 1


def cmd_export(args) -> int:
    inst = read_instance(args.instance)
    basis = compute_lin_hull(inst, args.tol)
    model = build_milp(inst, basis, args.big_m)
    text = export_milp(model, args.format)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
        print(
            f"wrote {args.format} model to {args.out}"
            f" (rows {len(model.rows)}, binaries {len(model.binaries)},"
            f" b {model.big_m:g})"
        )
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aarlcp",
        description=(
            "Affine decision rules for linear complementarity under"
            " polyhedral uncertainty"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("instance", help="instance JSON file")
        p.add_argument(
            "--tol",
            type=float,
            default=1e-8,
            help="feasibility tolerance (default 1e-8)",
        )

    p = sub.add_parser("validate", help="check the uncertainty set assumptions")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("linhull", help="print the hull basis of the set")
    common(p)
    p.set_defaults(func=cmd_linhull)

    p = sub.add_parser("solve", help="search for an affine policy")
    common(p)
    p.add_argument(
        "--psd",
        choices=("auto", "force", "off"),
        default="auto",
        help="use the forced-support shortcut when the matrix allows it",
    )
    p.add_argument(
        "--node-limit",
        type=int,
        default=None,
        help="node budget (default: 2^min(n+1, 21), enough to exhaust the tree)",
    )
    p.add_argument(
        "--branching",
        choices=("heuristic", "index"),
        default="heuristic",
        help="branch variable selection",
    )
    p.add_argument("--parallel", action="store_true", help="split the root in two threads")
    p.add_argument("--out", help="write the policy as JSON to this path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="certify a policy file against an instance")
    common(p)
    p.add_argument("policy", help="policy JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive support enumeration (small n)")
    common(p)
    p.add_argument(
        "--limit",
        type=int,
        default=16,
        help="refuse instances with more rows than this (default 16)",
    )
    p.add_argument("--out", help="write the policy as JSON to this path")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export", help="write the big-M model as LP or MPS text")
    common(p)
    p.add_argument("--format", choices=("lp", "mps"), default="lp")
    p.add_argument(
        "--big-m",
        type=float,
        default=None,
        dest="big_m",
        help="big-M constant (default: scaled from the instance data)",
    )
    p.add_argument("--out", help="write the model text to this path")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (NumericalFailure, NodeLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (AarlcpError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
