"""Command line surface: width oracles, refinement, verification, corpus.

Exit codes: 0 success / property holds, 1 property fails (witness in the
report), 2 malformed input or a size cap was exceeded.  Output files are
canonical JSON (sorted keys), so identical runs produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .instances import (
    Graph,
    GraphTreeDecomposition,
    Matroid,
    MatroidTreeDecomposition,
    decomposition_from_dict,
)
from .oracles import (
    brute_force_branchwidth,
    brute_force_matroid_treewidth,
    brute_force_pathwidth,
    brute_force_treewidth,
    verify_lean_td,
    verify_linked_td,
    verify_matroid_lean,
    verify_theta_lean,
)
from .pipeline import refine_graph, refine_matroid


class InputError(Exception):
    pass


def _load_instance(path: str):
    """A .json file holds a matroid; anything else is graph text."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    if path.endswith(".json"):
        try:
            return Matroid.from_json(text)
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise InputError(f"bad matroid file {path}: {exc}")
    try:
        return Graph.from_text(text)
    except ValueError as exc:
        raise InputError(f"bad graph file {path}: {exc}")


def _load_decomposition(path: str):
    try:
        return decomposition_from_dict(json.loads(Path(path).read_text()))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"bad decomposition file {path}: {exc}")


def _dump_json(data, path: str | None):
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_width(args) -> int:
    inst = _load_instance(args.input)
    params = args.param or (["mtw"] if isinstance(inst, Matroid) else ["tw"])
    for p in params:
        if p == "tw":
            if not isinstance(inst, Graph):
                raise InputError("tw needs a graph input")
            print(f"tw {brute_force_treewidth(inst)}")
        elif p == "pw":
            if not isinstance(inst, Graph):
                raise InputError("pw needs a graph input")
            print(f"pw {brute_force_pathwidth(inst)}")
        elif p == "bw":
            if not isinstance(inst, Graph):
                raise InputError("bw needs a graph input")
            print(f"bw {brute_force_branchwidth(inst)}")
        elif p == "mtw":
            m = inst if isinstance(inst, Matroid) else Matroid.graphic(inst)
            print(f"mtw {brute_force_matroid_treewidth(m)}")
    return 0


def cmd_refine(args) -> int:
    inst = _load_instance(args.input)
    start = _load_decomposition(args.decomposition) if args.decomposition else None
    if isinstance(inst, Matroid):
        if args.family not in (None, "matroid-fk"):
            raise InputError("matroid inputs refine over matroid-fk")
        if start is not None and not isinstance(start, MatroidTreeDecomposition):
            raise InputError("matroid input needs a matroid decomposition")
        res = refine_matroid(inst, args.mode, k=args.k, start=start,
                             with_trace=args.trace is not None)
        width = res.width
    else:
        if start is not None and not isinstance(start, GraphTreeDecomposition):
            raise InputError("graph input needs a graph decomposition")
        res = refine_graph(inst, args.mode, family_kind=args.family or "fk",
                           k=args.k, theta=args.theta, start=start,
                           with_trace=args.trace is not None)
        width = res.width
    if not res.verified:
        report = [r.to_dict() for r in res.reports if not r.passed]
        _dump_json({"pass": False, "reports": report}, None)
        return 1
    _dump_json(res.decomposition.to_dict(), args.out)
    if args.trace is not None:
        lines = [json.dumps(rec, sort_keys=True) for rec in res.trace]
        Path(args.trace).write_text("\n".join(lines) + ("\n" if lines else ""))
    summary = {"width": width, "iterations": res.iterations,
               "k": res.family.k, "family": res.family.kind}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    inst = _load_instance(args.input)
    d = _load_decomposition(args.decomposition)
    prop = args.property
    if prop == "matroid-lean":
        if not isinstance(inst, Matroid) or \
                not isinstance(d, MatroidTreeDecomposition):
            raise InputError("matroid-lean needs a matroid and its decomposition")
        rep = verify_matroid_lean(inst, d)
    else:
        if not isinstance(inst, Graph) or \
                not isinstance(d, GraphTreeDecomposition):
            raise InputError(f"{prop} needs a graph and a graph decomposition")
        if prop == "valid":
            rep = d.validate(inst)
        elif prop == "linked":
            rep = verify_linked_td(inst, d)
        elif prop == "lean":
            rep = verify_lean_td(inst, d)
        elif prop == "theta-lean":
            if args.theta is None:
                raise InputError("theta-lean needs --theta")
            rep = verify_theta_lean(inst, d, args.theta)
        else:
            raise InputError(f"unknown property {prop}")
    _dump_json(rep.to_dict(), None)
    return 0 if rep.passed else 1


def cmd_corpus(args) -> int:
    from .corpus import run_all

    criteria = None
    if args.criteria:
        criteria = [int(x) for x in args.criteria.split(",")]
    reports = run_all(max_n=args.max_n, seed=args.seed, jobs=args.jobs,
                      criteria=criteria)
    for rep in reports:
        print(rep.line())
    if args.out:
        _dump_json([rep.to_dict() for rep in reports], args.out)
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="septree",
        description="Linked and lean tree-decompositions of graphs and matroids.")
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("width", help="exact widths by exhaustive search")
    w.add_argument("input")
    w.add_argument("--param", action="append",
                   choices=["tw", "pw", "bw", "mtw"])
    w.set_defaults(fn=cmd_width)

    r = sub.add_parser("refine", help="refine a decomposition")
    r.add_argument("input")
    r.add_argument("--decomposition", help="starting decomposition JSON")
    r.add_argument("--mode", required=True,
                   choices=["linked", "lean", "combined"])
    r.add_argument("--family",
                   choices=["fk", "pk", "tk", "ftheta", "matroid-fk"])
    r.add_argument("--k", type=int)
    r.add_argument("--theta", type=int)
    r.add_argument("--out", help="output decomposition path (default stdout)")
    r.add_argument("--trace", help="write per-iteration JSON records here")
    r.set_defaults(fn=cmd_refine)

    v = sub.add_parser("verify", help="verify a decomposition property")
    v.add_argument("input")
    v.add_argument("decomposition")
    v.add_argument("--property", required=True,
                   choices=["valid", "linked", "lean", "theta-lean",
                            "matroid-lean"])
    v.add_argument("--theta", type=int)
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("corpus", help="run the acceptance criteria")
    c.add_argument("--max-n", type=int, default=7)
    c.add_argument("--seed", type=int, default=2024)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--criteria", help="comma separated criterion numbers")
    c.add_argument("--out", help="write the reports as JSON here")
    c.set_defaults(fn=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
