"""Command-line interface: ``loctree <subcommand> ...``.

Every subcommand prints one JSON envelope on stdout::

    {"command": ..., "status": ..., "result": {...}, "stats": {...}}

with ``status`` one of ``ok``, ``not-locating``, ``unknown`` or ``error``.
Timing lives only in ``stats``.  CSV/DOT outputs replace the envelope when
requested with ``--format``.

Exit codes: 0 ok, 2 verification negative, 3 unknown (budget), 4 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bounds as bnd
from .coloring import (
    ColoringError,
    color_codes,
    coloring_from_json,
    coloring_to_dict,
    coloring_to_dot,
    is_locating,
)
from .construct import ConstructionError, construct_coloring
from .solver import Budget, chi_L_exact
from .tree import TreeError, build_tree

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_UNKNOWN = 3
EXIT_INPUT = 4

_EXIT_FOR = {"ok": EXIT_OK, "not-locating": EXIT_NEGATIVE, "unknown": EXIT_UNKNOWN, "error": EXIT_INPUT}


class InputError(Exception):
    pass


def _emit(command: str, status: str, result: dict, stats: dict | None = None) -> int:
    envelope = {"command": command, "status": status, "result": result, "stats": stats or {}}
    sys.stdout.write(json.dumps(envelope, sort_keys=True) + "\n")
    scalars = ", ".join(
        f"{key}={val}" for key, val in sorted(result.items())
        if isinstance(val, (int, str, bool)) or val is None
    )
    sys.stderr.write(f"{command}: {status} ({scalars})\n")
    return _EXIT_FOR[status]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _budget(args) -> Budget:
    env = Budget.from_env()
    return Budget(
        args.max_nodes if args.max_nodes is not None else env.max_nodes,
        args.max_seconds if args.max_seconds is not None else env.max_seconds,
    )


def cmd_tree(args) -> int:
    tree = build_tree(args.n, args.k)
    if args.format == "dot":
        _write(args.output, tree.to_dot(levels=args.levels))
        return EXIT_OK
    return _emit(
        "tree",
        "ok",
        {"n": tree.n, "k": tree.k, "vertex_count": tree.vertex_count,
         "level_offsets": list(tree.level_offsets)},
    )


def cmd_verify(args) -> int:
    try:
        text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    tree, coloring = coloring_from_json(text)
    if (args.n is not None and args.n != tree.n) or (args.k is not None and args.k != tree.k):
        raise InputError(f"file describes T({tree.n},{tree.k}), not T({args.n},{args.k})")
    if args.format == "dot":
        _write(args.output, coloring_to_dot(tree, coloring))
    verdict = is_locating(tree, coloring)
    result = {"n": tree.n, "k": tree.k, "m": coloring.m, "verdict": verdict.status}
    if verdict.witness is not None:
        u, w = verdict.witness
        result["witness"] = [u, w]
        if verdict.status == "not-locating":
            codes = color_codes(tree, coloring)
            result["codes"] = [codes[u].tolist(), codes[w].tolist()]
        else:
            result["colors"] = [coloring[u], coloring[w]]
    return _emit("verify", "ok" if verdict else "not-locating", result)


def cmd_solve(args) -> int:
    tree = build_tree(args.n, args.k)
    res = chi_L_exact(tree, _budget(args), symmetry=not args.no_symmetry, workers=args.workers)
    if res.witness is not None and args.output:
        Path(args.output).write_text(json.dumps(coloring_to_dict(tree, res.witness)) + "\n")
    result = res.to_dict()
    if res.witness is not None:
        result["witness"] = coloring_to_dict(tree, res.witness)
    return _emit("solve", res.status, result, res.stats)


def cmd_construct(args) -> int:
    t0 = time.monotonic()
    coloring, spec, trace = construct_coloring(args.n, args.k, args.t)
    tree = build_tree(args.n, args.k)
    # always re-verify what is written out, independent of the trace
    verdict = is_locating(tree, coloring)
    doc = coloring_to_dict(tree, coloring)
    if args.output:
        Path(args.output).write_text(json.dumps(doc) + "\n")
    if args.trace:
        Path(args.trace).write_text(trace.to_json() + "\n")
    ok = trace.ok and bool(verdict)
    result = {
        "n": args.n, "k": args.k, "t": args.t, "i": trace.i, "a": trace.a,
        "m": coloring.m, "palettes": trace.palettes, "spec": spec.to_dict(),
        "verdict": verdict.status,
        "witness": None if verdict.witness is None else list(verdict.witness),
        "failure": trace.failure,
    }
    return _emit("construct", "ok" if ok else "not-locating", result,
                 {"seconds": time.monotonic() - t0})


def cmd_bounds(args) -> int:
    if args.format == "csv":
        _write(args.output, bnd.bounds_grid_csv([args.n], [args.k]))
        return EXIT_OK
    return _emit("bounds", "ok", bnd.recursive_upper_bound(args.n, args.k).to_dict())


def cmd_certify(args) -> int:
    if args.k < 4:
        raise InputError("certify needs k >= 4; k <= 3 values are known exactly")
    rep = bnd.tightness_certificate(args.n, args.k)
    result = rep.to_dict()
    # exact integers in full; JSON ints are arbitrary precision but many
    # consumers are not, so strings ride along
    for key in ("palm_count", "type_count", "code_bound"):
        result[key + "_str"] = str(result[key])
    return _emit("certify", "ok", result)


def cmd_threshold(args) -> int:
    found = bnd.find_threshold(args.k, args.n_max)
    return _emit("threshold", "ok", {"k": args.k, "n_max": args.n_max, "threshold": found,
                                     "kind": "sufficient (upper bound on the true threshold)"})


def cmd_table(args) -> int:
    rows = []
    worst = "ok"
    for n in range(2, args.max_n + 1):
        for k in range(1, args.max_k + 1):
            tree = build_tree(n, k)
            res = chi_L_exact(tree, _budget(args), workers=args.workers)
            expected = bnd.published_bound(n, k)
            rows.append({
                "n": n, "k": k, "chi_L": res.chi_L, "lower": res.lower, "upper": res.upper,
                "status": res.status, "published": expected,
                "published_exact": k <= 3,
            })
            if res.status == "unknown":
                worst = "unknown"
    if args.format == "csv":
        lines = ["n,k,chi_L,lower,upper,status,published,published_exact"]
        for r in rows:
            chi = "" if r["chi_L"] is None else r["chi_L"]
            lines.append(f"{r['n']},{r['k']},{chi},{r['lower']},{r['upper']},{r['status']},"
                         f"{r['published']},{str(r['published_exact']).lower()}")
        _write(args.output, "\n".join(lines) + "\n")
        return _EXIT_FOR[worst]
    return _emit("table", worst, {"rows": rows})


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as "not locating"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loctree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def budget_opts(p):
        p.add_argument("--max-nodes", type=int, default=None,
                       help="search node budget (env LOCTREE_MAX_NODES)")
        p.add_argument("--max-seconds", type=float, default=None,
                       help="search time budget (env LOCTREE_MAX_SECONDS)")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("tree", help="describe or export T(n,k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--levels", action="store_true", help="annotate levels in DOT output")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("verify", help="check a coloring file for the locating property")
    p.add_argument("input", help="Coloring JSON file, or - for stdin")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("-o", "--output", help="where DOT output goes")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact locating-chromatic number by search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("-o", "--output", help="write the witness Coloring JSON here")
    budget_opts(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("construct", help="recursive constructive coloring")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-o", "--output", help="Coloring JSON path")
    p.add_argument("--trace", help="ConstructionTrace JSON path")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bounds", help="recursive and published upper bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", help="pigeonhole tightness certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("threshold", help="smallest n from which the certificate holds")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("table", help="exact values over a small (n, k) grid")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("-o", "--output")
    budget_opts(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ColoringError, TreeError, ConstructionError, ValueError) as exc:
        return _emit(args.command, "error", {"error": type(exc).__name__, "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
