"""Command-line entry point.

Exit status: 0 success, 1 verification failure, 2 usage or input error,
3 a resource cap was exceeded. Reports go to stdout as one document;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .errors import ContractViolation, GraphFormatError, InvalidArgument, ResourceLimit
from .graphcore import Graph, d_invariant, parse_forest, parse_graph, spanning_forest
from .ideals import (
    DEFAULT_PATH_CAP,
    ENUMERATION_LIMIT,
    build_matrix,
    ideal_height,
    initial_ideal_of_minors,
    minor_generators,
    path_determinant_rhs,
)
from .oracle import DEFAULT_PAIR_CAP
from .polycore import DEFAULT_PRIME
from .resolution import (
    betti_formula,
    betti_table,
    characteristic_numbers,
    hf_from_betti,
    hilbert_series,
    jozefiak_complex,
    prune,
    pruned_resolution,
    specialize,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

VERIFY_CHOICES = ("gb", "exactness", "bijection", "hilbert", "pathdet", "all")


class Failure(Exception):
    """Verification failed; carries the report to print."""

    def __init__(self, report: dict):
        self.report = report
        super().__init__("verification failed")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True, help="graph file (edge list or JSON)")
    common.add_argument("--forest", help="explicit spanning forest (edge list or JSON)")
    common.add_argument("--out", choices=("json", "tsv", "text"), default="json")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dmax", type=int, default=None, help="largest degree for Hilbert function output (default 2n)")
    common.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP)
    common.add_argument("--pair-cap", type=int, default=DEFAULT_PAIR_CAP)
    common.add_argument("--subset-cap", type=int, default=ENUMERATION_LIMIT,
                        help="largest variable count for exhaustive square-free enumeration")

    parser = argparse.ArgumentParser(prog="sparseminors", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", parents=[common], help="graded Betti numbers of R/I_{n-1}(X_G)")
    p.add_argument("--method", choices=("prune", "formula", "both"), default="prune")
    p = sub.add_parser("init-ideal", parents=[common], help="initial ideal of the minors under <_{T,G}")
    p.add_argument("--generic", action="store_true", help="use the minors of X instead of X_G")
    p = sub.add_parser("resolution", parents=[common], help="matrices of the resolution")
    p.add_argument("--stage", choices=("generic", "specialized", "pruned"), default="pruned")
    sub.add_parser("degree", parents=[common], help="codimension and degree of V(I_{n-1}(X_G))")
    sub.add_parser("height", parents=[common], help="height of I_{n-1}(X_G) via its initial ideal")
    sub.add_parser("char-numbers", parents=[common], help="characteristic numbers of smooth G-sparse quadrics")
    sub.add_parser("hilbert", parents=[common], help="Hilbert series and function of R_G/I_{n-1}(X_G)")
    p = sub.add_parser("path-det", parents=[common], help="cofactor (k,l) and its path expansion")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("check", choices=VERIFY_CHOICES)
    return parser


def _load(args) -> tuple[Graph, object]:
    try:
        text = Path(args.graph).read_text()
    except OSError as exc:
        raise InvalidArgument(f"cannot read {args.graph}: {exc.strerror}") from None
    g = parse_graph(text)
    t = spanning_forest(g)
    if args.forest:
        try:
            ftext = Path(args.forest).read_text()
        except OSError as exc:
            raise InvalidArgument(f"cannot read {args.forest}: {exc.strerror}") from None
        t = parse_forest(ftext, g)
    return g, t


def cmd_betti(args, g, t) -> dict:
    if args.method in ("prune", "both"):
        pruned = betti_table(pruned_resolution(g))
    if args.method in ("formula", "both"):
        formula = betti_formula(g.n, d_invariant(g)).betti
    if args.method == "both" and pruned != formula:
        raise Failure({"prune": pruned.to_json(), "formula": formula.to_json()})
    table = pruned if args.method != "formula" else formula
    args._betti = table
    return table.to_json()


def cmd_init_ideal(args, g, t) -> list:
    return initial_ideal_of_minors(g, t, generic=args.generic).to_json()


def cmd_resolution(args, g, t) -> dict:
    c = jozefiak_complex(g.n)
    if args.stage != "generic":
        c = specialize(c, zero=g)
    if args.stage == "pruned":
        c = prune(c)
    return c.to_json()


def _series(g: Graph):
    table = betti_table(pruned_resolution(g))
    expected = 3 if g.is_connected() else 2
    return table, hilbert_series(table, g.num_variables, expected_codim=expected)


def cmd_degree(args, g, t) -> dict:
    hs = _series(g)[1]
    return {"codim": hs.codim, "degree": hs.degree}


def cmd_height(args, g, t) -> dict:
    h = ideal_height(initial_ideal_of_minors(g, t))
    return {"height": h, "formula": betti_formula(g.n, d_invariant(g)).height}


def cmd_char_numbers(args, g, t) -> dict:
    first, second = characteristic_numbers(g.n, d_invariant(g), g.is_connected())
    return {"first": first, "second": second}


def cmd_hilbert(args, g, t) -> dict:
    table, hs = _series(g)
    dmax = 2 * g.n if args.dmax is None else args.dmax
    out = hs.to_json()
    out["hf"] = [hf_from_betti(table, g.num_variables, d) for d in range(dmax + 1)]
    return out


def cmd_path_det(args, g, t) -> dict:
    k, l = args.k, args.l
    if not (1 <= k < l <= g.n):
        raise InvalidArgument(f"need 1 <= k < l <= {g.n}")
    cof = {(a, b): p for a, b, p in minor_generators(build_matrix(g))}[(k, l)]
    rhs = path_determinant_rhs(g, k, l, args.path_cap)
    if cof != rhs:
        raise Failure({"pair": [k, l], "cofactor": cof.to_json(), "path_expansion": rhs.to_json()})
    return {"pair": [k, l], "cofactor": cof.to_json(), "equal": True}


def cmd_verify(args, g, t) -> dict:
    kw = dict(prime=args.prime, trials=args.trials, seed=args.seed, dmax=args.dmax,
              pair_cap=args.pair_cap, path_cap=args.path_cap, subset_cap=args.subset_cap)
    runners = {
        "gb": lambda: [checks.check_gb(g, t, args.pair_cap)],
        "exactness": lambda: [checks.check_exactness(g, args.prime, args.trials, args.seed)],
        "bijection": lambda: [checks.check_bijection(g, t, args.subset_cap)],
        "hilbert": lambda: [checks.check_hilbert(g, t, args.dmax)],
        "pathdet": lambda: [checks.check_pathdet(g, args.path_cap)],
        "all": lambda: checks.run_all(g, t, **kw),
    }
    results = runners[args.check]()
    report = {"checks": [r.to_json() for r in results], "ok": all(r.ok for r in results)}
    if not report["ok"]:
        raise Failure(report)
    return report


COMMANDS = {
    "betti": cmd_betti,
    "init-ideal": cmd_init_ideal,
    "resolution": cmd_resolution,
    "degree": cmd_degree,
    "height": cmd_height,
    "char-numbers": cmd_char_numbers,
    "hilbert": cmd_hilbert,
    "path-det": cmd_path_det,
    "verify": cmd_verify,
}


def _flatten(prefix: str, value, out: list[tuple[str, str]]):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i}" if prefix else str(i), v, out)
    else:
        out.append((prefix, json.dumps(value, sort_keys=True) if isinstance(value, list) else str(value)))


def render(report, fmt: str, args) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True) + "\n"
    if fmt == "tsv" and getattr(args, "_betti", None) is not None:
        return args._betti.to_tsv()
    pairs: list[tuple[str, str]] = []
    _flatten("", report, pairs)
    sep = "\t" if fmt == "tsv" else ": "
    return "".join(f"{k}{sep}{v}\n" for k, v in pairs)


def dispatch(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._betti = None
    try:
        g, t = _load(args)
        report = COMMANDS[args.command](args, g, t)
    except GraphFormatError as exc:
        print(f"{args.graph}: {exc}", file=stderr)
        return EXIT_USAGE
    except InvalidArgument as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    except ContractViolation as exc:
        print(f"verification failed: {exc}", file=stderr)
        return EXIT_FAIL
    except Failure as exc:
        print(json.dumps(exc.report, sort_keys=True), file=stderr)
        return EXIT_FAIL
    stdout.write(render(report, args.out, args))
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
