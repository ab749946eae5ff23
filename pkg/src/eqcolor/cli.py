"""Command-line surface.

Subcommands: gen (random instance), solve (construct an equitable
coloring), verify (check a coloring against an instance), oracle
(brute-force feasibility), mc (Monte Carlo estimates), bounds (closed-form
threshold and bound values).

Exit codes: 0 on success; 2 when the requested object exists but the
verdict is negative (solver exhausted or infeasible, verification failed,
oracle found no coloring); 1 on usage or input errors.  Instances are read
from a file or stdin, as JSON when the first character is '{' and as the
plain text format otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .chains import analytic_bound
from .hypergraph import (
    BudgetExceeded,
    Coloring,
    Hypergraph,
    brute_force_equitable,
    class_targets,
    edge_threshold,
    generate_random,
    is_equitable,
    is_proper,
    parse_hypergraph,
)
from .intervals import choose_p
from .montecarlo import QUANTITIES, mc_estimate
from .rebalance import compute_p_tilde, compute_q
from .solver import (
    AUTO,
    BALANCED_ONLY,
    SUCCESS,
    TWO_STAGE_ONLY,
    SolveConfig,
    solve_equitable,
)

__all__ = ["main", "run_cli"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_instance(path: str) -> Hypergraph:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    if text.lstrip().startswith("{"):
        return Hypergraph.from_json_dict(json.loads(text))
    return parse_hypergraph(text)


def _read_coloring(path: str) -> Coloring:
    with open(path, "r", encoding="utf-8") as fh:
        return Coloring.from_json_dict(json.load(fh))


def _emit(obj: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(obj))
    else:
        for line in text_lines:
            print(line)


def _build_parser() -> _Parser:
    parser = _Parser(prog="eqcolor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a random instance to stdout")
    gen.add_argument("-m", type=int, required=True, help="number of vertices")
    gen.add_argument("-n", type=int, required=True, help="edge size")
    gen.add_argument("--edges", type=int, required=True, help="number of edges")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--format", choices=["text", "json"], default="text")

    solve = sub.add_parser("solve", help="construct an equitable coloring")
    solve.add_argument("instance", nargs="?", default="-", help="file or - for stdin")
    solve.add_argument("-r", type=int, default=2, help="number of colors")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--restarts", type=int, default=10_000)
    solve.add_argument(
        "--force-path", choices=[AUTO, BALANCED_ONLY, TWO_STAGE_ONLY], default=AUTO
    )
    solve.add_argument("--strict-divisibility", action="store_true")
    solve.add_argument("--no-repair", action="store_true", help="disable greedy repair")
    solve.add_argument("--explain", action="store_true", help="include chains and plan")
    solve.add_argument("--format", choices=["text", "json"], default="json")

    verify = sub.add_parser("verify", help="check a coloring against an instance")
    verify.add_argument("instance")
    verify.add_argument("coloring", help="coloring JSON file")
    verify.add_argument("--format", choices=["text", "json"], default="text")

    oracle = sub.add_parser("oracle", help="brute-force equitable feasibility")
    oracle.add_argument("instance", nargs="?", default="-")
    oracle.add_argument("-r", type=int, default=2)
    oracle.add_argument("--budget", type=int, default=10**8)
    oracle.add_argument("--format", choices=["text", "json"], default="text")

    mc = sub.add_parser("mc", help="Monte Carlo estimate of a process quantity")
    mc.add_argument("instance", nargs="?", default="-")
    mc.add_argument("-r", type=int, default=2)
    mc.add_argument("--quantity", choices=list(QUANTITIES), required=True)
    mc.add_argument("--trials", type=int, default=10**5)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--p", type=float, help="override the subinterval parameter")
    mc.add_argument("--p-tilde", type=float, help="candidate keep probability")
    mc.add_argument("--i", type=int, help="small-block index")
    mc.add_argument("--v", type=int, help="vertex for the deflected quantity")
    mc.add_argument("--edge", type=int, help="edge index for balanced-mono")
    mc.add_argument("--edges", help="comma-separated edge tuple for chain-event")
    mc.add_argument("--color", type=int, help="chain color")
    mc.add_argument("--no-compare", action="store_true")
    mc.add_argument("--format", choices=["text", "json", "csv"], default="text")

    bounds = sub.add_parser("bounds", help="threshold and bound values for n, r, k")
    bounds.add_argument("-n", type=int, required=True)
    bounds.add_argument("-r", type=int, required=True)
    bounds.add_argument("-k", type=int, default=1)
    bounds.add_argument("-m", type=int, help="include q and p-tilde for this m")
    bounds.add_argument("--format", choices=["text", "json"], default="text")

    return parser


def _cmd_gen(args) -> int:
    h = generate_random(args.m, args.n, args.edges, args.seed)
    if args.format == "json":
        print(h.to_json())
    else:
        print(h.to_text(), end="")
    return 0


def _cmd_solve(args) -> int:
    h = _read_instance(args.instance)
    cfg = SolveConfig(
        seed=args.seed,
        max_restarts=args.restarts,
        force_path=args.force_path,
        allow_fallback_repair=not args.no_repair,
        strict_divisibility=args.strict_divisibility,
    )
    report = solve_equitable(h, args.r, cfg)
    if report.outcome == SUCCESS and not args.explain:
        payload = report.coloring.to_json_dict()
        lines = [
            f"outcome: {report.outcome} after {report.attempts} attempts ({report.path})",
            "colors: " + " ".join(map(str, report.coloring.colors)),
            "sizes: " + " ".join(map(str, report.coloring.sizes)),
        ]
    else:
        payload = report.to_json_dict(explain=args.explain)
        lines = [
            f"outcome: {report.outcome} after {report.attempts} attempts ({report.path})",
            f"diagnostics: {report.diagnostics}",
        ]
        if report.coloring is not None:
            lines.insert(1, "colors: " + " ".join(map(str, report.coloring.colors)))
    _emit(payload, args.format, lines)
    return 0 if report.outcome == SUCCESS else 2


def _cmd_verify(args) -> int:
    h = _read_instance(args.instance)
    coloring = _read_coloring(args.coloring)
    if coloring.m != h.m:
        raise ValueError(f"coloring covers {coloring.m} vertices, instance has {h.m}")
    proper = coloring.is_total() and is_proper(h, coloring)
    equitable = proper and is_equitable(h, coloring)
    verdict = {
        "proper": proper,
        "equitable": equitable,
        "sizes": list(coloring.sizes),
        "targets": class_targets(h.m, coloring.r),
    }
    _emit(
        verdict,
        args.format,
        [
            f"proper: {proper}",
            f"equitable: {equitable}",
            "sizes: " + " ".join(map(str, coloring.sizes)),
        ],
    )
    return 0 if equitable else 2


def _cmd_oracle(args) -> int:
    h = _read_instance(args.instance)
    found = brute_force_equitable(h, args.r, budget=args.budget)
    payload = {
        "feasible": found is not None,
        "coloring": None if found is None else found.to_json_dict(),
    }
    lines = [f"feasible: {found is not None}"]
    if found is not None:
        lines.append("colors: " + " ".join(map(str, found.colors)))
    _emit(payload, args.format, lines)
    return 0 if found is not None else 2


def _cmd_mc(args) -> int:
    h = _read_instance(args.instance)
    params = {}
    if args.p is not None:
        params["p"] = args.p
    if args.p_tilde is not None:
        params["p_tilde"] = args.p_tilde
    if args.i is not None:
        params["i"] = args.i
    if args.v is not None:
        params["v"] = args.v
    if args.edge is not None:
        params["edge"] = args.edge
    if args.edges is not None:
        params["edges"] = [int(x) for x in args.edges.split(",") if x.strip() != ""]
    if args.color is not None:
        params["color"] = args.color
    report = mc_estimate(
        args.quantity,
        h,
        args.r,
        params=params,
        trials=args.trials,
        seed=args.seed,
        compare=not args.no_compare,
    )
    obj = report.to_json_dict()
    if args.format == "csv":
        comp = report.comparison
        print("quantity,trials,estimate,half_width,comparison_kind,comparison_value")
        print(
            f"{report.quantity},{report.trials},{report.estimate!r},{report.half_width!r},"
            + (f"{comp.kind},{comp.value!r}" if comp else ",")
        )
        return 0
    lines = [
        f"{report.quantity}: {report.estimate:.6g} +/- {report.half_width:.3g} "
        f"({report.trials} trials)"
    ]
    if report.comparison:
        lines.append(f"{report.comparison.kind}: {report.comparison.value:.6g}")
    _emit(obj, args.format, lines)
    return 0


def _cmd_bounds(args) -> int:
    n, r, k = args.n, args.r, args.k
    thr = edge_threshold(n, r)
    obj = {
        "n": n,
        "r": r,
        "k": k,
        "edge-threshold": thr.value,
        "edge-threshold-log": thr.log_value,
        "asymptotic-regime": thr.asymptotic_regime,
        "p": choose_p(n, r),
        "chain-probability": analytic_bound("chain-probability", n=n, r=r, k=k),
        "mono-edge-probability": analytic_bound("mono-edge-probability"),
        "expected-deflections": analytic_bound("expected-deflections", n=n, r=r),
        "dangerous-count": analytic_bound("dangerous-count", n=n, r=r),
    }
    if args.m is not None:
        p = obj["p"]
        obj["q"] = compute_q(args.m, n, r, p)
        try:
            obj["p-tilde"] = compute_p_tilde(args.m, n, r, p, q=obj["q"])
        except ValueError as exc:
            obj["p-tilde"] = None
            obj["p-tilde-error"] = str(exc)
    lines = [f"{key}: {val}" for key, val in obj.items()]
    _emit(obj, args.format, lines)
    return 0


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "gen": _cmd_gen,
            "solve": _cmd_solve,
            "verify": _cmd_verify,
            "oracle": _cmd_oracle,
            "mc": _cmd_mc,
            "bounds": _cmd_bounds,
        }[args.command]
        return handler(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0 if code is None else 1
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
