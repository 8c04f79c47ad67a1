"""Command-line interface.

Subcommands: ``resolve`` (branch data to invariant report), ``verify``
(run the scenario registry), ``bmy`` (one inequality instance), ``graph``
(tree JSON to dot text), ``check-identities`` (seeded randomized checks).
Exit codes: 0 all good, 1 assertion or mismatch, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .barks import ContractibilityClass
from .bmy import BMYInstance, check_bmy
from .hn import BoundaryConventionError, BranchPair, gamma_prime_a, gamma_prime_b
from .registry import run_registry
from .resolution import (
    NoAsymptoteViolation,
    build_resolution,
    check_basic_inequality,
    minimalize,
    sum_ei,
    two_reduction,
)
from .search import BudgetExceededError
from .selfcheck import DEFAULT_SEED, run_all
from .trees import WeightedTree


def _fail_usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SystemExit(_fail_usage(f"no such file: {path}"))
    except json.JSONDecodeError as exc:
        raise SystemExit(_fail_usage(f"malformed JSON in {path}: {exc}"))


def _cmd_resolve(args) -> int:
    data = _load_json(args.input)
    try:
        bp = BranchPair.from_json_dict(data)
        scene = build_resolution(bp, no_asymptote=bool(data.get("noAsymptote", False)))
        minimal = minimalize(scene)
        report_sum = sum_ei(minimal)
        reduced, t = two_reduction(minimal)
        basic = check_basic_inequality(reduced)
    except BoundaryConventionError as exc:
        return _fail_usage(f"branch data underdetermined: {exc}")
    except (ValueError, KeyError) as exc:
        if isinstance(exc, NoAsymptoteViolation):
            print(f"assumption violated: {exc}", file=sys.stderr)
            return 1
        return _fail_usage(str(exc))

    report = {
        "ePrimeSq": -scene.gamma,
        "gammaPrime": scene.gamma,
        "gamma": minimal.gamma,
        "epsilon": minimal.epsilon,
        "hPhi": scene.h_phi,
        "hPsi": minimal.h_psi,
        "t": t,
        "r": scene.r,
        "rTilde": scene.r_tilde,
        "eDotD": 2,
        "gammaPrimeA": gamma_prime_a(bp),
        "twigs": [
            {"ids": list(ids), "capacity": str(c)} for ids, c in report_sum.per_twig
        ],
        "sumE": str(report_sum.total),
        "sumEBound": report_sum.bound,
        "sumEHolds": report_sum.holds,
        "basicSlack": basic.slack,
        "basicHolds": basic.holds,
        "tree": minimal.tree.to_json_dict(),
    }
    try:
        report["gammaPrimeB"] = gamma_prime_b(bp)
    except BoundaryConventionError:
        report["gammaPrimeB"] = None
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        for key in sorted(report):
            if key == "tree":
                continue
            print(f"{key}: {report[key]}")
    return 0


def _cmd_verify(args) -> int:
    try:
        report = run_registry(
            args.filter, budget=args.budget, bounds_scale=args.bounds_scale
        )
    except (ValueError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not report.results:
        return _fail_usage("no scenarios matched")
    lines = []
    for r in report.results:
        status = "pass" if r.ok else "FAIL"
        lines.append(
            {"name": r.name, "status": status, "detail": r.detail, "seconds": round(r.seconds, 4)}
        )
    if args.format == "json":
        print(json.dumps({"entries": lines, "allOk": report.all_ok}, sort_keys=True))
    else:
        for line in lines:
            print(f"[{line['status']}] {line['name']}: {line['detail']}")
        print(f"total: {len(lines)} scenarios in {report.seconds:.2f}s")
    return 0 if report.all_ok else 1


def _cmd_bmy(args) -> int:
    data = _load_json(args.input)
    try:
        components = tuple(
            (int(c["determinant"]), ContractibilityClass(c["class"]))
            for c in data.get("components", [])
        )
        instance = BMYInstance(
            chi_open=int(data["chiOpen"]),
            components=components,
            p_squared=Fraction(str(data.get("pSquared", 0))),
        )
        report = check_bmy(instance)
    except (ValueError, KeyError) as exc:
        return _fail_usage(str(exc))
    payload = {
        "lhs": str(report.lhs),
        "rhs": str(report.rhs),
        "slack": str(report.slack),
        "holds": report.holds,
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"lhs = {payload['lhs']}, rhs = {payload['rhs']}, holds = {report.holds}")
    return 0 if report.holds else 1


def _cmd_graph(args) -> int:
    data = _load_json(args.input)
    try:
        tree = WeightedTree.from_json_dict(data)
    except (ValueError, KeyError) as exc:
        return _fail_usage(str(exc))
    print(tree.to_dot())
    return 0


def _cmd_check_identities(args) -> int:
    reports = run_all(args.seed, max_vertices=args.max_vertices)
    for r in reports:
        print(r.line())
    return 0 if all(r.ok for r in reports) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="snctools")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("resolve", help="build and reduce a configuration from branch JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("verify", help="run the scenario registry")
    p.add_argument("--filter", default=None)
    p.add_argument("--bounds-scale", type=int, default=1)
    p.add_argument("--budget", type=int, default=10**9)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("bmy", help="check an inequality instance")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("graph", help="emit dot text for a tree JSON file")
    p.add_argument("--input", required=True)

    p = sub.add_parser("check-identities", help="seeded randomized identity checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-vertices", type=int, default=20)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.command is None:
        parser.print_help()
        return 2
    handlers = {
        "resolve": _cmd_resolve,
        "verify": _cmd_verify,
        "bmy": _cmd_bmy,
        "graph": _cmd_graph,
        "check-identities": _cmd_check_identities,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
