"""Command-line front end: normalize, eq, diff, check, smf, eval.

Exit codes are a stable scripting contract: 0 for success (EQUAL, all
checks passing), 1 for NOT-EQUAL or check failures, 2 for usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import poly
from .normalform import (
    normalize,
    ratnf_equal,
    ratnf_to_json,
    render_bad_set,
    render_ratnf,
)
from .oracle import UnsupportedTermError, eval_term
from .smf import smf_collapse, smf_from_json
from .syntax import ParseError, parse_term
from .terms import Diff, contains_diff
from .verify import (
    CheckReport,
    TermGen,
    check_cancellation,
    check_equation,
    check_propagation_units,
    check_propagation_zeros,
    de_axioms,
    derive_seed,
    derived_identities,
    md_axioms,
)

_SELECTORS = ("md", "de", "derived", "propagation", "cancellation", "all")


class InputError(Exception):
    """Bad input from the user; maps to exit code 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meadow",
        description="Exact calculator for zero-totalised fields with formal "
        "partial derivatives.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-n", "--nvars", type=int, default=3, help="number of formal variables X1..Xn"
    )
    common.add_argument(
        "--seed", type=int, default=None, help="PRNG seed (default: $MEADOW_SEED or 0)"
    )
    common.add_argument("--trials", type=int, default=200, help="trials per check")
    common.add_argument("--max-depth", type=int, default=5, help="random term depth")
    common.add_argument(
        "--budget",
        type=int,
        default=poly.DEFAULT_MONOMIAL_BUDGET,
        help="monomial count cap per polynomial",
    )
    common.add_argument(
        "--output", choices=("text", "json"), default="text", help="output mode"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="print the normal form")
    p.add_argument("expr")

    p = sub.add_parser("eq", parents=[common], help="decide generic equality")
    p.add_argument("expr1")
    p.add_argument("expr2")

    p = sub.add_parser("diff", parents=[common], help="differentiate, then normalize")
    p.add_argument("index", type=int, help="variable index i of D[i]")
    p.add_argument("expr")

    p = sub.add_parser("check", parents=[common], help="run verification suites")
    p.add_argument("selector", choices=_SELECTORS)

    p = sub.add_parser("smf", parents=[common], help="collapse a guarded-form JSON file")
    p.add_argument("file")

    p = sub.add_parser("eval", parents=[common], help="zero-totalised pointwise value")
    p.add_argument("expr")
    p.add_argument(
        "--at", required=True, help="point, e.g. X1=2,X2=-1/3 (all variables required)"
    )
    return parser


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MEADOW_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"MEADOW_SEED must be an integer, got {env!r}") from None
    return 0


def _parse(expr: str, nvars: int):
    if nvars < 1:
        raise InputError("--nvars must be at least 1")
    return parse_term(expr, nvars)


def _emit_ratnf(nf, bad, args) -> None:
    if args.output == "json":
        payload = {"schema": "meadow.ratnf/1", **ratnf_to_json(nf, bad)}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(render_ratnf(nf))
        if bad:
            print(f"badset: {render_bad_set(bad)}")


def _cmd_normalize(args) -> int:
    nf, bad = normalize(_parse(args.expr, args.nvars), args.nvars)
    _emit_ratnf(nf, bad, args)
    return 0


def _cmd_eq(args) -> int:
    lhs, _ = normalize(_parse(args.expr1, args.nvars), args.nvars)
    rhs, _ = normalize(_parse(args.expr2, args.nvars), args.nvars)
    equal = ratnf_equal(lhs, rhs)
    if args.output == "json":
        payload = {
            "schema": "meadow.eq/1",
            "equal": equal,
            "lhs": render_ratnf(lhs),
            "rhs": render_ratnf(rhs),
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print("EQUAL" if equal else "NOT-EQUAL")
    return 0 if equal else 1


def _cmd_diff(args) -> int:
    if not 1 <= args.index <= args.nvars:
        raise InputError(
            f"derivative index {args.index} out of range 1..{args.nvars}"
        )
    term = Diff(args.index, _parse(args.expr, args.nvars))
    nf, bad = normalize(term, args.nvars)
    _emit_ratnf(nf, bad, args)
    return 0


def _selected_reports(args, seed: int) -> list[CheckReport]:
    nvars, trials, depth = args.nvars, args.trials, args.max_depth

    def gen(label: str) -> TermGen:
        return TermGen(nvars, derive_seed(seed, label), depth)

    reports: list[CheckReport] = []
    if args.selector in ("md", "all"):
        reports += [check_equation(eq, gen(eq.name), trials) for eq in md_axioms(nvars)]
    if args.selector in ("de", "all"):
        reports += [check_equation(eq, gen(eq.name), trials) for eq in de_axioms(nvars)]
    if args.selector in ("derived", "all"):
        reports += [
            check_equation(eq, gen(eq.name), trials) for eq in derived_identities(nvars)
        ]
    if args.selector in ("propagation", "all"):
        reports.append(check_propagation_units(gen("unit-propagation"), trials))
        reports.append(check_propagation_zeros(gen("zero-propagation"), trials))
    if args.selector in ("cancellation", "all"):
        reports.append(check_cancellation(gen("cancellation"), trials))
    return reports


def _cmd_check(args) -> int:
    if args.nvars < 1:
        raise InputError("--nvars must be at least 1")
    seed = _resolve_seed(args)
    reports = _selected_reports(args, seed)
    all_passed = all(r.passed for r in reports)
    if args.output == "json":
        payload = {
            "schema": "meadow.check/1",
            "seed": seed,
            "nvars": args.nvars,
            "reports": [r.to_json() for r in reports],
            "verdict": "pass" if all_passed else "fail",
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for r in reports:
            verdict = "pass" if r.passed else "FAIL"
            line = (
                f"{r.name:<22} {verdict:<4} mode={r.mode} trials={r.trials}"
                f" failures={len(r.failures)}"
            )
            if r.skipped:
                line += f" skipped={r.skipped}"
            print(line)
            for failure in r.failures[:3]:
                subst = ", ".join(f"{k} -> {v}" for k, v in failure.subst)
                print(f"    trial {failure.trial}: [{subst}] {failure.lhs} != {failure.rhs}")
        print(f"{len(reports)} checks: " + ("all passed" if all_passed else "FAILURES"))
    return 0 if all_passed else 1


def _cmd_smf(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.file} is not valid JSON: {exc}") from None
    try:
        tree = smf_from_json(data, args.nvars)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad form file: {exc}") from None
    nf = smf_collapse(tree)
    _emit_ratnf(nf, frozenset(), args)
    return 0


def _parse_point(spec: str, nvars: int) -> dict[int, Fraction]:
    point: dict[int, Fraction] = {}
    for piece in spec.split(","):
        piece = piece.strip()
        if not piece:
            continue
        name, _, value = piece.partition("=")
        name = name.strip()
        if not name.startswith("X") or not name[1:].isdigit():
            raise InputError(f"bad assignment {piece!r}, expected Xk=value")
        index = int(name[1:])
        if not 1 <= index <= nvars:
            raise InputError(f"variable X{index} out of range 1..{nvars}")
        try:
            point[index] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad rational value {value!r} for {name}") from None
    missing = [f"X{i}" for i in range(1, nvars + 1) if i not in point]
    if missing:
        raise InputError(f"point does not assign {', '.join(missing)}")
    return point


def _cmd_eval(args) -> int:
    term = _parse(args.expr, args.nvars)
    if contains_diff(term):
        raise InputError("eval cannot handle D[i]; use normalize or diff instead")
    point = _parse_point(args.at, args.nvars)
    value = eval_term(term, point)
    if args.output == "json":
        payload = {"schema": "meadow.eval/1", "value": str(value)}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(value)
    return 0


_COMMANDS = {
    "normalize": _cmd_normalize,
    "eq": _cmd_eq,
    "diff": _cmd_diff,
    "check": _cmd_check,
    "smf": _cmd_smf,
    "eval": _cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.budget != poly.monomial_budget():
            poly.set_monomial_budget(args.budget)
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, poly.MonomialBudgetError, UnsupportedTermError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
