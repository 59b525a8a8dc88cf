"""Command-line front end.

Every subcommand prints one JSON document on stdout. Counts are decimal
strings. Exit codes: 0 success, 1 usage error, 2 parse or input error,
3 oracle scale guard, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from . import expr as ex
from . import gapalg
from .core import (
    DEFAULT_MAX_P,
    CallCounter,
    IntegrityError,
    OracleScaleError,
    UsageError,
    brute_force_count,
    count,
    validate_oracle,
)
from .enumeration import WitnessStream, closest_witness, delay_budget, exists_in_interval
from .formats import ParseError
from .problems import NfaProblem, PerfectMatchingProblem, nfa_det_count, ryser_permanent

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SCALE = 3
EXIT_VERIFY = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class VerificationFailure(Exception):
    def __init__(self, report: dict[str, Any]) -> None:
        super().__init__("verification failed")
        self.report = report


def _counter_fields(calls: CallCounter) -> dict[str, int]:
    return {"oracle_calls": calls.calls, "oracle_calls_total": calls.total()}


def _load(text: str, loader: ex.Loader):
    e = ex.parse_expr(text)
    return e, ex.build(e, loader)


def cmd_count(args) -> dict[str, Any]:
    _, prob = _load(args.expr, ex.Loader())
    calls = CallCounter()
    n = count(prob, None, calls)
    return {"count": str(n), "p": prob.witness_length(), **_counter_fields(calls)}


def cmd_enumerate(args) -> dict[str, Any]:
    e, prob = _load(args.expr, ex.Loader())
    stream = WitnessStream(prob)
    out = []
    for w in stream:
        out.append(w)
        if args.limit is not None and len(out) >= args.limit:
            break
    report: dict[str, Any] = {
        "p": stream.p,
        "emitted": len(out),
        "complete": args.limit is None or len(out) < args.limit,
        "witnesses": out,
        **_counter_fields(stream.calls),
    }
    if args.measure_delay or args.figure:
        report["max_gap_calls"] = stream.max_gap
        report["delay_budget"] = stream.budget
        report["delay_ok"] = stream.max_gap <= stream.budget
    if args.figure:
        from .plotting import plot_delay_profile
        plot_delay_profile(stream.gaps, stream.budget, args.figure, title=args.expr)
        report["figure"] = str(args.figure)
    if args.measure_delay and not report["delay_ok"]:
        raise VerificationFailure(report)
    return report


def cmd_closest(args) -> dict[str, Any]:
    _, prob = _load(args.expr, ex.Loader())
    calls = CallCounter()
    w = closest_witness(prob, None, args.target, calls)
    return {"target": args.target, "witness": w, **_counter_fields(calls)}


def cmd_interval(args) -> dict[str, Any]:
    _, prob = _load(args.expr, ex.Loader())
    calls = CallCounter()
    found = exists_in_interval(prob, None, args.a, args.b,
                               open_interval=args.open_interval, calls=calls)
    return {"a": args.a, "b": args.b, "open": args.open_interval, "exists": found,
            **_counter_fields(calls)}


def cmd_verify(args) -> dict[str, Any]:
    loader = ex.Loader()
    e, prob = _load(args.expr, loader)
    p = prob.witness_length()
    if p > args.max_p:
        raise OracleScaleError(f"witness length {p} exceeds --max-p {args.max_p}")
    calls = CallCounter()
    n = count(prob, None, calls)
    brute = brute_force_count(prob, max_p=args.max_p)
    arith = ex.arithmetic_count(e, loader)
    checks: dict[str, bool] = {
        "count_eq_brute_force": n == brute,
        "count_eq_arithmetic": n == arith,
    }
    extra: dict[str, str] = {}
    if isinstance(prob, PerfectMatchingProblem):
        r = ryser_permanent(prob.graph)
        extra["ryser_permanent"] = str(r)
        checks["count_eq_ryser"] = n == r
    if isinstance(prob, NfaProblem):
        d = nfa_det_count(prob.nfa)
        extra["nfa_det_count"] = str(d)
        checks["count_eq_nfa_det"] = n == d
    rep = validate_oracle(prob, max_p=args.max_p)
    checks["oracle_valid"] = rep.ok
    stream = WitnessStream(prob)
    listed = sum(1 for _ in stream)
    checks["enumeration_complete"] = listed == n
    checks["delay_within_budget"] = stream.max_gap <= delay_budget(p)
    report = {
        "count": str(n),
        "brute_force_count": str(brute),
        "arithmetic_count": str(arith),
        **extra,
        "p": p,
        **_counter_fields(calls),
        "max_gap_calls": stream.max_gap,
        "delay_budget": delay_budget(p),
        "violations": [v.__dict__ for v in rep.violations[:20]],
        "verdicts": checks,
        "verdict": "pass" if all(checks.values()) else "fail",
    }
    if report["verdict"] != "pass":
        raise VerificationFailure(report)
    return report


def _checker(text: str) -> gapalg.Checker:
    _, prob = _load(text, ex.Loader())
    return gapalg.checker_from_problem(prob)


def cmd_gap_normalize(args) -> dict[str, Any]:
    pos, neg = _checker(args.pos), _checker(args.neg)
    h = gapalg.GapValue(pos, neg)
    nf = gapalg.gap_normalize(h)
    if nf.exponent > args.max_p:
        raise OracleScaleError(f"exponent {nf.exponent} exceeds --max-p {args.max_p}")
    acc_pos = gapalg.checker_eval(pos, max_p=args.max_p)
    acc_neg = gapalg.checker_eval(neg, max_p=args.max_p)
    calls = CallCounter()
    n = count(nf.problem, None, calls)
    value = acc_pos - acc_neg
    ok = n - (1 << nf.exponent) == value and n <= 1 << (nf.exponent + 1)
    report = {
        "acc_pos": str(acc_pos),
        "acc_neg": str(acc_neg),
        "value": str(value),
        "exponent": nf.exponent,
        "count": str(n),
        "p": nf.problem.witness_length(),
        **_counter_fields(calls),
        "verdict": "pass" if ok else "fail",
    }
    if not ok:
        raise VerificationFailure(report)
    return report


def cmd_cp_check(args) -> dict[str, Any]:
    f = _checker(args.checker)
    if args.g > 1 << f.p:
        raise UsageError(f"g = {args.g} exceeds 2^{f.p}, the checker's range")
    nf = gapalg.cp_embed(f, args.g)
    if nf.exponent > args.max_p:
        raise OracleScaleError(f"exponent {nf.exponent} exceeds --max-p {args.max_p}")
    calls = CallCounter()
    n = count(nf.problem, None, calls)
    acc = gapalg.checker_eval(f, max_p=args.max_p)
    top = 1 << nf.exponent
    member = n == top
    ok = member == (acc == args.g) and n <= top
    report = {
        "acc": str(acc),
        "g": str(args.g),
        "exponent": nf.exponent,
        "count": str(n),
        "deficit": str(top - n),
        "member": member,
        "brute_force_member": acc == args.g,
        **_counter_fields(calls),
        "verdict": "pass" if ok else "fail",
    }
    if not ok:
        raise VerificationFailure(report)
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-p", type=int, default=DEFAULT_MAX_P, metavar="N",
                        help="largest witness length brute-force oracles may enumerate")

    parser = _Parser(prog="totpkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", parents=[common], help="count witnesses of an expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", parents=[common], help="list witnesses in lexicographic order")
    p.add_argument("expr")
    p.add_argument("--limit", type=int, metavar="N")
    p.add_argument("--measure-delay", action="store_true",
                   help="report per-gap oracle calls and fail if the budget is exceeded")
    p.add_argument("--figure", metavar="PATH", help="write a delay-profile plot to PATH")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("closest", parents=[common], help="witness closest to a target string")
    p.add_argument("expr")
    p.add_argument("target")
    p.set_defaults(func=cmd_closest)

    p = sub.add_parser("interval", parents=[common], help="is there a witness between A and B")
    p.add_argument("expr")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--open-interval", action="store_true", help="exclude the endpoints")
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("verify", parents=[common],
                       help="check count against brute force, arithmetic and oracle invariants")
    p.add_argument("expr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gap-normalize", parents=[common],
                       help="normal form of acc(POS) - acc(NEG)")
    p.add_argument("pos")
    p.add_argument("neg")
    p.set_defaults(func=cmd_gap_normalize)

    p = sub.add_parser("cp-check", parents=[common],
                       help="decide acc(CHECKER) == G through the shifted-count embedding")
    p.add_argument("checker")
    p.add_argument("g", type=int)
    p.set_defaults(func=cmd_cp_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "limit", None) is not None and args.limit < 0:
        print("totpkit: error: --limit must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    code = EXIT_OK
    try:
        report = args.func(args)
    except VerificationFailure as exc:
        report, code = exc.report, EXIT_VERIFY
    except (ex.ExprSyntaxError, ParseError, OSError) as exc:
        print(f"totpkit: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OracleScaleError as exc:
        print(f"totpkit: error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except UsageError as exc:
        print(f"totpkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as exc:
        print(f"totpkit: error: oracle integrity: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    report = {"command": args.command, **report,
              "wall_time_s": round(time.perf_counter() - start, 6)}
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
