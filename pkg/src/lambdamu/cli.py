"""Command line interface.

Subcommands: check | infer | redexes | reduce | normalize | eta | enumerate
| suite.  Exit codes are a stable contract:

    0  success / normal form / suite passed
    1  type error or untypable input
    2  parse or flag errors
    3  cycle found / suite failed
    4  fuel exhausted
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import harness
from .parse import ParseError, parse_judgment, parse_ruleset, parse_term
from .reduction import (
    CYCLE,
    DEFAULT_NODE_FUEL,
    DEFAULT_STEP_FUEL,
    FUEL,
    NORMAL,
    RULE_DISPLAY,
    RULES_FULL,
    SN,
    STRATEGY_NAMES,
    Trace,
    eta,
    find_redexes,
    is_sn,
    normalize_wn,
    reduce,
)
from .syntax import Term, set_fresh_seed, term_to_str, type_to_str
from .typecheck import (
    Context,
    Derivation,
    TypingError,
    Untypable,
    check_judgment,
    infer_principal,
)

EXIT_OK = 0
EXIT_TYPE = 1
EXIT_USAGE = 2
EXIT_CYCLE_OR_FAIL = 3
EXIT_FUEL = 4

_STATUS_EXIT = {NORMAL: EXIT_OK, CYCLE: EXIT_CYCLE_OR_FAIL, FUEL: EXIT_FUEL}


def _path_str(path) -> str:
    return ".".join(str(i) for i in path)


def trace_lines(trace: Trace) -> list[str]:
    lines = [f"initial\t{term_to_str(trace.initial)}"]
    for i, s in enumerate(trace.steps, start=1):
        lines.append(
            f"{i}\t{RULE_DISPLAY[s.rule]}\t{_path_str(s.path)}\t{term_to_str(s.after)}")
    lines.append(f"status\t{trace.status}")
    return lines


def trace_dict(trace: Trace) -> dict:
    return {
        "initial": term_to_str(trace.initial),
        "status": trace.status,
        "steps": [
            {
                "index": i,
                "rule": RULE_DISPLAY[s.rule],
                "path": list(s.path),
                "before": term_to_str(s.before),
                "after": term_to_str(s.after),
            }
            for i, s in enumerate(trace.steps, start=1)
        ],
    }


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _render_derivation(d: Derivation, depth: int = 0) -> list[str]:
    lines = [f"{'  ' * depth}[{d.rule}] {d.conclusion}"]
    for p in d.premises:
        lines.extend(_render_derivation(p, depth + 1))
    return lines


def _read_term(args) -> Term:
    if getattr(args, "file", None):
        with open(args.file, "r", encoding="utf-8") as fh:
            return parse_term(fh.read())
    if getattr(args, "term", None) is None:
        raise ParseError("no input term (pass TERM or --file)", 0, 0)
    return parse_term(args.term)


def _bounds(args) -> harness.EnumBounds:
    return harness.EnumBounds(
        max_cxty=args.max_cxty,
        lam_pool=args.lam_pool,
        mu_pool=args.mu_pool,
        typable_only=args.typable_only,
    )


# ---------------------------------------------------------------------------
# Subcommands

def cmd_check(args) -> int:
    gamma, theta, term, ty = parse_judgment(args.judgment)
    ctx = Context.make(gamma, theta)
    try:
        d = check_judgment(ctx, term, ty)
    except TypingError as e:
        _emit(args, [f"type error at path {_path_str(e.path)} ({e.reason}): {e}"],
              {"ok": False, "path": list(e.path), "reason": e.reason,
               "message": str(e)})
        return EXIT_TYPE
    _emit(args, _render_derivation(d),
          {"ok": True, "judgment": str(d.conclusion)})
    return EXIT_OK


def cmd_infer(args) -> int:
    term = _read_term(args)
    try:
        pr = infer_principal(term)
    except Untypable as e:
        _emit(args, [f"untypable at path {_path_str(e.path)} ({e.reason}): {e}"],
              {"typable": False, "path": list(e.path), "reason": e.reason,
               "message": str(e)})
        return EXIT_TYPE
    gamma = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in pr.gamma)
    theta = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in pr.theta)
    lines = [f"type: {type_to_str(pr.type)}"]
    if gamma:
        lines.append(f"gamma: {gamma}")
    if theta:
        lines.append(f"theta: {theta}")
    if pr.metavars:
        lines.append(f"metavars: {', '.join(sorted(pr.metavars))}")
    _emit(args, lines, {
        "typable": True,
        "type": type_to_str(pr.type),
        "gamma": {v.name: type_to_str(t) for v, t in pr.gamma},
        "theta": {v.name: type_to_str(t) for v, t in pr.theta},
        "metavars": sorted(pr.metavars),
    })
    return EXIT_OK


def cmd_redexes(args) -> int:
    term = _read_term(args)
    rules = parse_ruleset(args.rules)
    found = find_redexes(term, rules)
    lines = [f"{_path_str(p)}\t{RULE_DISPLAY[r]}" for p, r in found] or ["(none)"]
    _emit(args, lines, {
        "term": term_to_str(term),
        "redexes": [{"path": list(p), "rule": RULE_DISPLAY[r]} for p, r in found],
    })
    return EXIT_OK


def cmd_reduce(args) -> int:
    term = _read_term(args)
    rules = parse_ruleset(args.rules)
    trace = reduce(term, rules, strategy=args.strategy, fuel=args.fuel,
                   prefer_mu_prime=args.prefer_mu_prime)
    _emit(args, trace_lines(trace), trace_dict(trace))
    return _STATUS_EXIT[trace.status]


def cmd_normalize(args) -> int:
    term = _read_term(args)
    trace = normalize_wn(term, fuel=args.fuel)
    _emit(args, trace_lines(trace), trace_dict(trace))
    return _STATUS_EXIT[trace.status]


def cmd_eta(args) -> int:
    term = _read_term(args)
    rules = parse_ruleset(args.rules)
    r = eta(term, rules, fuel=args.fuel)
    if r.kind == "value":
        _emit(args, [str(r.value)], {"kind": "value", "eta": r.value})
        return EXIT_OK
    if r.kind == "not_sn":
        lines = ["not strongly normalizing; witness cycle:"]
        lines.extend(trace_lines(r.cycle))
        _emit(args, lines, {"kind": "not_sn", "cycle": trace_dict(r.cycle)})
        return EXIT_CYCLE_OR_FAIL
    _emit(args, ["fuel exhausted"], {"kind": "fuel"})
    return EXIT_FUEL


def cmd_enumerate(args) -> int:
    bounds = _bounds(args)
    lines = []
    payload = []
    for t in harness.enumerate_terms(bounds):
        lines.append(term_to_str(t))
        payload.append(term_to_str(t))
        if args.limit and len(lines) >= args.limit:
            break
    _emit(args, lines, {"bounds": bounds.__dict__, "terms": payload})
    return EXIT_OK


def cmd_suite(args) -> int:
    bounds = _bounds(args)
    try:
        report = harness.run_lemma_suite(args.name, bounds)
    except harness.UnknownSuite as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    _emit(args, report.render().splitlines(), report.to_dict())
    return EXIT_OK if report.passed else EXIT_CYCLE_OR_FAIL


# ---------------------------------------------------------------------------
# Argument parsing

def _add_common(p: argparse.ArgumentParser, term_input: bool = True):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0,
                   help="fresh-name seed for reproducible traces")
    if term_input:
        p.add_argument("term", nargs="?", help="term in the concrete grammar")
        p.add_argument("--file", help="read the term from a file instead")


def _add_bounds(p: argparse.ArgumentParser):
    p.add_argument("--max-cxty", type=int, default=5)
    p.add_argument("--lam-pool", type=int, default=1)
    p.add_argument("--mu-pool", type=int, default=1)
    p.add_argument("--typable-only", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lambdamu",
        description="Simply typed lambda-mu calculus toolbox",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a judgment gamma |- M : A ; theta")
    p.add_argument("judgment")
    _add_common(p, term_input=False)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("infer", help="principal context and type")
    _add_common(p)
    p.set_defaults(fn=cmd_infer)

    p = sub.add_parser("redexes", help="list redex positions")
    _add_common(p)
    p.add_argument("--rules", default="bmMrte",
                   help="letters from bmMrte (M = mu')")
    p.set_defaults(fn=cmd_redexes)

    p = sub.add_parser("reduce", help="reduce with a strategy")
    _add_common(p)
    p.add_argument("--rules", default="bmMrte")
    p.add_argument("--strategy", default="leftmost-outermost",
                   choices=STRATEGY_NAMES)
    p.add_argument("--fuel", type=int, default=DEFAULT_STEP_FUEL)
    p.add_argument("--prefer-mu-prime", action="store_true",
                   help="flip the mu/mu' tie-break on overlapping redexes")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("normalize",
                       help="find a normal form for all six rules")
    _add_common(p)
    p.add_argument("--fuel", type=int, default=DEFAULT_STEP_FUEL)
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("eta", help="longest reduction path length")
    _add_common(p)
    p.add_argument("--rules", default="bmrte")
    p.add_argument("--fuel", type=int, default=DEFAULT_NODE_FUEL)
    p.set_defaults(fn=cmd_eta)

    p = sub.add_parser("enumerate", help="stream the bounded term fragment")
    _add_common(p, term_input=False)
    _add_bounds(p)
    p.add_argument("--limit", type=int, default=0)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("suite", help="run a lemma-indexed property suite")
    p.add_argument("name", help=f"one of {', '.join(harness.SUITE_NAMES)}")
    _add_common(p, term_input=False)
    _add_bounds(p)
    p.set_defaults(fn=cmd_suite)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    set_fresh_seed(args.seed)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e}"
              + (f" (expected {', '.join(sorted(e.expected))})" if e.expected else ""),
              file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
