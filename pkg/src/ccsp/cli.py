"""Command-line front end.

Subcommands: `traces` (print trace sets), `check` (compare the two
semantics of one term), `lts` (export the transition graph as dot), `prop`
(seeded equivalence campaign, optionally with the decomposition-law
suites), `enumerate` (exhaustive equivalence check up to an operator
budget), and `example` (bundled scenarios).

Exit codes: 0 on success and agreement, 1 on any mismatch or failed check,
2 on parse or usage errors.  Output is deterministic for identical
arguments and seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import equivalence, warehouse
from .denotational import check_healthiness, traces_compensable, traces_standard
from .equivalence import (
    LAWS,
    Verdict,
    check_compensable,
    check_standard,
    enumerate_terms,
    run_lemma_suite,
    run_prop_campaign,
)
from .operational import (
    DEFAULT_STATE_CAP,
    StateCapExceeded,
    build_lts,
    derived_traces_compensable,
    derived_traces_standard,
)
from .parser import ParseError, parse_compensable, parse_standard
from .terms import (
    is_event_name,
    pair_tokens,
    pretty_print,
    term_op_count,
    trace_tokens,
    validate_user_term,
)


def _parse_term(text: str, kind: str):
    return parse_standard(text) if kind == "std" else parse_compensable(text)


def _split_alphabet(text: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    for name in names:
        if not is_event_name(name):
            raise argparse.ArgumentTypeError(f"invalid event name: {name!r}")
    if not names:
        raise argparse.ArgumentTypeError("alphabet must list at least one event")
    return names


def _set_tokens(traces, kind: str) -> list:
    if kind == "std":
        return [trace_tokens(t) for t in sorted(traces)]
    return [pair_tokens(p) for p in sorted(traces)]


def _print_set(traces) -> None:
    for t in sorted(traces):
        print(t)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccsp",
        description="Run and compare the operational and trace semantics of cCSP terms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_term_command(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("term", help="process term in concrete syntax")
        p.add_argument("--kind", choices=("std", "comp"), default="std")
        p.add_argument(
            "--alphabet",
            type=_split_alphabet,
            default=None,
            help="declared alphabet (comma-separated); default: inferred from the term",
        )
        return p

    p_traces = add_term_command("traces", "print the trace set(s) of a term")
    p_traces.add_argument(
        "--semantics",
        choices=("denotational", "operational", "both"),
        default="both",
    )
    p_traces.add_argument("--format", choices=("text", "machine"), default="text")

    p_check = add_term_command("check", "compare derived and compositional traces")
    p_check.add_argument("--format", choices=("text", "machine"), default="text")

    p_lts = add_term_command("lts", "write the labelled transition system as dot")
    p_lts.add_argument("--out", default=None, help="output file (default: stdout)")

    p_prop = sub.add_parser("prop", help="seeded randomized equivalence campaign")
    p_prop.add_argument("--seed", type=int, default=0)
    p_prop.add_argument("--cases", type=int, default=100)
    p_prop.add_argument("--max-depth", type=int, default=4)
    p_prop.add_argument("--alphabet", type=_split_alphabet, default=("a", "b"))
    p_prop.add_argument("--kind", choices=("std", "comp", "both"), default="both")
    p_prop.add_argument(
        "--lemmas",
        action="store_true",
        help="also run the decomposition-law suites (laws 1-7)",
    )
    p_prop.add_argument("--lemma-cases", type=int, default=500)
    p_prop.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)

    p_enum = sub.add_parser(
        "enumerate", help="enumerate all terms up to an operator budget"
    )
    p_enum.add_argument("--max-ops", type=int, required=True)
    p_enum.add_argument("--alphabet", type=_split_alphabet, default=("a", "b"))
    p_enum.add_argument("--kind", choices=("std", "comp"), default="std")
    p_enum.add_argument(
        "--max-pair-ops",
        type=int,
        default=None,
        help="cap on operator count of each compensation-pair operand",
    )
    p_enum.add_argument(
        "--check",
        action="store_true",
        help="check semantic equivalence of every enumerated term",
    )
    p_enum.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)

    p_example = sub.add_parser("example", help="run a bundled scenario")
    p_example.add_argument("name", choices=("warehouse",))

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Entry point returning the exit code (no sys.exit)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    try:
        return _dispatch(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except StateCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "traces":
        return _cmd_traces(args)
    if args.command == "check":
        return _cmd_check(args)
    if args.command == "lts":
        return _cmd_lts(args)
    if args.command == "prop":
        return _cmd_prop(args)
    if args.command == "enumerate":
        return _cmd_enumerate(args)
    if args.command == "example":
        return _cmd_example(args)
    raise AssertionError(f"unhandled command {args.command!r}")


def _validated_term(args):
    term = _parse_term(args.term, args.kind)
    violations = validate_user_term(term, args.alphabet)
    if violations:
        for v in violations:
            print(f"invalid term: {v}", file=sys.stderr)
        raise ParseError(0, "a valid user term", args.term)
    return term


def _cmd_traces(args) -> int:
    term = _validated_term(args)
    sets = {}
    if args.semantics in ("denotational", "both"):
        sets["denotational"] = (
            traces_standard(term) if args.kind == "std" else traces_compensable(term)
        )
    if args.semantics in ("operational", "both"):
        sets["operational"] = (
            derived_traces_standard(term)
            if args.kind == "std"
            else derived_traces_compensable(term)
        )
    if args.format == "machine":
        record = {
            "command": "traces",
            "term": pretty_print(term),
            "kind": args.kind,
            "sets": {name: _set_tokens(s, args.kind) for name, s in sets.items()},
        }
        print(json.dumps(record, sort_keys=True))
        return 0
    for name, s in sets.items():
        if len(sets) > 1:
            print(f"{name}:")
        _print_set(s)
    return 0


def _verdict_record(term_text: str, kind: str, verdict: Verdict) -> dict:
    return {
        "command": "check",
        "term": term_text,
        "kind": kind,
        "status": verdict.status,
        "only_operational": _set_tokens(verdict.only_operational, kind),
        "only_denotational": _set_tokens(verdict.only_denotational, kind),
    }


def _cmd_check(args) -> int:
    term = _validated_term(args)
    verdict = (
        check_standard(term) if args.kind == "std" else check_compensable(term)
    )
    if args.format == "machine":
        print(json.dumps(_verdict_record(pretty_print(term), args.kind, verdict), sort_keys=True))
    else:
        print(f"term: {pretty_print(term)}")
        print(f"status: {verdict.status}")
        if not verdict.is_equal:
            print("only in operational semantics:")
            _print_set(verdict.only_operational)
            print("only in denotational semantics:")
            _print_set(verdict.only_denotational)
    return 0 if verdict.is_equal else 1


def _cmd_lts(args) -> int:
    term = _validated_term(args)
    dot = build_lts(term).to_dot()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dot + "\n")
    else:
        print(dot)
    return 0


def _cmd_prop(args) -> int:
    print(
        f"prop seed={args.seed} cases={args.cases} max-depth={args.max_depth}"
        f" alphabet={','.join(args.alphabet)} kind={args.kind}"
    )
    equal = 0
    healthy = 0
    failed = False
    for case in run_prop_campaign(
        args.seed, args.cases, args.max_depth, args.alphabet, args.kind, args.state_cap
    ):
        ok = case.verdict.is_equal
        equal += ok
        healthy += case.healthy
        marker = "ok" if ok and case.healthy else "FAIL"
        print(f"{marker} {case.index:04d} {case.kind} {pretty_print(case.term)}")
        if not ok:
            failed = True
            for t in sorted(case.verdict.only_operational):
                print(f"  only operational: {t}")
            for t in sorted(case.verdict.only_denotational):
                print(f"  only denotational: {t}")
        if not case.healthy:
            failed = True
            print("  healthiness violated")
    print(f"equal {equal}/{args.cases}")
    print(f"healthy {healthy}/{args.cases}")

    if args.lemmas:
        lemma_total = 0
        lemma_equal = 0
        for lemma in sorted(LAWS):
            suite = run_lemma_suite(
                lemma, args.lemma_cases, args.seed, args.max_depth, args.alphabet
            )
            lemma_total += suite.total
            lemma_equal += suite.equal
            coverage = "".join(
                f" {key}={suite.coverage[key]}" for key in sorted(suite.coverage)
            )
            print(f"lemma {lemma} {suite.name} {suite.equal}/{suite.total} equal{coverage}")
            if suite.failures:
                failed = True
                for f in suite.failures[:5]:
                    ops = " ; ".join(pretty_print(t) for t in f.operands)
                    print(f"  FAIL operands: {ops}")
        print(f"lemmas equal {lemma_equal}/{lemma_total}")
        if lemma_equal != lemma_total:
            failed = True

    return 1 if failed else 0


def _cmd_enumerate(args) -> int:
    kind_name = "standard" if args.kind == "std" else "compensable"
    print(
        f"enumerate max-ops={args.max_ops} alphabet={','.join(args.alphabet)}"
        f" kind={args.kind} check={str(args.check).lower()}"
    )
    if not args.check:
        for term in enumerate_terms(
            args.max_ops, args.alphabet, kind_name, args.max_pair_ops
        ):
            print(pretty_print(term))
        return 0

    per_level: dict[int, list[int]] = {}
    mismatches = 0
    unhealthy = 0
    total = 0
    for term in enumerate_terms(args.max_ops, args.alphabet, kind_name, args.max_pair_ops):
        verdict = (
            check_standard(term, args.state_cap)
            if args.kind == "std"
            else check_compensable(term, args.state_cap)
        )
        level = term_op_count(term)
        counts = per_level.setdefault(level, [0, 0])
        counts[0] += 1
        total += 1
        if verdict.is_equal:
            counts[1] += 1
        else:
            mismatches += 1
            print(f"MISMATCH {pretty_print(term)}")
            for t in sorted(verdict.only_operational):
                print(f"  only operational: {t}")
            for t in sorted(verdict.only_denotational):
                print(f"  only denotational: {t}")
        if not check_healthiness(term):
            unhealthy += 1
            print(f"UNHEALTHY {pretty_print(term)}")
        equivalence.maybe_trim_caches()
    for level in sorted(per_level):
        n, ok = per_level[level]
        print(f"ops {level}: {n} terms, {ok} equal")
    print(f"total {total} terms, {total - mismatches} equal, {mismatches} mismatches")
    print(f"healthy {total - unhealthy}/{total}")
    return 1 if mismatches or unhealthy else 0


def _cmd_example(args) -> int:
    report = warehouse.warehouse_report()
    print(f"term: {report.term_text}")
    print(f"traces ({len(report.traces)}):")
    for t in report.traces:
        print(t)
    print("report:")
    for name, passed, detail in report.checks:
        print(f"{'pass' if passed else 'FAIL'}: {name} ({detail})")
    return 0 if report.ok else 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
