"""Command line front end: ``hitrees run|explore|check|corpus``.

Programs are ``.lpc`` files or the names of bundled corpus programs.  Any
program may splice a corpus program with ``$name``.

Exit codes of ``run``: 0 value, 1 failure, 2 fuel exhausted, deadlock or
interpreter error, 3 the program could not be read or parsed.

Exit codes of ``explore``: 0 nothing to report, 1 a failure was found
(``--query any-failure``) or a replayed trace did not reproduce, 3 the
program could not be read or parsed, 4 the result is inconclusive because a
bound was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any

from .explore import Choice, ExploreBounds, ReplayMismatch, exists_outcome, replay
from .outcome import Deadlock, Failure, FuelExhausted, InterpreterError, Outcome, Returned, describe
from .state import DEFAULT_FUEL
from .lang import corpus
from .lang.denote import denote, explore_handler, explore_program, initial_state, run_program
from .lang.parser import ParseError, parse
from .lang.syntax import show_expr, show_value

TRACE_SCHEMA = "hitrees.trace"
TRACE_VERSION = 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ERROR = 2
EXIT_BAD_PROGRAM = 3
EXIT_INCONCLUSIVE = 4


class BadProgram(Exception):
    pass


def load_program(ref: str, text: str | None = None):
    """Return ``(source, expr)`` for a path or corpus name."""
    if text is None:
        path = Path(ref)
        if path.is_file():
            text = path.read_text(encoding="utf-8")
        elif ref in corpus.names():
            text = corpus.source(ref)
        else:
            raise BadProgram(f"{ref}: no such file or corpus program")
    try:
        return text, parse(text, corpus.splices())
    except ParseError as err:
        raise BadProgram(f"{ref}:{err}") from None


def outcome_doc(o: Outcome) -> dict[str, Any]:
    kind = "Value" if isinstance(o, Returned) else type(o).__name__
    return {"kind": kind, "text": describe(o, show_value)}


def _default_fuel() -> int:
    raw = os.environ.get("HITREE_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"HITREE_FUEL must be an integer, got {raw!r}") from None


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


# -- run ---------------------------------------------------------------------------


def cmd_run(args) -> int:
    try:
        _, e = load_program(args.program)
    except BadProgram as err:
        print(err, file=sys.stderr)
        return EXIT_BAD_PROGRAM
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    outcome, state = run_program(e, fuel=fuel, scan_cap=args.scan_cap)
    if args.json:
        doc = {"program": args.program, "fuel": fuel, "steps": fuel - state.fuel, "outcome": outcome_doc(outcome)}
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(describe(outcome, show_value))
    if isinstance(outcome, Returned):
        return EXIT_OK
    if isinstance(outcome, Failure):
        return EXIT_FAILURE
    assert isinstance(outcome, (FuelExhausted, Deadlock, InterpreterError))
    return EXIT_ERROR


# -- explore -------------------------------------------------------------------------


def _trace_doc(program: str, source: str, bounds: dict, query: str, result, entries) -> dict:
    return {
        "schema": TRACE_SCHEMA,
        "version": TRACE_VERSION,
        "program": program,
        "source": source,
        "bounds": bounds,
        "query": query,
        "exhausted": result.exhausted,
        "expanded": result.expanded,
        "outcomes": [
            {"outcome": outcome_doc(o), "choices": [c.to_dict() for c in trace]} for o, trace in entries
        ],
    }


def cmd_explore(args) -> int:
    if args.replay:
        return _replay(args)
    if args.program is None:
        print("explore: a program is required unless --replay is given", file=sys.stderr)
        return EXIT_BAD_PROGRAM
    try:
        source, e = load_program(args.program)
    except BadProgram as err:
        print(err, file=sys.stderr)
        return EXIT_BAD_PROGRAM
    bounds = {"max_depth": args.max_depth, "max_branches": args.max_branches, "enum_locs": args.enum_locs}
    result = explore_program(e, **bounds)
    ordered = sorted(result.outcomes.items(), key=lambda kv: (len(kv[1]), describe(kv[0], show_value)))

    if args.query == "any-failure":
        found, trace = exists_outcome(result, lambda o: isinstance(o, Failure))
        entries = [(o, t) for o, t in ordered if isinstance(o, Failure) and t == trace][:1] if found else []
        code = EXIT_FAILURE if found else (EXIT_INCONCLUSIVE if result.exhausted else EXIT_OK)
        verdict = "found" if found else ("inconclusive" if result.exhausted else "none")
    else:
        entries = ordered
        if args.query == "value-set":
            entries = [(o, t) for o, t in ordered if isinstance(o, Returned)]
        code = EXIT_INCONCLUSIVE if result.exhausted else EXIT_OK
        verdict = None

    doc = _trace_doc(args.program, source, bounds, args.query, result, entries)
    if verdict is not None:
        doc["failure"] = verdict
    if args.json:
        print(json.dumps(doc, indent=2, ensure_ascii=False))
        return code

    for entry in doc["outcomes"]:
        print(f"{entry['outcome']['text']}  [{len(entry['choices'])} choices]")
    print(f"exhausted: {str(result.exhausted).lower()}  expanded: {result.expanded}")
    if verdict == "found":
        print("failure reachable; shortest witness:")
        for c in doc["outcomes"][0]["choices"]:
            print(f"  step {c['step']}: {c['effect']} branch {c['branch']}  {c['note']}")
    elif verdict is not None:
        print(f"failure: {verdict}")
    return code


def _replay(args) -> int:
    try:
        doc = json.loads(Path(args.replay).read_text(encoding="utf-8"))
    except (OSError, ValueError) as err:
        print(f"cannot read trace file: {err}", file=sys.stderr)
        return EXIT_BAD_PROGRAM
    if doc.get("schema") != TRACE_SCHEMA or doc.get("version") != TRACE_VERSION:
        print("not a trace document of a supported version", file=sys.stderr)
        return EXIT_BAD_PROGRAM
    try:
        if args.program is not None:
            _, e = load_program(args.program)
        else:
            _, e = load_program(doc["program"], doc.get("source"))
    except BadProgram as err:
        print(err, file=sys.stderr)
        return EXIT_BAD_PROGRAM

    b = doc["bounds"]
    bounds = ExploreBounds(max_depth=b["max_depth"], max_branches=b["max_branches"])
    handler = explore_handler(b["enum_locs"])
    mismatches = 0
    for entry in doc["outcomes"]:
        expected = entry["outcome"]["text"]
        trace = [Choice.from_dict(c) for c in entry["choices"]]
        try:
            got = replay(denote(e), handler, trace, initial_state(), bounds)
            text = describe(got, show_value) if got is not None else "pruned"
        except ReplayMismatch as err:
            text = f"mismatch: {err}"
        ok = text == expected
        mismatches += not ok
        print(f"{'ok' if ok else 'DIFFERS'}  {expected}" + ("" if ok else f"  (replayed: {text})"))
    print(f"replayed {len(doc['outcomes'])} trace(s), {mismatches} mismatch(es)")
    return EXIT_OK if mismatches == 0 else EXIT_FAILURE


# -- check / corpus ------------------------------------------------------------------


def cmd_check(args) -> int:
    try:
        _, e = load_program(args.program)
    except BadProgram as err:
        print(err, file=sys.stderr)
        return EXIT_BAD_PROGRAM
    print(show_expr(e))
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.list:
        for name in corpus.names():
            print(name)
        return EXIT_OK
    reports = corpus.check_corpus(only=args.names or None)
    bad = 0
    for r in reports:
        if r.ok:
            print(f"ok    {r.name:10}  eval: {r.eval_outcome[:60]}")
        else:
            bad += 1
            print(f"FAIL  {r.name:10}")
            for p in r.problems:
                print(f"        {p}")
    print(f"{len(reports) - bad}/{len(reports)} programs match")
    return EXIT_OK if bad == 0 else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hitrees", description="Run and explore programs as interaction trees.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate deterministically (round-robin, smallest free location)")
    run.add_argument("program", help=".lpc file or corpus program name")
    run.add_argument("--fuel", type=_positive, default=None, help="step budget (default: $HITREE_FUEL or 1000000)")
    run.add_argument("--scan-cap", type=_positive, default=1 << 16, help="largest location tried when allocating")
    run.add_argument("--json", action="store_true", help="print a JSON document")
    run.set_defaults(func=cmd_run)

    ex = sub.add_parser("explore", help="enumerate all schedules and allocations")
    ex.add_argument("program", nargs="?", help=".lpc file or corpus program name")
    ex.add_argument("--max-depth", type=_positive, default=10_000)
    ex.add_argument("--max-branches", type=_positive, default=1_000_000)
    ex.add_argument("--enum-locs", type=_positive, default=16, help="locations considered by each allocation")
    ex.add_argument("--query", choices=["any-failure", "value-set", "all-outcomes"], default="all-outcomes")
    ex.add_argument("--replay", metavar="FILE", help="replay the traces of a JSON trace document")
    ex.add_argument("--json", action="store_true", help="print the trace document as JSON")
    ex.set_defaults(func=cmd_explore)

    ck = sub.add_parser("check", help="parse a program and print its syntax tree")
    ck.add_argument("program")
    ck.set_defaults(func=cmd_check)

    cp = sub.add_parser("corpus", help="check the bundled programs against their recorded outcomes")
    cp.add_argument("names", nargs="*")
    cp.add_argument("--list", action="store_true", help="only list the program names")
    cp.set_defaults(func=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
