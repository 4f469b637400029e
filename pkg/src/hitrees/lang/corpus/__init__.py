"""Bundled example programs and their expected outcomes.

The corpus holds the awkward example (``awk``), the two contexts that
break it (``c_callcc`` and ``c_conc``), a lost-update race, and one small
program per effect.  Any program may splice another one by name with
``$name``.

:func:`check_corpus` runs every program through both interpreters and
compares the results with ``expectations.json``.  It is a regression
check: changing the scheduler or the allocator shows up as a mismatch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ...outcome import describe
from ..denote import explore_program, run_program
from ..parser import parse
from ..syntax import Expr, show_value

__all__ = ["CorpusReport", "check_corpus", "expectations", "load", "names", "source", "splices"]


def _files():
    return resources.files(__name__)


def names() -> list[str]:
    return sorted(p.name[:-4] for p in _files().iterdir() if p.name.endswith(".lpc"))


def source(name: str) -> str:
    path = _files() / f"{name}.lpc"
    if not path.is_file():
        raise KeyError(name)
    return path.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> Expr:
    return parse(source(name), _Splices())


class _Splices(dict):
    """Splice table that parses corpus programs on first use."""

    def __missing__(self, key: str) -> Expr:
        try:
            return load(key)
        except KeyError:
            raise KeyError(key) from None


def splices() -> dict[str, Expr]:
    """A lazily filled splice table with every corpus program."""
    return _Splices()


def expectations() -> dict[str, dict]:
    return json.loads((_files() / "expectations.json").read_text(encoding="utf-8"))


def render(outcome) -> str:
    return describe(outcome, show_value)


@dataclass
class CorpusReport:
    name: str
    eval_outcome: str
    explore_outcomes: list[str]
    restricted_outcomes: list[str]
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def check_program(name: str, expected: dict, *, start_offset: int = 1, enum_locs: int = 16) -> CorpusReport:
    e = load(name)
    outcome, _ = run_program(e, start_offset=start_offset)
    full = explore_program(e, enum_locs=enum_locs)
    restricted = explore_program(e, restricted=True, start_offset=start_offset)
    report = CorpusReport(
        name,
        render(outcome),
        sorted(render(o) for o in full.outcomes),
        sorted(render(o) for o in restricted.outcomes),
    )
    problems = report.problems
    if "eval" in expected and report.eval_outcome != expected["eval"]:
        problems.append(f"eval gave {report.eval_outcome!r}, expected {expected['eval']!r}")
    if "explore" in expected and report.explore_outcomes != sorted(expected["explore"]):
        problems.append(f"explore gave {report.explore_outcomes}, expected {sorted(expected['explore'])}")
    if "explore_count" in expected and len(report.explore_outcomes) != expected["explore_count"]:
        problems.append(
            f"explore gave {len(report.explore_outcomes)} outcomes, expected {expected['explore_count']}"
        )
    if full.exhausted:
        problems.append("explore hit its bounds")
    if report.restricted_outcomes != [report.eval_outcome]:
        problems.append(f"restricted explore gave {report.restricted_outcomes}, eval gave {report.eval_outcome!r}")
    if report.eval_outcome not in report.explore_outcomes:
        problems.append("eval outcome missing from explore")
    return report


def check_corpus(*, start_offset: int = 1, only: list[str] | None = None) -> list[CorpusReport]:
    table = expectations()
    selected = only or names()
    reports = []
    for name in selected:
        if name not in table:
            reports.append(CorpusReport(name, "", [], [], [f"no expectation recorded for {name}"]))
            continue
        reports.append(check_program(name, table[name], start_offset=start_offset))
    return reports
