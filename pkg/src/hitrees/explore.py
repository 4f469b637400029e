"""Bounded exploration of every execution of a tree.

An explore handler maps one effect node to the list of configurations it
can step to::

    handler.successors(input, k, state) -> [Branch(effect, note, tree, state), ...]

Scheduling and demonic choice branch; the other standard effects have one
successor.  An empty list means the step is impossible and the branch is
dropped.  A handler may also end a branch with a terminal outcome by raising
:class:`~hitrees.outcome.HandlerFault` (failure, deadlock).

:func:`explore` runs a breadth-first search from the initial configuration
and collects the terminal outcomes, each with the shortest trace of choices
leading to it.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from . import scheduling
from .effects import Effect, EffectSig, Inl, Inr, RecursiveSig, SumSig, UnfoldWitness
from .evaluate import (
    EvalHandler,
    MissingHandler,
    callcc_handler,
    fail_handler,
    rec_handler,
    smallest_natural,
    state_handler,
)
from .outcome import DepthExceeded, ErrorKind, HandlerFault, InterpreterError, Outcome, Returned
from .state import HandlerState
from .stdlib import DemonicI, DemonicO
from .tree import HITree, Impure, Pure, Unreachable, precompose

__all__ = [
    "Branch",
    "Choice",
    "ExploreBounds",
    "ExploreHandler",
    "ExploreResult",
    "MissingEnumerator",
    "ReplayMismatch",
    "default_explore_handler",
    "deterministic",
    "eval_chooser_enumerator",
    "exists_outcome",
    "explore",
    "explore_conc_handler",
    "explore_demonic_handler",
    "explore_sum_handler",
    "explore_unfold_handler",
    "replay",
]

log = logging.getLogger(__name__)


class MissingEnumerator(LookupError):
    pass


class ReplayMismatch(Exception):
    pass


class Branch(NamedTuple):
    effect: str
    note: str
    tree: HITree
    state: HandlerState


@dataclass(frozen=True)
class Choice:
    """One nondeterministic step: at ``step`` the ``branch``-th successor was taken."""

    step: int
    effect: str
    branch: int
    note: str = field(default="", compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {"step": self.step, "effect": self.effect, "branch": self.branch, "note": self.note}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Choice:
        return cls(int(d["step"]), str(d["effect"]), int(d["branch"]), str(d.get("note", "")))


Trace = tuple[Choice, ...]


@dataclass(frozen=True)
class ExploreBounds:
    max_depth: int = 10_000
    max_branches: int = 1_000_000
    demonic_enumerators: Mapping[EffectSig, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.max_depth <= 0 or self.max_branches <= 0:
            raise ValueError("exploration bounds must be positive")


@dataclass
class ExploreResult:
    outcomes: dict[Outcome, Trace]
    exhausted: bool
    expanded: int = 0

    def values(self) -> set[Any]:
        return {o.value for o in self.outcomes if isinstance(o, Returned)}


# -- handlers ------------------------------------------------------------------


class ExploreHandler:
    def successors(self, i: Any, k: Callable[[Any], HITree], s: HandlerState) -> list[Branch]:
        raise NotImplementedError


class _Sum(ExploreHandler):
    def __init__(self, left: ExploreHandler, right: ExploreHandler):
        self.left = left
        self.right = right

    def successors(self, i, k, s):
        if isinstance(i, Inl):
            return self.left.successors(i.value, precompose(k, Inl), s)
        if isinstance(i, Inr):
            return self.right.successors(i.value, precompose(k, Inr), s)
        raise TypeError(f"input of a sum effect must be Inl or Inr: {i!r}")


def explore_sum_handler(left: ExploreHandler, right: ExploreHandler) -> ExploreHandler:
    return _Sum(left, right)


class _Unfold(ExploreHandler):
    def __init__(self, witness: UnfoldWitness, inner: ExploreHandler):
        self.witness = witness
        self.inner = inner

    def successors(self, i, k, s):
        return self.inner.successors(self.witness.inv_i(i), k, s)


def explore_unfold_handler(witness: UnfoldWitness, inner: ExploreHandler) -> ExploreHandler:
    return _Unfold(witness, inner)


_PRUNED = (ErrorKind.INVALID_FIXPOINT_ID, ErrorKind.INVALID_CONTINUATION_ID)


class _Deterministic(ExploreHandler):
    def __init__(self, name: str, inner: EvalHandler):
        self.name = name
        self.inner = inner

    def successors(self, i, k, s):
        try:
            tree, s2 = self.inner.handle(i, k, s)
        except HandlerFault as fault:
            o = fault.outcome
            if isinstance(o, InterpreterError) and o.kind in _PRUNED:
                # an invalid identifier admits no execution
                return []
            raise
        return [Branch(self.name, "", tree, s2)]


def deterministic(name: str, handler: EvalHandler) -> ExploreHandler:
    """Single-successor explore handler mirroring an eval handler."""
    return _Deterministic(name, handler)


class _Conc(ExploreHandler):
    def __init__(self, round_robin: bool, start_offset: int):
        self.round_robin = round_robin
        self.start_offset = start_offset

    def successors(self, i, k, s):
        s = scheduling.suspend_current(i, k, s)
        if self.round_robin:
            tree, s2 = scheduling.schedule(s, self.start_offset)
            return [Branch("Conc", f"run thread {s2.current}", tree, s2)]
        return [
            Branch("Conc", f"run thread {tid}" if tid >= 0 else "all threads done", tree, s2)
            for tid, tree, s2 in scheduling.successors(s)
        ]


def explore_conc_handler(*, round_robin: bool = False, start_offset: int = 1) -> ExploreHandler:
    """One successor per continuable thread, or only the round-robin pick."""
    return _Conc(round_robin, start_offset)


def _candidates(enumerator, pred, s) -> Iterable[Any]:
    if callable(enumerator):
        return enumerator(pred, s)
    return enumerator


class _Demonic(ExploreHandler):
    def __init__(self, enumerator):
        self.enumerator = enumerator

    def successors(self, i, k, s):
        if not isinstance(i, DemonicI.Choose):
            raise TypeError(f"not a choice input: {i!r}")
        return [
            Branch("Demonic", f"choose {x!r}", k(DemonicO.Choose(x)), s)
            for x in _candidates(self.enumerator, i.pred, s)
            if i.pred(x)
        ]


def explore_demonic_handler(enumerator) -> ExploreHandler:
    """Branch over the candidates satisfying the choice predicate.

    ``enumerator`` is a finite iterable of candidates or a function
    ``(pred, state) -> iterable``.
    """
    return _Demonic(enumerator)


def eval_chooser_enumerator(chooser=None):
    """Enumerator offering only the value the evaluator would pick."""
    chooser = chooser or smallest_natural()
    return lambda pred, s: [chooser(pred, s)]


_DETERMINISTIC = {
    "State": state_handler,
    "Fail": fail_handler,
    "Rec": rec_handler,
    "Callcc": callcc_handler,
}


def default_explore_handler(
    effect: Effect,
    enumerators: Mapping[EffectSig, Any] | None = None,
    *,
    round_robin: bool = False,
    start_offset: int = 1,
    overrides: Mapping[EffectSig, ExploreHandler] | None = None,
) -> ExploreHandler:
    """Assemble explore handlers for every leaf of ``effect``.

    Every demonic leaf needs an enumerator; :class:`MissingEnumerator` is
    raised otherwise.
    """
    enumerators = enumerators or {}
    overrides = overrides or {}

    def build(e: Effect) -> ExploreHandler:
        if isinstance(e, SumSig):
            return explore_sum_handler(build(e.left), build(e.right))
        if isinstance(e, RecursiveSig):
            return explore_unfold_handler(UnfoldWitness(e), build(e.pre))
        if e in overrides:
            return overrides[e]
        if e.name == "Demonic":
            if e not in enumerators:
                raise MissingEnumerator(f"no enumerator for {e}")
            return explore_demonic_handler(enumerators[e])
        if e.name == "Conc":
            return explore_conc_handler(round_robin=round_robin, start_offset=start_offset)
        if e.name in _DETERMINISTIC:
            return deterministic(e.name, _DETERMINISTIC[e.name]())
        raise MissingHandler(f"no explore handler for effect {e}")

    return build(effect)


# -- search --------------------------------------------------------------------


def _expand(handler: ExploreHandler, t: Impure, s: HandlerState) -> list[Branch] | Outcome:
    try:
        return handler.successors(t.input, t.k, s)
    except HandlerFault as fault:
        return fault.outcome


def explore(
    t: HITree,
    handler: ExploreHandler | Effect,
    s0: HandlerState | None = None,
    bounds: ExploreBounds | None = None,
    *,
    on_step: Callable[[HITree, HandlerState, Trace], None] | None = None,
) -> ExploreResult:
    """Breadth-first search over all executions of ``t``.

    ``handler`` may be an effect, in which case the default explore handlers
    are used with the enumerators from ``bounds``.  The result records each
    distinct terminal outcome with the first (shortest) trace reaching it.
    ``exhausted`` is set when a depth or branch bound cut the search short;
    paths cut by the depth bound are reported as :class:`DepthExceeded`.
    """
    bounds = bounds or ExploreBounds()
    if not isinstance(handler, ExploreHandler):
        handler = default_explore_handler(handler, bounds.demonic_enumerators)
    s0 = s0 if s0 is not None else HandlerState()

    outcomes: dict[Outcome, Trace] = {}
    exhausted = False
    expanded = 0
    frontier: deque[tuple[HITree, HandlerState, Trace, int]] = deque([(t, s0, (), 0)])

    def record(o: Outcome, trace: Trace) -> None:
        outcomes.setdefault(o, trace)

    while frontier:
        t, s, trace, depth = frontier.popleft()
        if on_step is not None:
            on_step(t, s, trace)
        if isinstance(t, Pure):
            record(Returned(t.value), trace)
            continue
        if isinstance(t, Unreachable):
            continue
        if depth >= bounds.max_depth:
            record(DepthExceeded(), trace)
            exhausted = True
            continue
        if expanded >= bounds.max_branches:
            exhausted = True
            break
        expanded += 1
        step = _expand(handler, t, s)
        if not isinstance(step, list):
            record(step, trace)
            continue
        if len(step) == 1:
            b = step[0]
            frontier.append((b.tree, b.state, trace, depth + 1))
            continue
        for idx, b in enumerate(step):
            choice = Choice(depth, b.effect, idx, b.note)
            frontier.append((b.tree, b.state, trace + (choice,), depth + 1))

    log.debug("explored %d configurations, %d outcomes", expanded, len(outcomes))
    return ExploreResult(outcomes, exhausted, expanded)


def exists_outcome(
    result: ExploreResult, pred: Callable[[Outcome], bool]
) -> tuple[bool, Trace | None]:
    """Is some recorded outcome accepted by ``pred``?  Returns its trace too.

    Among matching outcomes the one with the shortest trace is returned.
    """
    best: tuple[Outcome, Trace] | None = None
    for o, trace in result.outcomes.items():
        if pred(o) and (best is None or len(trace) < len(best[1])):
            best = (o, trace)
    if best is None:
        return False, None
    return True, best[1]


def replay(
    t: HITree,
    handler: ExploreHandler | Effect,
    trace: Iterable[Choice],
    s0: HandlerState | None = None,
    bounds: ExploreBounds | None = None,
) -> Outcome | None:
    """Follow ``trace`` through the explorer and return where it ends.

    Returns None if the path reaches an impossible (pruned) configuration.
    Raises :class:`ReplayMismatch` if the trace does not fit the program.
    """
    bounds = bounds or ExploreBounds()
    if not isinstance(handler, ExploreHandler):
        handler = default_explore_handler(handler, bounds.demonic_enumerators)
    s = s0 if s0 is not None else HandlerState()
    pending = deque(trace)
    depth = 0
    while True:
        if isinstance(t, Pure):
            outcome: Outcome | None = Returned(t.value)
            break
        if isinstance(t, Unreachable):
            outcome = None
            break
        if depth >= bounds.max_depth:
            outcome = DepthExceeded()
            break
        step = _expand(handler, t, s)
        if not isinstance(step, list):
            outcome = step
            break
        if not step:
            outcome = None
            break
        if len(step) == 1:
            b = step[0]
        else:
            if not pending:
                raise ReplayMismatch(f"trace ended before the choice at step {depth}")
            c = pending.popleft()
            if c.step != depth or c.effect != step[0].effect or not 0 <= c.branch < len(step):
                raise ReplayMismatch(f"choice {c} does not match step {depth} with {len(step)} branches")
            b = step[c.branch]
        t, s = b.tree, b.state
        depth += 1
    if pending:
        raise ReplayMismatch(f"{len(pending)} unused choices left in the trace")
    return outcome
