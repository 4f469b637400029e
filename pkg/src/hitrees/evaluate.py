"""Deterministic execution of trees.

A handler turns one effect node into the next tree to run::

    handler.handle(input, k, state) -> (tree, state)

:func:`sum_handler` and :func:`unfold_handler` lift handlers for the parts
of a composite effect to the whole.  :func:`evaluate` runs the loop,
spending one unit of fuel per handled node.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from typing import Any

from .effects import Effect, EffectSig, Inl, Inr, RecursiveSig, SumSig, UnfoldWitness
from .outcome import (
    ErrorKind,
    Failure,
    FuelExhausted,
    HandlerFault,
    InterpreterError,
    Outcome,
    Returned,
)
from .scheduling import schedule, suspend_current
from .state import HandlerState
from .stdlib import (
    CallccI,
    CallccO,
    DemonicI,
    DemonicO,
    FailI,
    FId,
    KId,
    RecI,
    RecO,
    StateI,
    StateO,
    absurd,
)
from .tree import HITree, Impure, Pure, Unreachable, bind, precompose

__all__ = [
    "DEFAULT_SCAN_CAP",
    "EvalHandler",
    "MissingHandler",
    "SimpleEvalHandler",
    "callcc_handler",
    "conc_handler",
    "default_handler",
    "demonic_handler",
    "evaluate",
    "fail_handler",
    "rec_handler",
    "smallest_natural",
    "state_handler",
    "sum_handler",
    "unfold_handler",
]

DEFAULT_SCAN_CAP = 1 << 16


class MissingHandler(LookupError):
    pass


class EvalHandler:
    """Interprets the inputs of one effect.  Subclasses override :meth:`handle`."""

    def handle(self, i: Any, k: Callable[[Any], HITree], s: HandlerState) -> tuple[HITree, HandlerState]:
        raise NotImplementedError


class SimpleEvalHandler(EvalHandler):
    """A handler that only maps an input to an output and resumes ``k``."""

    def respond(self, i: Any, s: HandlerState) -> tuple[Any, HandlerState]:
        raise NotImplementedError

    def handle(self, i, k, s):
        o, s = self.respond(i, s)
        return k(o), s


class _Sum(EvalHandler):
    def __init__(self, left: EvalHandler, right: EvalHandler):
        self.left = left
        self.right = right

    def handle(self, i, k, s):
        if isinstance(i, Inl):
            return self.left.handle(i.value, precompose(k, Inl), s)
        if isinstance(i, Inr):
            return self.right.handle(i.value, precompose(k, Inr), s)
        raise TypeError(f"input of a sum effect must be Inl or Inr: {i!r}")


def sum_handler(left: EvalHandler, right: EvalHandler) -> EvalHandler:
    return _Sum(left, right)


class _Unfold(EvalHandler):
    def __init__(self, witness: UnfoldWitness, inner: EvalHandler):
        self.witness = witness
        self.inner = inner

    def handle(self, i, k, s):
        # outputs of the fixpoint and its unfolding coincide
        return self.inner.handle(self.witness.inv_i(i), k, s)


def unfold_handler(witness: UnfoldWitness, inner: EvalHandler) -> EvalHandler:
    return _Unfold(witness, inner)


class _State(SimpleEvalHandler):
    def respond(self, i, s):
        if isinstance(i, StateI.Get):
            return StateO.Get(s.heap), s
        if isinstance(i, StateI.Set):
            return StateO.Set(), s.replace(heap=i.value)
        raise TypeError(f"not a state input: {i!r}")


def state_handler() -> EvalHandler:
    return _State()


class _Fail(EvalHandler):
    def handle(self, i, k, s):
        if not isinstance(i, FailI.Fail):
            raise TypeError(f"not a failure input: {i!r}")
        raise HandlerFault(Failure(i.reason))


def fail_handler() -> EvalHandler:
    return _Fail()


def smallest_natural(scan_cap: int = DEFAULT_SCAN_CAP) -> Callable[[Callable[[Any], bool], HandlerState], Any]:
    """Chooser returning the least ``n < scan_cap`` satisfying the predicate."""

    def chooser(pred, s):
        for n in range(scan_cap):
            if pred(n):
                return n
        raise HandlerFault(
            InterpreterError(ErrorKind.NO_CHOICE, f"no value below {scan_cap} satisfies the predicate")
        )

    return chooser


class _Demonic(SimpleEvalHandler):
    def __init__(self, chooser):
        self.chooser = chooser

    def respond(self, i, s):
        if not isinstance(i, DemonicI.Choose):
            raise TypeError(f"not a choice input: {i!r}")
        return DemonicO.Choose(self.chooser(i.pred, s)), s


def demonic_handler(chooser=None) -> EvalHandler:
    """``chooser(pred, state)`` must return a value satisfying ``pred``."""
    return _Demonic(chooser or smallest_natural())


def invalid_fid(fid) -> HandlerFault:
    return HandlerFault(InterpreterError(ErrorKind.INVALID_FIXPOINT_ID, f"no fixpoint {fid.index}"))


def invalid_kid(kid) -> HandlerFault:
    return HandlerFault(InterpreterError(ErrorKind.INVALID_CONTINUATION_ID, f"no continuation {kid.index}"))


class _Rec(EvalHandler):
    def handle(self, i, k, s):
        if isinstance(i, RecI.Fix):
            f = i.body(FId(len(s.fixpoints)))
            s = s.replace(fixpoints=s.fixpoints + (f,))
            return bind(f(i.arg), precompose(k, RecO.Fix)), s
        if isinstance(i, RecI.Call):
            if not 0 <= i.fid.index < len(s.fixpoints):
                raise invalid_fid(i.fid)
            f = s.fixpoints[i.fid.index]
            return bind(f(i.arg), precompose(k, RecO.Call)), s
        raise TypeError(f"not a recursion input: {i!r}")


def rec_handler() -> EvalHandler:
    return _Rec()


class _Callcc(EvalHandler):
    def handle(self, i, k, s):
        if isinstance(i, CallccI.Callcc):
            kid = KId(len(s.continuations))
            s = s.replace(continuations=s.continuations + (precompose(k, CallccO.Callcc),))
            return bind(i.body(kid), absurd), s
        if isinstance(i, CallccI.Throw):
            if not 0 <= i.kid.index < len(s.continuations):
                raise invalid_kid(i.kid)
            return s.continuations[i.kid.index](i.value), s
        raise TypeError(f"not a call/cc input: {i!r}")


def callcc_handler() -> EvalHandler:
    return _Callcc()


class _Conc(EvalHandler):
    def __init__(self, start_offset: int = 1):
        self.start_offset = start_offset

    def handle(self, i, k, s):
        return schedule(suspend_current(i, k, s), self.start_offset)


def conc_handler(start_offset: int = 1) -> EvalHandler:
    """Round-robin scheduler; the scan starts ``start_offset`` after the current thread."""
    return _Conc(start_offset)


_FACTORIES: dict[str, Callable[[], EvalHandler]] = {
    "State": state_handler,
    "Fail": fail_handler,
    "Rec": rec_handler,
    "Callcc": callcc_handler,
    "Conc": conc_handler,
}


def default_handler(
    effect: Effect,
    *,
    chooser=None,
    overrides: Mapping[EffectSig, EvalHandler] | None = None,
) -> EvalHandler:
    """Assemble handlers for every leaf of ``effect``.

    Standard effects get the handlers of this module; anything else must be
    given in ``overrides``.
    """
    overrides = overrides or {}
    if isinstance(effect, SumSig):
        return sum_handler(
            default_handler(effect.left, chooser=chooser, overrides=overrides),
            default_handler(effect.right, chooser=chooser, overrides=overrides),
        )
    if isinstance(effect, RecursiveSig):
        return unfold_handler(
            UnfoldWitness(effect), default_handler(effect.pre, chooser=chooser, overrides=overrides)
        )
    if effect in overrides:
        return overrides[effect]
    if effect.name == "Demonic":
        return demonic_handler(chooser)
    try:
        return _FACTORIES[effect.name]()
    except KeyError:
        raise MissingHandler(f"no handler for effect {effect}") from None


def evaluate(
    t: HITree,
    handler: EvalHandler | Effect,
    s0: HandlerState | None = None,
) -> tuple[Outcome, HandlerState]:
    """Run ``t`` to an outcome.

    ``handler`` may also be an effect, in which case :func:`default_handler`
    builds one.  ``s0.fuel`` bounds the number of handled effect nodes.
    """
    if not isinstance(handler, EvalHandler):
        handler = default_handler(handler)
    s = s0 if s0 is not None else HandlerState()
    fuel = s.fuel
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    outcome: Outcome
    while True:
        if isinstance(t, Pure):
            outcome = Returned(t.value)
            break
        if isinstance(t, Unreachable):
            outcome = InterpreterError(ErrorKind.UNREACHABLE_HIT, "unreachable computation")
            break
        if not isinstance(t, Impure):
            raise TypeError(f"not a HITree: {t!r}")
        if fuel == 0:
            outcome = FuelExhausted()
            break
        try:
            t, s = handler.handle(t.input, t.k, s)
        except HandlerFault as fault:
            fuel -= 1
            outcome = fault.outcome
            break
        fuel -= 1
    return outcome, s.replace(fuel=fuel)
