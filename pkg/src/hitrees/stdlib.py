"""Standard effects and their smart triggers.

Each effect ``Foo`` comes as an input namespace ``FooI`` and an output
namespace ``FooO`` with one dataclass per operation, a signature
constructor ``foo_effect(...)`` and one trigger function per operation.  A
trigger takes the witness for the ambient effect, fires the injected input
and casts the output back: the matching output variant becomes ``Pure`` and
anything else becomes ``Unreachable``.

Three conventions keep the triggers small:

* unit arguments are omitted (``get(w)`` rather than ``get(w, ())``);
* operations whose output is uninhabited (``fail``, ``kill``, ``throw``)
  produce trees usable at any result type;
* computations passed as inputs (``par``, ``fix``, ``callcc``) are stored
  directly in the input value.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from .effects import EffectSig, Fn, Operation, Prod, SubeffectWitness, Tree
from .tree import UNREACHABLE, HITree, Pure, bind, trigger

__all__ = [
    "CallccI",
    "CallccO",
    "ConcI",
    "ConcO",
    "DemonicI",
    "DemonicO",
    "FId",
    "FailI",
    "FailO",
    "KId",
    "RecI",
    "RecO",
    "StateI",
    "StateO",
    "absurd",
    "call",
    "callcc",
    "callcc_effect",
    "choose",
    "conc_effect",
    "demonic_effect",
    "fail",
    "fail_effect",
    "fix",
    "get",
    "kill",
    "par",
    "rec",
    "rec_effect",
    "set_",
    "state_effect",
    "throw",
    "yield_",
]


class _Uninhabited:
    """Base for output variants of operations that never return."""

    def __init__(self, *args, **kwargs):
        raise TypeError(f"{type(self).__qualname__} has no values")


def absurd(x: Any) -> HITree:
    raise TypeError(f"received a value of an empty type: {x!r}")


def _cast(cls: type, extract: Callable[[Any], Any] = lambda o: o.value):
    def k(o):
        return Pure(extract(o)) if isinstance(o, cls) else UNREACHABLE

    return k


def _never(o: Any) -> HITree:
    # Every constructible output is foreign to an operation with empty output.
    return UNREACHABLE


@dataclass(frozen=True)
class FId:
    index: int


@dataclass(frozen=True)
class KId:
    index: int


# -- failure -------------------------------------------------------------------


class FailI:
    @dataclass(frozen=True)
    class Fail:
        # Diagnostic only; handlers must not branch on it.
        reason: str = field(default="", compare=False)


class FailO:
    class Fail(_Uninhabited):
        pass


_FAIL = EffectSig("Fail", (Operation("fail", FailI.Fail, FailO.Fail, (), "empty"),))


def fail_effect() -> EffectSig:
    return _FAIL


def fail(w: SubeffectWitness, reason: str = "") -> HITree:
    return bind(trigger(w, FailI.Fail(reason)), _never)


# -- state ---------------------------------------------------------------------


class StateI:
    @dataclass(frozen=True)
    class Get:
        pass

    @dataclass(frozen=True)
    class Set:
        value: Any


class StateO:
    @dataclass(frozen=True)
    class Get:
        value: Any

    @dataclass(frozen=True)
    class Set:
        pass


def state_effect(state: Any = "S") -> EffectSig:
    return EffectSig(
        "State",
        (
            Operation("get", StateI.Get, StateO.Get, (), state),
            Operation("set", StateI.Set, StateO.Set, (state,), "unit"),
        ),
        (state,),
    )


def get(w: SubeffectWitness) -> HITree:
    return bind(trigger(w, StateI.Get()), _cast(StateO.Get))


def set_(w: SubeffectWitness, value: Any) -> HITree:
    return bind(trigger(w, StateI.Set(value)), _cast(StateO.Set, lambda o: None))


# -- demonic choice ------------------------------------------------------------


class DemonicI:
    @dataclass(frozen=True)
    class Choose:
        pred: Callable[[Any], bool]


class DemonicO:
    @dataclass(frozen=True)
    class Choose:
        value: Any


def demonic_effect(domain: Any = "Nat") -> EffectSig:
    return EffectSig(
        "Demonic",
        (Operation("choose", DemonicI.Choose, DemonicO.Choose, (Fn((domain,), "bool"),), domain),),
        (domain,),
    )


def choose(w: SubeffectWitness, pred: Callable[[Any], bool]) -> HITree:
    """Pick some value satisfying ``pred``; the pick is re-checked here."""

    def k(o):
        if isinstance(o, DemonicO.Choose) and pred(o.value):
            return Pure(o.value)
        return UNREACHABLE

    return bind(trigger(w, DemonicI.Choose(pred)), k)


# -- recursion -----------------------------------------------------------------


class RecI:
    @dataclass(frozen=True)
    class Fix:
        body: Callable[[FId], Callable[[Any], HITree]]
        arg: Any

    @dataclass(frozen=True)
    class Call:
        fid: FId
        arg: Any


class RecO:
    @dataclass(frozen=True)
    class Fix:
        value: Any

    @dataclass(frozen=True)
    class Call:
        value: Any


def rec_effect(arg: Any, res: Any, effect: Any) -> EffectSig:
    return EffectSig(
        "Rec",
        (
            Operation("fix", RecI.Fix, RecO.Fix, (Fn(("FId", arg), Tree(effect, res)), arg), res),
            Operation("call", RecI.Call, RecO.Call, ("FId", arg), res),
        ),
        (arg, res, effect),
    )


def fix(w: SubeffectWitness, body: Callable[[FId], Callable[[Any], HITree]], arg: Any) -> HITree:
    return bind(trigger(w, RecI.Fix(body, arg)), _cast(RecO.Fix))


def call(w: SubeffectWitness, fid: FId, arg: Any) -> HITree:
    return bind(trigger(w, RecI.Call(fid, arg)), _cast(RecO.Call))


def rec(
    w: SubeffectWitness,
    f: Callable[[Callable[[Any], HITree]], Callable[[Any], HITree]],
) -> Callable[[Any], HITree]:
    """Recursion combinator: ``f`` receives the function being defined."""
    return lambda a: fix(w, lambda fid: f(lambda x: call(w, fid, x)), a)


# -- call/cc -------------------------------------------------------------------


class CallccI:
    @dataclass(frozen=True)
    class Callcc:
        body: Callable[[KId], HITree]

    @dataclass(frozen=True)
    class Throw:
        value: Any
        kid: KId


class CallccO:
    @dataclass(frozen=True)
    class Callcc:
        value: Any

    class Throw(_Uninhabited):
        pass


def callcc_effect(value: Any, effect: Any) -> EffectSig:
    return EffectSig(
        "Callcc",
        (
            Operation("callcc", CallccI.Callcc, CallccO.Callcc, (Fn(("KId",), Tree(effect, "empty")),), value),
            Operation("throw", CallccI.Throw, CallccO.Throw, (value, "KId"), "empty"),
        ),
        (value, effect),
    )


def callcc(w: SubeffectWitness, body: Callable[[KId], HITree]) -> HITree:
    """Capture the continuation; ``body`` must end by throwing."""
    return bind(trigger(w, CallccI.Callcc(body)), _cast(CallccO.Callcc))


def throw(w: SubeffectWitness, value: Any, kid: KId) -> HITree:
    return bind(trigger(w, CallccI.Throw(value, kid)), _never)


# -- concurrency ---------------------------------------------------------------


class ConcI:
    @dataclass(frozen=True)
    class Par:
        left: HITree
        right: HITree

    @dataclass(frozen=True)
    class Kill:
        value: Any

    @dataclass(frozen=True)
    class Yield:
        pass


class ConcO:
    @dataclass(frozen=True)
    class Par:
        value: tuple

    class Kill(_Uninhabited):
        pass

    @dataclass(frozen=True)
    class Yield:
        pass


def conc_effect(value: Any, effect: Any) -> EffectSig:
    return EffectSig(
        "Conc",
        (
            Operation("par", ConcI.Par, ConcO.Par, (Tree(effect, "empty"), Tree(effect, "empty")), Prod((value, value))),
            Operation("kill", ConcI.Kill, ConcO.Kill, (value,), "empty"),
            Operation("yield", ConcI.Yield, ConcO.Yield, (), "unit"),
        ),
        (value, effect),
    )


def par(w: SubeffectWitness, left: HITree, right: HITree) -> HITree:
    """Run two threads (each ending in ``kill``) and return their values."""
    return bind(trigger(w, ConcI.Par(left, right)), _cast(ConcO.Par))


def kill(w: SubeffectWitness, value: Any) -> HITree:
    return bind(trigger(w, ConcI.Kill(value)), _never)


def yield_(w: SubeffectWitness) -> HITree:
    return bind(trigger(w, ConcI.Yield()), _cast(ConcO.Yield, lambda o: None))
