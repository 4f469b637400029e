"""Effect signatures and how they compose.

An effect is a pair of variant domains, inputs and outputs, with no static
link between a given input and the output it produces.  Effects are runtime
descriptors here, so composition and subeffect search can be run and tested
like any other code.

* :class:`EffectSig` is a leaf effect such as state or failure.
* :class:`SumSig` is the disjoint union ``left (+) right``.  Values of a sum
  are wrapped in :class:`Inl` / :class:`Inr`.
* :class:`RecursiveSig` is the fixpoint of a sum that mentions itself in
  its inputs (e.g. concurrency whose ``par`` takes trees of the whole
  effect).  Its inputs are wrapped in :class:`Closed`; its outputs are those
  of the unfolding, unchanged.

A :class:`SubeffectWitness` embeds a small effect into a bigger one.  It is
described by the path from the root of the big effect to the leaf:
``"L"``/``"R"`` for a sum side and ``"unfold"`` for a fixpoint.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Union

__all__ = [
    "Closed",
    "Effect",
    "EffectError",
    "EffectSig",
    "Fn",
    "Inl",
    "Inr",
    "Operation",
    "Prod",
    "RecursiveOutput",
    "RecursiveSig",
    "SubeffectWitness",
    "SumSig",
    "Tree",
    "UnfoldWitness",
    "WitnessAmbiguous",
    "WitnessNotFound",
    "fix_effect",
    "leaves",
    "resolve_witness",
    "sum_chain",
    "sum_effects",
    "witness_left",
    "witness_refl",
    "witness_right",
    "witness_unfold",
]


class EffectError(Exception):
    pass


class WitnessNotFound(EffectError, LookupError):
    pass


class WitnessAmbiguous(EffectError, LookupError):
    pass


class RecursiveOutput(EffectError, TypeError):
    pass


# -- payload kinds -------------------------------------------------------------
# A kind describes what an operation argument or result holds.  Plain strings
# name first-order domains ("Val", "Loc", "unit", "empty", ...).


@dataclass(frozen=True)
class Tree:
    """A computation over ``effect`` returning ``result``."""

    effect: Any
    result: Any


@dataclass(frozen=True)
class Fn:
    """A function from ``args`` to ``result``."""

    args: tuple
    result: Any


@dataclass(frozen=True)
class Prod:
    parts: tuple


def mentions(kind: Any, effect: Any) -> bool:
    if kind is effect:
        return True
    if isinstance(kind, Tree):
        return mentions(kind.effect, effect) or mentions(kind.result, effect)
    if isinstance(kind, Fn):
        return any(mentions(a, effect) for a in kind.args) or mentions(kind.result, effect)
    if isinstance(kind, Prod):
        return any(mentions(p, effect) for p in kind.parts)
    return False


# -- signatures ----------------------------------------------------------------


@dataclass(frozen=True)
class Operation:
    name: str
    input_type: type
    output_type: type
    args: tuple = ()
    result: Any = "unit"


@dataclass(frozen=True)
class EffectSig:
    name: str
    ops: tuple[Operation, ...]
    params: tuple = ()

    @property
    def input_domain(self) -> tuple[tuple[str, type], ...]:
        return tuple((op.name, op.input_type) for op in self.ops)

    @property
    def output_domain(self) -> tuple[tuple[str, type], ...]:
        return tuple((op.name, op.output_type) for op in self.ops)

    def op(self, name: str) -> Operation:
        for op in self.ops:
            if op.name == name:
                return op
        raise KeyError(name)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(_param_str(p) for p in self.params)})"


def _param_str(p: Any) -> str:
    if isinstance(p, RecursiveSig):
        return p.name
    return str(p)


@dataclass(frozen=True)
class SumSig:
    left: "Effect"
    right: "Effect"

    def __str__(self) -> str:
        return f"{self.left} (+) {self.right}"


class RecursiveSig:
    """Fixpoint of an effect body; equality is identity."""

    def __init__(self, name: str):
        self.name = name
        self.pre: Effect | None = None

    def __repr__(self) -> str:
        return f"RecursiveSig({self.name!r})"

    def __str__(self) -> str:
        return self.name


Effect = Union[EffectSig, SumSig, RecursiveSig]


@dataclass(frozen=True)
class Inl:
    value: Any


@dataclass(frozen=True)
class Inr:
    value: Any


@dataclass(frozen=True)
class Closed:
    """Input of a recursive effect: one input of its unfolding."""

    value: Any


def sum_effects(e1: Effect, e2: Effect) -> SumSig:
    return SumSig(e1, e2)


def sum_chain(*effects: Effect) -> Effect:
    """Right-nested sum ``e1 (+) (e2 (+) (... (+) en))``."""
    if not effects:
        raise ValueError("sum_chain needs at least one effect")
    result = effects[-1]
    for e in reversed(effects[:-1]):
        result = SumSig(e, result)
    return result


def leaves(effect: Effect) -> list[tuple[tuple[str, ...], EffectSig]]:
    """All leaf effects of a sum spine with their paths (no unfolding)."""
    if isinstance(effect, SumSig):
        return [(("L",) + p, e) for p, e in leaves(effect.left)] + [
            (("R",) + p, e) for p, e in leaves(effect.right)
        ]
    return [((), effect)]


# -- witnesses -----------------------------------------------------------------


@dataclass(frozen=True)
class SubeffectWitness:
    small: Effect
    big: Effect
    path: tuple[str, ...] = ()

    def inject_input(self, i: Any) -> Any:
        for step in reversed(self.path):
            if step == "L":
                i = Inl(i)
            elif step == "R":
                i = Inr(i)
            else:
                i = Closed(i)
        return i

    def project_output(self, o: Any) -> Any | None:
        for step in self.path:
            if step == "L":
                if not isinstance(o, Inl):
                    return None
                o = o.value
            elif step == "R":
                if not isinstance(o, Inr):
                    return None
                o = o.value
            # "unfold": outputs of a fixpoint are those of its unfolding
        return o

    def __str__(self) -> str:
        return f"{self.small} -< {self.big} via {'.'.join(self.path) or 'refl'}"


def witness_refl(e: Effect) -> SubeffectWitness:
    return SubeffectWitness(e, e, ())


def witness_left(w: SubeffectWitness, other: Effect) -> SubeffectWitness:
    """``E1 -< E2`` gives ``E1 -< E2 (+) other``."""
    return SubeffectWitness(w.small, SumSig(w.big, other), ("L",) + w.path)


def witness_right(w: SubeffectWitness, other: Effect) -> SubeffectWitness:
    """``E1 -< E2`` gives ``E1 -< other (+) E2``."""
    return SubeffectWitness(w.small, SumSig(other, w.big), ("R",) + w.path)


def witness_unfold(w: SubeffectWitness, rec: RecursiveSig) -> SubeffectWitness:
    """``E1 -< unfolding(rec)`` gives ``E1 -< rec``."""
    if w.big != rec.pre:
        raise EffectError(f"{w.big} is not the unfolding of {rec}")
    return SubeffectWitness(w.small, rec, ("unfold",) + w.path)


def resolve_witness(target: Effect, stack: Effect) -> SubeffectWitness:
    """Find the unique embedding of ``target`` into ``stack``.

    Tries reflexivity, the left side, the right side and finally one
    unfolding of a recursive effect.  Raises :class:`WitnessNotFound` or
    :class:`WitnessAmbiguous`.
    """
    found = _search(target, stack, unfolded=False)
    if not found:
        raise WitnessNotFound(f"{target} is not part of {stack}")
    if len(found) > 1:
        where = ", ".join(".".join(w.path) for w in found)
        raise WitnessAmbiguous(f"{target} occurs at several positions of {stack}: {where}")
    return found[0]


def _search(target: Effect, stack: Effect, unfolded: bool) -> list[SubeffectWitness]:
    if target == stack:
        return [witness_refl(stack)]
    if isinstance(stack, SumSig):
        return [witness_left(w, stack.right) for w in _search(target, stack.left, unfolded)] + [
            witness_right(w, stack.left) for w in _search(target, stack.right, unfolded)
        ]
    if isinstance(stack, RecursiveSig) and not unfolded and stack.pre is not None:
        return [witness_unfold(w, stack) for w in _search(target, stack.pre, True)]
    return []


# -- fixpoints -----------------------------------------------------------------


@dataclass(frozen=True)
class UnfoldWitness:
    """Isomorphism between the inputs of ``fixed`` and of ``fixed.pre``.

    ``inj_i`` wraps an input of the unfolding, ``inv_i`` unwraps it.  Output
    domains are identical.
    """

    fixed: RecursiveSig
    inj_i: Callable[[Any], Any] = field(default=Closed, compare=False)

    @property
    def unfolded(self) -> Effect:
        return self.fixed.pre

    def inv_i(self, i: Any) -> Any:
        if not isinstance(i, Closed):
            raise TypeError(f"not an input of {self.fixed}: {i!r}")
        return i.value


def fix_effect(name: str, body: Callable[[RecursiveSig], Effect]) -> tuple[RecursiveSig, UnfoldWitness]:
    """Tie the knot of ``body`` (a function of the recursive effect).

    Raises :class:`RecursiveOutput` if any output of the body mentions the
    recursive effect.
    """
    rec = RecursiveSig(name)
    pre = body(rec)
    for _, leaf in leaves(pre):
        if isinstance(leaf, EffectSig):
            for op in leaf.ops:
                if mentions(op.result, rec):
                    raise RecursiveOutput(
                        f"output of {leaf.name}.{op.name} mentions {name}"
                    )
    rec.pre = pre
    return rec, UnfoldWitness(rec)
