"""Higher-order interaction trees.

A tree is one of three nodes:

* ``Pure(value)``: a finished computation.
* ``Impure(input, k)``: invoke an effect with ``input`` and continue with
  ``k(output)``.
* ``Unreachable()``: a branch that no valid execution can take.

Trees are finite data.  Unbounded behaviour only arises once a handler
interprets an effect such as recursion.  The raw/wrapped split a
dependently typed host needs for strict positivity has no counterpart here:
effect inputs may embed trees directly because Python boxes everything.

Continuations built by :func:`bind` are stored as a catenable queue of
Kleisli arrows (the usual freer-monad trick), so applying a continuation
that went through many binds runs in a loop rather than in nested calls.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any, Union

__all__ = [
    "HITree",
    "Impure",
    "Pure",
    "UNREACHABLE",
    "Unreachable",
    "bind",
    "fmap",
    "pure",
    "trees_equal",
    "trigger",
]


@dataclass(frozen=True)
class Pure:
    value: Any


@dataclass(frozen=True, eq=False)
class Impure:
    # eq=False: continuations are functions, compare with trees_equal instead.
    input: Any
    k: Callable[[Any], "HITree"]


@dataclass(frozen=True)
class Unreachable:
    pass


UNREACHABLE = Unreachable()

HITree = Union[Pure, Impure, Unreachable]


# -- continuation queue ------------------------------------------------------


class _Leaf:
    __slots__ = ("f",)

    def __init__(self, f):
        self.f = f


class _Node:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


def _concat(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return _Node(a, b)


def _pop(q):
    """Split a non-empty queue into its first arrow and the remainder."""
    while isinstance(q, _Node):
        left = q.left
        if isinstance(left, _Leaf):
            return left.f, q.right
        # rotate ((a b) c) into (a (b c))
        q = _Node(left.left, _Node(left.right, q.right))
    return q.f, None


def _as_queue(f):
    if isinstance(f, Continuation):
        return _concat(_Leaf(f.first), f.rest)
    return _Leaf(f)


class Continuation:
    """``x -> first(x) >>= f1 >>= f2 >>= ...`` with the ``f`` in a queue."""

    __slots__ = ("first", "rest")

    def __init__(self, first, rest=None):
        self.first = first
        self.rest = rest

    def __call__(self, x) -> HITree:
        t = self.first(x)
        q = self.rest
        while q is not None:
            if isinstance(t, Pure):
                f, q = _pop(q)
                t = f(t.value)
            elif isinstance(t, Impure):
                return Impure(t.input, _extend(t.k, q))
            else:
                return t
        return t

    def __repr__(self) -> str:
        return f"<continuation {self.first!r}>"


def _extend(k, q) -> Continuation:
    if isinstance(k, Continuation):
        return Continuation(k.first, _concat(k.rest, q))
    return Continuation(k, q)


def precompose(k: Callable[[Any], HITree], g: Callable[[Any], Any]) -> Callable[[Any], HITree]:
    """Return ``x -> k(g(x))`` without adding a call frame per queued arrow."""
    if isinstance(k, Continuation):
        first = k.first
        return Continuation(lambda x: first(g(x)), k.rest)
    return lambda x: k(g(x))


# -- monad -------------------------------------------------------------------


def pure(value: Any) -> Pure:
    return Pure(value)


def bind(t: HITree, f: Callable[[Any], HITree]) -> HITree:
    """Sequence ``t`` with ``f``.

    ``Pure(r)`` becomes ``f(r)``, ``Unreachable`` absorbs ``f``, and
    ``Impure(i, k)`` becomes ``Impure(i, x -> bind(k(x), f))``.
    """
    if isinstance(t, Pure):
        return f(t.value)
    if isinstance(t, Impure):
        return Impure(t.input, _extend(t.k, _as_queue(f)))
    if isinstance(t, Unreachable):
        return t
    raise TypeError(f"not a HITree: {t!r}")


def fmap(t: HITree, g: Callable[[Any], Any]) -> HITree:
    return bind(t, lambda x: Pure(g(x)))


def trigger(witness, i: Any) -> Impure:
    """Invoke the small-effect input ``i`` inside the effect ``witness.big``.

    Outputs that do not project back to the small effect lead to
    ``Unreachable``.
    """

    def cast(o):
        small = witness.project_output(o)
        return UNREACHABLE if small is None else Pure(small)

    return Impure(witness.inject_input(i), cast)


# -- equality ----------------------------------------------------------------


def trees_equal(
    a: HITree,
    b: HITree,
    outputs: Iterable[Any],
    *,
    max_depth: int | None = None,
) -> bool:
    """Structural equality with continuations compared on ``outputs``.

    Both continuations are applied to every output value and the resulting
    subtrees compared recursively.  This is exact for effects whose output
    domain is the finite set ``outputs``.  With ``max_depth`` the comparison
    stops (and answers True) below that many impure nodes.
    """
    outputs = tuple(outputs)
    stack = [(a, b, 0)]
    while stack:
        x, y, depth = stack.pop()
        if x is y:
            continue
        if isinstance(x, Impure) and isinstance(y, Impure):
            if x.input != y.input:
                return False
            if max_depth is not None and depth >= max_depth:
                continue
            for o in outputs:
                stack.append((x.k(o), y.k(o), depth + 1))
        elif isinstance(x, Impure) or isinstance(y, Impure):
            return False
        elif x != y:
            return False
    return True
