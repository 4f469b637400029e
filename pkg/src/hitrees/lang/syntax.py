"""Abstract syntax of the language: untyped lambda calculus with a heap,
parallel composition, call/cc, assertions and fetch-and-add.

``let`` and sequencing are not part of the core syntax; the parser expands
``let x := e1 in e2`` to ``(λ x, e2) e1`` and ``e1; e2`` to
``let _ := e1 in e2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "App",
    "Assert",
    "Assign",
    "Callcc",
    "Cont",
    "Deref",
    "Eq",
    "Expr",
    "Faa",
    "Fst",
    "If",
    "Int",
    "Lam",
    "Lit",
    "Loc",
    "Pair",
    "Par",
    "Plus",
    "Ref",
    "Snd",
    "Throw",
    "UNIT",
    "Value",
    "Var",
    "free_vars",
    "show_expr",
    "show_value",
    "subst",
]


# -- values --------------------------------------------------------------------


@dataclass(frozen=True)
class Int:
    n: int


@dataclass(frozen=True)
class Loc:
    index: int


@dataclass(frozen=True)
class Pair:
    first: "Value"
    second: "Value"


@dataclass(frozen=True)
class Cont:
    index: int


@dataclass(frozen=True)
class Lam:
    param: str
    body: "Expr"


Value = Union[Int, Loc, Pair, Cont, Lam]

# "#()" has no value of its own
UNIT = Int(0)


# -- expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Plus:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Fst:
    arg: "Expr"


@dataclass(frozen=True)
class Snd:
    arg: "Expr"


@dataclass(frozen=True)
class Deref:
    arg: "Expr"


@dataclass(frozen=True)
class Assign:
    target: "Expr"
    value: "Expr"


@dataclass(frozen=True)
class Ref:
    arg: "Expr"


@dataclass(frozen=True)
class Par:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True)
class Callcc:
    arg: "Expr"


@dataclass(frozen=True)
class Throw:
    value: "Expr"
    cont: "Expr"


@dataclass(frozen=True)
class Assert:
    arg: "Expr"


@dataclass(frozen=True)
class Faa:
    arg: "Expr"


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


Expr = Union[Lit, Var, Plus, Eq, Fst, Snd, Deref, Assign, Ref, Par, App, Callcc, Throw, Assert, Faa, If]

_UNARY = (Fst, Snd, Deref, Ref, Callcc, Assert, Faa)
_BINARY = {Plus: ("left", "right"), Eq: ("left", "right"), Assign: ("target", "value"),
           Par: ("left", "right"), App: ("fn", "arg"), Throw: ("value", "cont")}


def _subst_value(v: Value, x: str, w: Value) -> Value:
    if isinstance(v, Lam):
        if v.param == x:
            return v
        return Lam(v.param, subst(v.body, x, w))
    if isinstance(v, Pair):
        return Pair(_subst_value(v.first, x, w), _subst_value(v.second, x, w))
    return v


def subst(e: Expr, x: str, v: Value) -> Expr:
    """Replace the free occurrences of ``x`` in ``e`` by the closed value ``v``.

    ``v`` is closed, so no variable can be captured and binders only need
    to stop the substitution when they shadow ``x``.
    """
    if isinstance(e, Var):
        return Lit(v) if e.name == x else e
    if isinstance(e, Lit):
        return Lit(_subst_value(e.value, x, v))
    if isinstance(e, _UNARY):
        return type(e)(subst(e.arg, x, v))
    if isinstance(e, If):
        return If(subst(e.cond, x, v), subst(e.then, x, v), subst(e.orelse, x, v))
    fields = _BINARY.get(type(e))
    if fields is None:
        raise TypeError(f"not an expression: {e!r}")
    a, b = fields
    return type(e)(subst(getattr(e, a), x, v), subst(getattr(e, b), x, v))


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Lit):
        return _free_value(e.value)
    if isinstance(e, _UNARY):
        return free_vars(e.arg)
    if isinstance(e, If):
        return free_vars(e.cond) | free_vars(e.then) | free_vars(e.orelse)
    a, b = _BINARY[type(e)]
    return free_vars(getattr(e, a)) | free_vars(getattr(e, b))


def _free_value(v: Value) -> frozenset[str]:
    if isinstance(v, Lam):
        return free_vars(v.body) - {v.param}
    if isinstance(v, Pair):
        return _free_value(v.first) | _free_value(v.second)
    return frozenset()


# -- printing ------------------------------------------------------------------


def show_value(v: Value) -> str:
    if isinstance(v, Int):
        return str(v.n)
    if isinstance(v, Loc):
        return f"loc{v.index}"
    if isinstance(v, Cont):
        return f"cont{v.index}"
    if isinstance(v, Pair):
        return f"({show_value(v.first)}, {show_value(v.second)})"
    if isinstance(v, Lam):
        return f"(λ {v.param}, {show_expr(v.body)})"
    raise TypeError(f"not a value: {v!r}")


def show_expr(e: Expr) -> str:
    """Compact constructor-style rendering, e.g. ``Assert(Eq(Deref(x), 1))``."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Lit):
        v = e.value
        if isinstance(v, Lam):
            return f"Lam({v.param}, {show_expr(v.body)})"
        return show_value(v)
    if isinstance(e, _UNARY):
        return f"{type(e).__name__}({show_expr(e.arg)})"
    if isinstance(e, If):
        return f"If({show_expr(e.cond)}, {show_expr(e.then)}, {show_expr(e.orelse)})"
    a, b = _BINARY[type(e)]
    return f"{type(e).__name__}({show_expr(getattr(e, a))}, {show_expr(getattr(e, b))})"
