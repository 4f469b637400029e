"""Denotation of programs as trees, and helpers to run or explore them.

The effect of the language is the fixpoint

    E = State(Heap) (+) Callcc(Val, E) (+) Rec(Exp, Val, E)
        (+) Conc(Val, E) (+) Fail (+) Demonic(Loc)

Every heap access (load, store, allocation, fetch-and-add) is preceded by a
``yield`` so that the scheduler may switch threads there.  Dynamic errors
(adding a lambda, loading a dangling location, a false assertion, ...) are
all the ``fail`` operation.
"""

from __future__ import annotations

from types import SimpleNamespace

from .. import stdlib as ops
from ..effects import fix_effect, resolve_witness, sum_chain
from ..evaluate import DEFAULT_SCAN_CAP, EvalHandler, conc_handler, default_handler, evaluate, smallest_natural
from ..explore import (
    ExploreBounds,
    ExploreHandler,
    ExploreResult,
    default_explore_handler,
    eval_chooser_enumerator,
    explore,
)
from ..outcome import Outcome
from ..state import DEFAULT_FUEL, HandlerState
from ..stdlib import KId
from ..tree import HITree, bind, pure
from .syntax import (
    UNIT,
    App,
    Assert,
    Assign,
    Callcc,
    Cont,
    Deref,
    Eq,
    Expr,
    Faa,
    Fst,
    If,
    Int,
    Lam,
    Lit,
    Loc,
    Pair,
    Par,
    Plus,
    Ref,
    Snd,
    Throw,
    Value,
    Var,
    show_value,
    subst,
)

__all__ = [
    "CALLCC",
    "CONC",
    "DEMONIC",
    "FAIL",
    "LANG_EFFECT",
    "LANG_UNFOLD",
    "REC",
    "STATE",
    "W",
    "denote",
    "eval_handler",
    "explore_handler",
    "explore_program",
    "initial_state",
    "run_program",
]

STATE = ops.state_effect("Heap")
FAIL = ops.fail_effect()
DEMONIC = ops.demonic_effect("Loc")

LANG_EFFECT, LANG_UNFOLD = fix_effect(
    "E",
    lambda e: sum_chain(
        STATE,
        ops.callcc_effect("Val", e),
        ops.rec_effect("Exp", "Val", e),
        ops.conc_effect("Val", e),
        FAIL,
        DEMONIC,
    ),
)
CALLCC = ops.callcc_effect("Val", LANG_EFFECT)
REC = ops.rec_effect("Exp", "Val", LANG_EFFECT)
CONC = ops.conc_effect("Val", LANG_EFFECT)

# witnesses of each effect inside the language effect
W = SimpleNamespace(
    state=resolve_witness(STATE, LANG_EFFECT),
    callcc=resolve_witness(CALLCC, LANG_EFFECT),
    rec=resolve_witness(REC, LANG_EFFECT),
    conc=resolve_witness(CONC, LANG_EFFECT),
    fail=resolve_witness(FAIL, LANG_EFFECT),
    demonic=resolve_witness(DEMONIC, LANG_EFFECT),
)


def _fail(reason: str) -> HITree:
    return ops.fail(W.fail, reason)


def _then(first: HITree, rest) -> HITree:
    return bind(first, lambda _: rest())


def _int(v: Value) -> HITree:
    if isinstance(v, Int):
        return pure(v.n)
    return _fail(f"expected an integer, got {show_value(v)}")


def _loc(v: Value) -> HITree:
    if isinstance(v, Loc):
        return pure(v.index)
    return _fail(f"expected a location, got {show_value(v)}")


def _equal(a: Value, b: Value) -> HITree:
    comparable = (Int, Loc, Cont)
    if isinstance(a, comparable) and isinstance(b, comparable):
        return pure(Int(1 if a == b else 0))
    return _fail(f"cannot compare {show_value(a)} and {show_value(b)}")


def _heap_op(body) -> HITree:
    """Yield, then run ``body(heap)`` with the current heap."""
    return _then(ops.yield_(W.conc), lambda: bind(ops.get(W.state), body))


def _deref(loc: int) -> HITree:
    def body(h):
        if loc not in h:
            return _fail(f"load from unallocated loc{loc}")
        return pure(h[loc])

    return _heap_op(body)


def _assign(loc: int, v: Value) -> HITree:
    def body(h):
        if loc not in h:
            return _fail(f"store to unallocated loc{loc}")
        return _then(ops.set_(W.state, {**h, loc: v}), lambda: pure(UNIT))

    return _heap_op(body)


def _alloc(v: Value) -> HITree:
    def body(h):
        return bind(
            ops.choose(W.demonic, lambda l: l not in h),
            lambda l: _then(ops.set_(W.state, {**h, l: v}), lambda: pure(Loc(l))),
        )

    return _heap_op(body)


def _faa(loc: int) -> HITree:
    def body(h):
        old = h.get(loc)
        if not isinstance(old, Int):
            return _fail(f"fetch-and-add on loc{loc} holding {old and show_value(old)}")
        return _then(ops.set_(W.state, {**h, loc: Int(old.n + 1)}), lambda: pure(old))

    return _heap_op(body)


def _as_lambda(v: Value) -> HITree:
    if isinstance(v, Lam):
        return pure(v)
    return _fail(f"cannot apply {show_value(v)}")


def _denote_raw(denote, e: Expr) -> HITree:
    def raw(x: Expr) -> HITree:
        return _denote_raw(denote, x)

    def both(a: Expr, b: Expr, k) -> HITree:
        return bind(raw(a), lambda v1: bind(raw(b), lambda v2: k(v1, v2)))

    if isinstance(e, Lit):
        return pure(e.value)
    if isinstance(e, Var):
        return _fail(f"unbound variable {e.name}")
    if isinstance(e, Plus):
        return both(e.left, e.right, lambda v1, v2: bind(
            _int(v1), lambda n1: bind(_int(v2), lambda n2: pure(Int(n1 + n2)))))
    if isinstance(e, Eq):
        return both(e.left, e.right, _equal)
    if isinstance(e, (Fst, Snd)):
        first = isinstance(e, Fst)

        def project(v):
            if not isinstance(v, Pair):
                return _fail(f"projection from {show_value(v)}")
            return pure(v.first if first else v.second)

        return bind(raw(e.arg), project)
    if isinstance(e, Deref):
        return bind(raw(e.arg), lambda v: bind(_loc(v), _deref))
    if isinstance(e, Assign):
        return both(e.target, e.value, lambda v1, v2: bind(_loc(v1), lambda l: _assign(l, v2)))
    if isinstance(e, Ref):
        return bind(raw(e.arg), _alloc)
    if isinstance(e, Faa):
        return bind(raw(e.arg), lambda v: bind(_loc(v), _faa))
    if isinstance(e, Par):
        kill = lambda v: ops.kill(W.conc, v)  # noqa: E731
        return bind(
            ops.par(W.conc, bind(raw(e.left), kill), bind(raw(e.right), kill)),
            lambda p: pure(Pair(p[0], p[1])),
        )
    if isinstance(e, App):
        return both(e.fn, e.arg, lambda f, v: bind(
            _as_lambda(f), lambda lam: denote(subst(lam.body, lam.param, v))))
    if isinstance(e, Callcc):

        def capture(lam: Lam) -> HITree:
            def body(kid: KId) -> HITree:
                # returning normally resumes the captured continuation
                applied = denote(subst(lam.body, lam.param, Cont(kid.index)))
                return bind(applied, lambda r: ops.throw(W.callcc, r, kid))

            return ops.callcc(W.callcc, body)

        return bind(raw(e.arg), lambda v: bind(_as_lambda(v), capture))
    if isinstance(e, Throw):

        def jump(v, c):
            if not isinstance(c, Cont):
                return _fail(f"throw to {show_value(c)}, not a continuation")
            return ops.throw(W.callcc, v, KId(c.index))

        return both(e.value, e.cont, jump)
    if isinstance(e, Assert):

        def check(v):
            if isinstance(v, Int) and v.n != 0:
                return pure(UNIT)
            return _fail("assertion")

        return bind(raw(e.arg), check)
    if isinstance(e, If):

        def branch(v):
            if not isinstance(v, Int):
                return _fail(f"if on {show_value(v)}")
            return raw(e.then if v.n != 0 else e.orelse)

        return bind(raw(e.cond), branch)
    raise TypeError(f"not an expression: {e!r}")


def denote(e: Expr) -> HITree:
    """The tree of a closed program.

    Recursion goes through the recursion effect: applications call the
    fixpoint instead of recursing into the denotation directly.
    """
    return ops.rec(W.rec, lambda self: lambda x: _denote_raw(self, x))(e)


# -- running -------------------------------------------------------------------


def initial_state(fuel: int = DEFAULT_FUEL) -> HandlerState:
    return HandlerState(heap={}, fuel=fuel)


def eval_handler(scan_cap: int = DEFAULT_SCAN_CAP, start_offset: int = 1) -> EvalHandler:
    return default_handler(
        LANG_EFFECT,
        chooser=smallest_natural(scan_cap),
        overrides={CONC: conc_handler(start_offset)},
    )


def explore_handler(
    enum_locs: int = 16,
    *,
    restricted: bool = False,
    scan_cap: int = DEFAULT_SCAN_CAP,
    start_offset: int = 1,
) -> ExploreHandler:
    """Explore handlers for the language.

    ``restricted`` keeps only the successor the evaluator would take (the
    round-robin thread and the smallest free location).
    """
    if restricted:
        enumerator = eval_chooser_enumerator(smallest_natural(scan_cap))
    else:
        enumerator = range(enum_locs)
    return default_explore_handler(
        LANG_EFFECT,
        {DEMONIC: enumerator},
        round_robin=restricted,
        start_offset=start_offset,
    )


def run_program(
    e: Expr,
    fuel: int = DEFAULT_FUEL,
    scan_cap: int = DEFAULT_SCAN_CAP,
    start_offset: int = 1,
) -> tuple[Outcome, HandlerState]:
    return evaluate(denote(e), eval_handler(scan_cap, start_offset), initial_state(fuel))


def explore_program(
    e: Expr,
    *,
    enum_locs: int = 16,
    max_depth: int = 10_000,
    max_branches: int = 1_000_000,
    restricted: bool = False,
    start_offset: int = 1,
    on_step=None,
) -> ExploreResult:
    bounds = ExploreBounds(max_depth=max_depth, max_branches=max_branches)
    handler = explore_handler(enum_locs, restricted=restricted, start_offset=start_offset)
    return explore(denote(e), handler, initial_state(), bounds, on_step=on_step)
