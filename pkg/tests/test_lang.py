from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitrees.lang import corpus
from hitrees.lang.denote import explore_program, run_program
from hitrees.lang.parser import ParseError, parse, tokenize
from hitrees.lang.syntax import (
    UNIT,
    App,
    Assert,
    Assign,
    Callcc,
    Deref,
    Eq,
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
    Var,
    free_vars,
    show_expr,
    show_value,
    subst,
)
from hitrees.outcome import Failure, Returned


def value_of(src: str):
    o, _ = run_program(parse(src, corpus.splices()))
    return o


# -- parser --------------------------------------------------------------------


def test_let_is_an_application():
    assert parse("let x := ref #0 in !x") == App(Lit(Lam("x", Deref(Var("x")))), Ref(Lit(Int(0))))


def test_plus():
    assert parse("#1 + #2") == Plus(Lit(Int(1)), Lit(Int(2)))


def test_precedence():
    assert parse("x ← !x + #1 || y") == Par(Assign(Var("x"), Plus(Deref(Var("x")), Lit(Int(1)))), Var("y"))
    assert parse("f x y") == App(App(Var("f"), Var("x")), Var("y"))
    assert parse("!f x") == Deref(App(Var("f"), Var("x")))
    assert parse("p.1 + p.2") == Plus(Fst(Var("p")), Snd(Var("p")))
    assert parse("#1 + #2 = #3") == Eq(Plus(Lit(Int(1)), Lit(Int(2))), Lit(Int(3)))


def test_sequence_and_aliases():
    assert parse("a; b") == App(Lit(Lam("_", Var("b"))), Var("a"))
    assert parse("x <- #1") == parse("x ← #1")
    assert parse(r"\ a b, a") == parse("λ a, λ b, a") == Lit(Lam("a", Lit(Lam("b", Var("a")))))


def test_open_forms():
    assert parse("if c then #1 else #2") == If(Var("c"), Lit(Int(1)), Lit(Int(2)))
    assert parse("throw #() to k") == Throw(Lit(UNIT), Var("k"))
    assert parse("call/cc (λ k, k)") == Callcc(Lit(Lam("k", Var("k"))))
    assert parse("assert (FAA(x) = #-1)") == Assert(Eq(Faa(Var("x")), Lit(Int(-1))))


def test_comments_are_skipped():
    assert parse("#1 -- a comment\n + #2") == Plus(Lit(Int(1)), Lit(Int(2)))
    assert [t.kind for t in tokenize("!b -- ! is a load")] == ["!", "name", "eof"]


def test_splices():
    awk = corpus.load("awk")
    assert parse("$awk", {"awk": awk}) == awk
    with pytest.raises(ParseError, match="unknown splice"):
        parse("$nope")


@pytest.mark.parametrize(
    "src,line,col",
    [("let x := in x", 1, 10), ("#1 +\n  )", 2, 3), ("#1 = #1 = #1", 1, 9), ("#1 #", 1, 4), ("(#1", 1, 4)],
)
def test_parse_errors_carry_positions(src, line, col):
    with pytest.raises(ParseError) as err:
        parse(src)
    assert (err.value.line, err.value.column) == (line, col)


# -- substitution --------------------------------------------------------------


def test_subst_examples():
    three = Int(3)
    assert subst(Var("x"), "x", three) == Lit(three)
    assert subst(Lit(Lam("x", Var("x"))), "x", three) == Lit(Lam("x", Var("x")))
    assert subst(Plus(Var("x"), Var("y")), "x", Int(1)) == Plus(Lit(Int(1)), Var("y"))


def test_subst_reaches_under_other_binders():
    e = Lit(Lam("y", Plus(Var("x"), Var("y"))))
    assert subst(e, "x", Int(2)) == Lit(Lam("y", Plus(Lit(Int(2)), Var("y"))))
    assert free_vars(e) == {"x"}


def test_show():
    assert show_value(Pair(Int(1), Loc(2))) == "(1, loc2)"
    assert show_expr(parse("assert (!x = #1)")) == "Assert(Eq(Deref(x), 1))"


# -- semantics -----------------------------------------------------------------


def test_assert_true_gives_unit():
    assert value_of("assert (#1 = #1)") == Returned(UNIT)


def test_faa_returns_old_value_and_increments():
    o, s = run_program(parse("FAA(ref #5)"))
    assert o == Returned(Int(5))
    assert s.heap == {0: Int(6)}


def test_equality_domains():
    assert value_of("let a := ref #0 in a = a") == Returned(Int(1))
    assert value_of("call/cc (λ k, k = k)") == Returned(Int(1))
    assert value_of("(λ x, x) = (λ x, x)") == Failure()
    assert value_of("(#1 || #1) = (#1 || #1)") == Failure()


@pytest.mark.parametrize(
    "src",
    ["#1 + (λ x, x)", "y", "!#3", "#1 #2", "throw #1 to #2", "(#1).1", "if (λ x, x) then #1 else #2", "FAA(#1)"],
)
def test_dynamic_errors_fail(src):
    assert value_of(src) == Failure()


def test_callcc_normal_return():
    assert value_of("call/cc (λ k, #5)") == Returned(Int(5))
    assert value_of("call/cc (λ k, #1 + throw #7 to k)") == Returned(Int(7))


def test_applications_go_through_one_fixpoint():
    o, s = run_program(corpus.load("rec"))
    assert o == Returned(Int(10))
    assert len(s.fixpoints) == 1


def test_allocation_picks_fresh_locations():
    o, s = run_program(parse("let a := ref #1 in let b := ref #2 in (a || b)"))
    assert o == Returned(Pair(Loc(0), Loc(1)))
    r = explore_program(parse("let a := ref #1 in ref #2"), enum_locs=3)
    # the first allocation may take any location, so the second may too
    assert r.values() == {Loc(0), Loc(1), Loc(2)} and not r.exhausted


def _arith(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.3:
        n = rng.randint(-50, 50)
        return f"#{n}", n
    a, va = _arith(rng, depth - 1)
    b, vb = _arith(rng, depth - 1)
    if rng.random() < 0.2:
        return f"(if ({a} = {b}) then #1 else #0)", int(va == vb)
    return f"({a} + {b})", va + vb


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_arithmetic_matches_direct_evaluation(seed):
    src, expected = _arith(random.Random(seed), 5)
    assert value_of(src) == Returned(Int(expected))


def _open_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.3:
        return Var("x") if rng.random() < 0.5 else Lit(Int(rng.randint(-5, 5)))
    a, b = _open_expr(rng, depth - 1), _open_expr(rng, depth - 1)
    kind = rng.randrange(3)
    if kind == 0:
        return Plus(a, b)
    if kind == 1:
        return Eq(a, b)
    return If(Eq(a, b), b, a)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), v=st.integers(-5, 5))
def test_substitution_lemma(seed, v):
    e = _open_expr(random.Random(seed), 4)
    applied, _ = run_program(App(Lit(Lam("x", e)), Lit(Int(v))))
    direct, _ = run_program(subst(e, "x", Int(v)))
    assert applied == direct


# -- corpus --------------------------------------------------------------------


def test_corpus_contents():
    names = corpus.names()
    for required in ("awk", "c_callcc", "c_conc", "race"):
        assert required in names
    assert len(names) - 4 >= 6
    assert "assert (!x = #1)" in corpus.source("awk")
    assert "let g := $awk in let f := λ _, #() in g f || g f" in corpus.source("c_conc")
    assert corpus.expectations()["race"]["explore"] == ["Value 1", "Value 2"]
    with pytest.raises(KeyError):
        corpus.source("missing")


def test_corpus_matches_expectations():
    bad = [(r.name, r.problems) for r in corpus.check_corpus()]
    assert [b for b in bad if b[1]] == []


def test_corpus_detects_perturbed_scheduler():
    reports = corpus.check_corpus(start_offset=0, only=["race", "state"])
    assert [r.ok for r in reports] == [False, True]
