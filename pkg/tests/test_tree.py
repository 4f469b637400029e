from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitrees.effects import Inl, Inr, SumSig, witness_left, witness_refl
from hitrees.stdlib import FailI, StateI, StateO, fail_effect, state_effect
from hitrees.tree import UNREACHABLE, Impure, Pure, Unreachable, bind, fmap, pure, trees_equal, trigger
from treegen import Ask, random_arrow, random_tree


def test_pure_wraps_value():
    assert pure(3) == Pure(3)
    assert pure(None) == Pure(None)


def test_bind_on_pure_applies_function():
    assert bind(pure(3), lambda x: pure(x + 1)) == Pure(4)


def test_bind_absorbs_into_unreachable():
    assert bind(UNREACHABLE, lambda x: pure(x)) is UNREACHABLE
    assert Unreachable() == UNREACHABLE


def test_bind_on_impure_extends_continuation():
    t = Impure(Ask(0), lambda o: pure(o * 10))
    out = bind(t, lambda x: pure(x + 1))
    assert isinstance(out, Impure) and out.input == Ask(0)
    assert out.k(2) == Pure(21)


def test_bind_rejects_non_trees():
    with pytest.raises(TypeError):
        bind(3, pure)


def test_fmap():
    assert fmap(pure(2), lambda x: x * 2) == Pure(4)
    assert fmap(UNREACHABLE, lambda x: x) is UNREACHABLE
    t = Impure(Ask(1), lambda o: pure(o))
    assert trees_equal(fmap(t, lambda x: x), t, range(3))


def test_long_bind_chain_does_not_recurse():
    t = Impure(Ask(0), pure)
    for _ in range(50_000):
        t = bind(t, lambda x: pure(x + 1))
    assert t.k(0) == Pure(50_000)


def test_left_nested_binds_stay_flat():
    t = Impure(Ask(0), pure)
    u = t
    for _ in range(20_000):
        u = bind(u, lambda x: Impure(Ask(1), lambda o, x=x: pure(x + o)))
    # walk to the leaf through every Ask(1)
    node = u.k(0)
    steps = 0
    while isinstance(node, Impure):
        node = node.k(1)
        steps += 1
    assert steps == 20_000 and node == Pure(20_000)


def test_trigger_reflexive_passes_outputs_through():
    st_eff = state_effect()
    t = trigger(witness_refl(st_eff), StateI.Get())
    assert t.input == StateI.Get()
    assert t.k(StateO.Get(4)) == Pure(StateO.Get(4))


def test_trigger_left_witness_rejects_right_outputs():
    big = SumSig(fail_effect(), state_effect())
    w = witness_left(witness_refl(fail_effect()), state_effect())
    t = trigger(w, FailI.Fail())
    assert t.input == Inl(FailI.Fail())
    assert t.k(Inr(StateO.Set())) is UNREACHABLE
    assert t.k(Inl("anything")) == Pure("anything")
    assert w.big == big


def test_trees_equal_distinguishes_inputs_and_leaves():
    a = Impure(Ask(0), lambda o: pure(o))
    assert not trees_equal(a, Impure(Ask(1), lambda o: pure(o)), range(2))
    assert not trees_equal(a, Impure(Ask(0), lambda o: pure(0)), range(2))
    assert trees_equal(a, Impure(Ask(0), lambda o: pure(o)), range(2))
    assert not trees_equal(a, pure(0), range(2))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n_out=st.integers(1, 4))
def test_monad_laws(seed, n_out):
    rng = random.Random(seed)
    t = random_tree(rng, 6, n_out)
    f = random_arrow(rng, 2, n_out)
    g = random_arrow(rng, 2, n_out)
    outs = range(n_out)
    v = rng.randrange(10)
    assert trees_equal(bind(pure(v), f), f(v), outs)
    assert trees_equal(bind(t, pure), t, outs)
    assert trees_equal(bind(bind(t, f), g), bind(t, lambda x: bind(f(x), g)), outs)
