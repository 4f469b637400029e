from __future__ import annotations

import pytest

from hitrees import stdlib as ops
from hitrees.evaluate import rec_handler
from hitrees.explore import (
    Choice,
    ExploreBounds,
    MissingEnumerator,
    ReplayMismatch,
    default_explore_handler,
    deterministic,
    exists_outcome,
    explore,
    explore_conc_handler,
    explore_demonic_handler,
    replay,
)
from hitrees.lang.denote import DEMONIC, LANG_EFFECT, W
from hitrees.outcome import DepthExceeded, ErrorKind, Failure, InterpreterError, Returned
from hitrees.scheduling import continuable, successors
from hitrees.state import Blocked, Completed, HandlerState, Running, Yielded
from hitrees.tree import Pure, bind, pure


def handler(enum=range(4), **kw):
    return default_explore_handler(LANG_EFFECT, {DEMONIC: enum}, **kw)


def go(t, heap=None, enum=range(4), bounds=None, **kw):
    return explore(t, handler(enum, **kw), HandlerState(heap=heap), bounds)


# -- pool successor table ------------------------------------------------------


def test_two_yielded_threads_give_two_successors():
    s = HandlerState(threads=(Blocked(1, 2, pure), Yielded(pure(1)), Yielded(pure(2))), current=0)
    assert continuable(s) == [1, 2]
    assert [tid for tid, _, _ in successors(s)] == [1, 2]


def test_blocked_on_incomplete_child_cannot_continue():
    s = HandlerState(threads=(Blocked(1, 2, pure), Yielded(pure(1)), Running()), current=2)
    assert continuable(s) == [1]


def test_parent_continues_once_both_children_completed():
    s = HandlerState(threads=(Blocked(1, 2, pure), Completed(1), Completed(2)), current=2)
    [(tid, tree, s2)] = successors(s)
    assert tid == 0 and tree == Pure(ops.ConcO.Par((1, 2)))
    assert s2.threads[1].consumed and s2.threads[2].consumed
    # consumed children do not wake the parent a second time
    assert continuable(s2.with_thread(0, Blocked(1, 2, pure))) == []


def test_all_completed_returns_root_value():
    s = HandlerState(threads=(Completed("root"),), current=0)
    [(tid, tree, _)] = successors(s)
    assert tid == -1 and tree == Pure("root")


# -- demonic -------------------------------------------------------------------


def test_demonic_enumerator_is_filtered():
    h = explore_demonic_handler([0, 1, 2])
    branches = h.successors(ops.DemonicI.Choose(lambda n: n > 0), lambda o: pure(o.value), HandlerState())
    assert [b.tree for b in branches] == [Pure(1), Pure(2)]
    assert h.successors(ops.DemonicI.Choose(lambda n: False), pure, HandlerState()) == []


def test_fresh_location_choice():
    heap = {0: "a", 1: "b"}
    t = bind(ops.get(W.state), lambda h: ops.choose(W.demonic, lambda l: l not in h))
    r = go(t, heap=heap, enum=range(4))
    assert r.values() == {2, 3} and not r.exhausted


def test_callable_enumerator_sees_state():
    seen = []

    def enum(pred, s):
        seen.append(s.heap)
        return range(3)

    r = go(ops.choose(W.demonic, lambda n: True), heap="h", enum=enum)
    assert r.values() == {0, 1, 2} and seen == ["h"]


def test_missing_enumerator():
    with pytest.raises(MissingEnumerator):
        default_explore_handler(LANG_EFFECT, {})


# -- deterministic effects -----------------------------------------------------


def test_fix_gives_one_successor_with_extended_table():
    h = deterministic("Rec", rec_handler())
    i = ops.RecI.Fix(lambda fid: lambda a: pure(a), 5)
    [b] = h.successors(i, lambda o: pure(o.value), HandlerState())
    assert len(b.state.fixpoints) == 1 and b.tree == Pure(5)


def test_invalid_fid_has_no_successor():
    h = deterministic("Rec", rec_handler())
    assert h.successors(ops.RecI.Call(ops.FId(0), 1), pure, HandlerState()) == []
    r = go(ops.call(W.rec, ops.FId(0), 1))
    assert r.outcomes == {} and not r.exhausted


def test_throw_to_valid_kid_resumes():
    t = ops.callcc(W.callcc, lambda k: ops.throw(W.callcc, 7, k))
    assert go(t).outcomes.keys() == {Returned(7)}
    assert go(ops.throw(W.callcc, 7, ops.KId(2))).outcomes == {}


def test_failure_and_deterministic_programs_are_singletons():
    assert set(go(ops.fail(W.fail)).outcomes) == {Failure()}
    t = bind(ops.set_(W.state, 4), lambda _: ops.get(W.state))
    r = go(t, heap=0)
    assert r.values() == {4} and not r.exhausted


# -- concurrency and search ----------------------------------------------------


def _racy():
    def incr():
        return bind(
            ops.get(W.state),
            lambda h: bind(ops.yield_(W.conc), lambda _: bind(ops.set_(W.state, h + 1), lambda _: ops.kill(W.conc, 0))),
        )

    return bind(ops.par(W.conc, incr(), incr()), lambda _: ops.get(W.state))


def test_race_values_and_choice_records():
    r = go(_racy(), heap=0)
    assert r.values() == {1, 2} and not r.exhausted
    for trace in r.outcomes.values():
        assert all(c.effect == "Conc" for c in trace)
        assert [c.step for c in trace] == sorted(c.step for c in trace)


def test_round_robin_restriction_matches_evaluator():
    from hitrees.evaluate import default_handler, evaluate

    r = go(_racy(), heap=0, round_robin=True)
    o, _ = evaluate(_racy(), default_handler(LANG_EFFECT), HandlerState(heap=0))
    assert list(r.outcomes) == [o]


def test_exists_outcome():
    r = go(_racy(), heap=0)
    assert exists_outcome(r, lambda o: o == Returned(0)) == (False, None)
    found, trace = exists_outcome(r, lambda o: o == Returned(1))
    assert found and trace == r.outcomes[Returned(1)]
    assert exists_outcome(explore(pure(1), LANG_EFFECT, bounds=ExploreBounds(demonic_enumerators={DEMONIC: []})),
                          lambda o: isinstance(o, Returned)) == (True, ())


def test_depth_bound_marks_result_exhausted():
    loop = ops.rec(W.rec, lambda self: self)
    r = go(loop(0), bounds=ExploreBounds(max_depth=50))
    assert r.exhausted and DepthExceeded() in r.outcomes


def test_branch_bound_marks_result_exhausted():
    r = go(_racy(), heap=0, bounds=ExploreBounds(max_branches=3))
    assert r.exhausted and r.expanded == 3


def test_bounds_must_be_positive():
    with pytest.raises(ValueError):
        ExploreBounds(max_depth=0)


@pytest.mark.parametrize("depth", [2, 4, 6, 8, 10, 14])
def test_raising_depth_keeps_terminal_outcomes(depth):
    small = go(_racy(), heap=0, bounds=ExploreBounds(max_depth=depth))
    big = go(_racy(), heap=0, bounds=ExploreBounds(max_depth=depth + 3))
    terminal = {o for o in small.outcomes if not isinstance(o, DepthExceeded)}
    assert terminal <= set(big.outcomes)


def test_replay_reproduces_each_outcome():
    r = go(_racy(), heap=0)
    for o, trace in r.outcomes.items():
        assert replay(_racy(), handler(), trace, HandlerState(heap=0)) == o


def test_replay_rejects_foreign_traces():
    h = handler()
    with pytest.raises(ReplayMismatch):
        replay(_racy(), h, [], HandlerState(heap=0))
    with pytest.raises(ReplayMismatch):
        replay(_racy(), h, [Choice(0, "Demonic", 0)], HandlerState(heap=0))
    with pytest.raises(ReplayMismatch):
        replay(pure(1), h, [Choice(0, "Conc", 0)])


def test_choice_round_trips_through_dict():
    c = Choice(3, "Conc", 1, "run thread 2")
    assert Choice.from_dict(c.to_dict()) == c


def test_on_step_sees_every_configuration():
    count = []
    r = explore(_racy(), handler(), HandlerState(heap=0), on_step=lambda t, s, tr: count.append(1))
    assert len(count) >= r.expanded


def test_interpreter_errors_are_outcomes():
    r = go(ops.choose(W.demonic, lambda n: n > 100), enum=range(3))
    assert r.outcomes == {}
    from hitrees.tree import UNREACHABLE

    assert go(UNREACHABLE).outcomes == {}
    assert InterpreterError(ErrorKind.NO_CHOICE) not in r.outcomes


def test_conc_handler_round_robin_gives_one_branch():
    h = explore_conc_handler(round_robin=True)
    s = HandlerState(threads=(Running(),))
    [b] = h.successors(ops.ConcI.Par(pure(1), pure(2)), pure, s)
    assert b.state.current == 1
    assert len(explore_conc_handler().successors(ops.ConcI.Par(pure(1), pure(2)), pure, s)) == 2
