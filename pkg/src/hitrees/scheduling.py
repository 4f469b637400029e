"""Thread-pool bookkeeping for the concurrency effect.

Both interpreters update the pool the same way on ``par``/``yield``/``kill``
and differ only in which continuable thread runs next: the evaluator picks
one round-robin, the explorer branches over all of them.
"""

from __future__ import annotations

from typing import Any

from .outcome import Deadlock, HandlerFault
from .state import Blocked, Completed, HandlerState, Running, Yielded
from .stdlib import ConcI, ConcO
from .tree import HITree, Pure

__all__ = ["continuable", "resume", "round_robin", "schedule", "successors", "suspend_current"]


def suspend_current(i: Any, k, s: HandlerState) -> HandlerState:
    """Record in the pool what the current thread does with operation ``i``."""
    if isinstance(i, ConcI.Par):
        n = len(s.threads)
        s = s.with_thread(s.current, Blocked(n, n + 1, k))
        return s.replace(threads=s.threads + (Yielded(i.left), Yielded(i.right)))
    if isinstance(i, ConcI.Yield):
        return s.with_thread(s.current, Yielded(k(ConcO.Yield())))
    if isinstance(i, ConcI.Kill):
        return s.with_thread(s.current, Completed(i.value))
    raise TypeError(f"not a concurrency input: {i!r}")


def _ready(th, threads) -> bool:
    if isinstance(th, Yielded):
        return True
    if isinstance(th, Blocked):
        a, b = threads[th.left], threads[th.right]
        return (
            isinstance(a, Completed)
            and isinstance(b, Completed)
            and not a.consumed
            and not b.consumed
        )
    return False


def continuable(s: HandlerState) -> list[int]:
    """Thread ids that could run next, in pool order."""
    return [tid for tid, th in enumerate(s.threads) if _ready(th, s.threads)]


def resume(s: HandlerState, tid: int) -> tuple[HITree, HandlerState]:
    """Make ``tid`` the running thread and return the tree it continues with."""
    th = s.threads[tid]
    threads = list(s.threads)
    if isinstance(th, Yielded):
        tree = th.tree
    elif isinstance(th, Blocked):
        a, b = threads[th.left], threads[th.right]
        threads[th.left] = Completed(a.value, consumed=True)
        threads[th.right] = Completed(b.value, consumed=True)
        tree = th.k(ConcO.Par((a.value, b.value)))
    else:
        raise ValueError(f"thread {tid} cannot continue: {th!r}")
    threads[tid] = Running()
    return tree, s.replace(threads=tuple(threads), current=tid)


def _finished(s: HandlerState) -> tuple[HITree, HandlerState] | None:
    if all(isinstance(th, Completed) for th in s.threads):
        return Pure(s.threads[0].value), s
    return None


def round_robin(s: HandlerState, start_offset: int = 1) -> int | None:
    """First continuable thread scanning from ``current + start_offset``."""
    n = len(s.threads)
    for step in range(n):
        tid = (s.current + start_offset + step) % n
        if _ready(s.threads[tid], s.threads):
            return tid
    return None


def schedule(s: HandlerState, start_offset: int = 1) -> tuple[HITree, HandlerState]:
    """Resume the next thread round-robin.

    When every thread has completed, the run finishes with the value of the
    root thread.  Raises :class:`HandlerFault` with :class:`Deadlock` when
    some thread is stuck and none can continue.
    """
    tid = round_robin(s, start_offset)
    if tid is not None:
        return resume(s, tid)
    done = _finished(s)
    if done is not None:
        return done
    raise HandlerFault(Deadlock())


def successors(s: HandlerState) -> list[tuple[int, HITree, HandlerState]]:
    """All ways to continue the pool, one per continuable thread."""
    out = []
    for tid in continuable(s):
        tree, s2 = resume(s, tid)
        out.append((tid, tree, s2))
    if not out:
        done = _finished(s)
        if done is not None:
            return [(-1, *done)]
        raise HandlerFault(Deadlock())
    return out
