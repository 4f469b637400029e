"""Handler state shared by the evaluator and the explorer.

The state is immutable; handlers return an updated copy.  That lets the
explorer branch on a state without copying it defensively.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import Any, Union

from .tree import HITree

__all__ = [
    "Blocked",
    "Completed",
    "DEFAULT_FUEL",
    "HandlerState",
    "Running",
    "Thread",
    "Yielded",
]

DEFAULT_FUEL = 1_000_000


@dataclass(frozen=True, eq=False)
class Yielded:
    tree: HITree


@dataclass(frozen=True)
class Completed:
    value: Any
    consumed: bool = False


@dataclass(frozen=True, eq=False)
class Blocked:
    left: int
    right: int
    k: Callable[[Any], HITree]


@dataclass(frozen=True)
class Running:
    """Slot of the thread that currently executes."""


Thread = Union[Yielded, Completed, Blocked, Running]


@dataclass(frozen=True)
class HandlerState:
    """Everything the standard handlers read and write.

    ``heap`` is the state of the state effect (a dict for the language).
    ``fixpoints`` and ``continuations`` are the defunctionalisation tables:
    an ``FId``/``KId`` is an index into them.
    """

    heap: Any = None
    threads: tuple[Thread, ...] = (Running(),)
    current: int = 0
    fixpoints: tuple[Callable[[Any], HITree], ...] = ()
    continuations: tuple[Callable[[Any], HITree], ...] = ()
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        if self.threads and not 0 <= self.current < len(self.threads):
            raise ValueError(f"current thread {self.current} outside pool of {len(self.threads)}")

    def with_thread(self, tid: int, thread: Thread) -> HandlerState:
        threads = list(self.threads)
        threads[tid] = thread
        return replace(self, threads=tuple(threads))

    def replace(self, **changes) -> HandlerState:
        return replace(self, **changes)
