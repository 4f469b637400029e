"""Results of running a tree, and the signals handlers raise to stop a run."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Union

__all__ = [
    "Deadlock",
    "DepthExceeded",
    "ErrorKind",
    "Failure",
    "FuelExhausted",
    "HandlerFault",
    "InterpreterError",
    "Outcome",
    "Returned",
    "describe",
]


class ErrorKind(str, Enum):
    INVALID_FIXPOINT_ID = "InvalidFixpointId"
    INVALID_CONTINUATION_ID = "InvalidContinuationId"
    NO_CHOICE = "NoChoice"
    UNREACHABLE_HIT = "UnreachableHit"


@dataclass(frozen=True)
class Returned:
    value: Any


@dataclass(frozen=True)
class Failure:
    reason: str = field(default="", compare=False)


@dataclass(frozen=True)
class FuelExhausted:
    pass


@dataclass(frozen=True)
class Deadlock:
    pass


@dataclass(frozen=True)
class DepthExceeded:
    pass


@dataclass(frozen=True)
class InterpreterError:
    kind: ErrorKind
    detail: str = field(default="", compare=False)


Outcome = Union[Returned, Failure, FuelExhausted, Deadlock, DepthExceeded, InterpreterError]


class HandlerFault(Exception):
    """Raised by a handler to end the run with ``outcome``."""

    def __init__(self, outcome: Outcome):
        super().__init__(outcome)
        self.outcome = outcome


def describe(outcome: Outcome, show=repr) -> str:
    if isinstance(outcome, Returned):
        return f"Value {show(outcome.value)}"
    if isinstance(outcome, Failure):
        return f"Failure ({outcome.reason})" if outcome.reason else "Failure"
    if isinstance(outcome, InterpreterError):
        detail = f": {outcome.detail}" if outcome.detail else ""
        return f"InterpreterError {outcome.kind.value}{detail}"
    return type(outcome).__name__
