"""Higher-order interaction trees.

Trees describe effectful computations whose effect inputs may carry other
trees (``par``, ``callcc``, recursion).  Two interpreters consume them:
:func:`evaluate` follows one deterministic execution and :func:`explore`
enumerates every execution up to bounds.  :mod:`hitrees.lang` denotes a
small concurrent language with a heap and call/cc into trees.
"""

from __future__ import annotations

from .effects import (
    EffectSig,
    RecursiveSig,
    SubeffectWitness,
    SumSig,
    UnfoldWitness,
    WitnessAmbiguous,
    WitnessNotFound,
    fix_effect,
    resolve_witness,
    sum_chain,
    sum_effects,
)
from .evaluate import default_handler, evaluate
from .explore import Choice, ExploreBounds, ExploreResult, default_explore_handler, exists_outcome, explore, replay
from .outcome import Deadlock, DepthExceeded, ErrorKind, Failure, FuelExhausted, InterpreterError, Returned
from .state import HandlerState
from .tree import UNREACHABLE, HITree, Impure, Pure, Unreachable, bind, fmap, pure, trigger

__version__ = "0.1.0"

__all__ = [
    "Choice",
    "Deadlock",
    "DepthExceeded",
    "EffectSig",
    "ErrorKind",
    "ExploreBounds",
    "ExploreResult",
    "Failure",
    "FuelExhausted",
    "HITree",
    "HandlerState",
    "Impure",
    "InterpreterError",
    "Pure",
    "RecursiveSig",
    "Returned",
    "SubeffectWitness",
    "SumSig",
    "UNREACHABLE",
    "UnfoldWitness",
    "Unreachable",
    "WitnessAmbiguous",
    "WitnessNotFound",
    "bind",
    "default_explore_handler",
    "default_handler",
    "evaluate",
    "exists_outcome",
    "explore",
    "fix_effect",
    "fmap",
    "pure",
    "replay",
    "resolve_witness",
    "sum_chain",
    "sum_effects",
    "trigger",
]
