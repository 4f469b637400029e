"""Random finite trees over a toy effect, for the monad-law checks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from hitrees.tree import UNREACHABLE, Impure, Pure

VALUES = range(10)


@dataclass(frozen=True)
class Ask:
    tag: int


def _table_k(children):
    def k(o):
        if isinstance(o, int) and 0 <= o < len(children):
            return children[o]
        return UNREACHABLE

    return k


def random_tree(rng: random.Random, depth: int, n_out: int, leaf_p: float = 0.1):
    """A tree of at most ``depth`` impure levels whose nodes answer ``range(n_out)``.

    The root is a leaf with probability ``leaf_p``, inner nodes with 0.45.
    """
    roll = rng.random()
    if depth == 0 or roll < leaf_p:
        return UNREACHABLE if roll < 0.03 else Pure(rng.choice(VALUES))
    children = [random_tree(rng, depth - 1, n_out, 0.45) for _ in range(n_out)]
    return Impure(Ask(rng.randrange(4)), _table_k(children))


def random_arrow(rng: random.Random, depth: int, n_out: int):
    """A Kleisli arrow ``value -> tree`` given by a table over VALUES."""
    table = {v: random_tree(rng, depth, n_out) for v in VALUES}
    return lambda v: table[v]
