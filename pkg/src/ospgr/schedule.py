"""Priority rotation schedules for multi-round sessions.

A session runs n rounds and every player must hold every priority exactly
once, so the player-by-round priority table is a Latin square. Schedules are
generated by shuffling the rows and columns of the cyclic square with a
seeded RNG, which keeps generation deterministic per seed.
"""

from __future__ import annotations

import random
from typing import Sequence

from .game import ValidationError, _is_permutation


def cyclic_latin_square(n: int) -> tuple[tuple[int, ...], ...]:
    """The unshuffled base square: cell (p, r) holds ((p + r) mod n) + 1."""
    if n < 2:
        raise ValidationError(f"a schedule needs at least 2 players, got n={n}")
    return tuple(tuple((p + r) % n + 1 for r in range(n)) for p in range(n))


def priority_schedule(n: int, seed: int) -> tuple[tuple[int, ...], ...]:
    """Seeded Latin square mapping (player, round) to a priority number.

    Row p is player p+1's priorities across rounds; column r is round r+1's
    priority assignment. Rows and columns of the cyclic square are permuted
    with a seeded RNG, so the same seed always yields the same schedule.
    """
    if n < 2:
        raise ValidationError(f"a schedule needs at least 2 players, got n={n}")
    rng = random.Random(seed)
    row_of = rng.sample(range(n), n)
    col_of = rng.sample(range(n), n)
    return tuple(
        tuple((row_of[p] + col_of[r]) % n + 1 for r in range(n))
        for p in range(n)
    )


def is_latin_square(square: Sequence[Sequence[int]]) -> bool:
    """True when every row and every column is a permutation of 1..n."""
    n = len(square)
    if any(len(row) != n for row in square):
        return False
    if any(not _is_permutation(row) for row in square):
        return False
    return all(_is_permutation([square[p][r] for p in range(n)]) for r in range(n))
