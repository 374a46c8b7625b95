"""Simulated sessions: model agents playing the full n-round protocol."""

from __future__ import annotations

import random
import string
from typing import Optional, Sequence

from .formats import RoundRecord, SessionLog, validate_session
from .game import (
    PreferenceProfile,
    PriorityAssignment,
    ValidationError,
    allocate,
    borda_scores,
    canonicalize,
    popularity_ranking,
)
from .rdm import rdm_r_choice, utility_matrix
from .schedule import priority_schedule


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(string.ascii_uppercase[:n])
    return tuple(f"O{k}" for k in range(1, n + 1))


def random_profile(n: int, rng: random.Random) -> PreferenceProfile:
    return PreferenceProfile.from_rows(
        [rng.sample(range(1, n + 1), n) for _ in range(n)]
    )


def simulate_session(
    session_id: str,
    seed: int,
    n: Optional[int] = None,
    profile: Optional[PreferenceProfile] = None,
    object_labels: Optional[Sequence[str]] = None,
    object_type: str = "box",
) -> SessionLog:
    """Play model agents through n rounds under a seeded priority schedule.

    Preferences come from ``profile`` when given, otherwise they are drawn
    uniformly. The result is a complete, byte-reproducible session log
    (timestamps stay unset).
    """
    rng = random.Random(seed)
    if profile is None:
        if n is None:
            raise ValidationError("give either n or a preference profile")
        profile = random_profile(n, rng)
    elif n is not None and profile.n != n:
        raise ValidationError(f"profile has {profile.n} players, expected {n}")
    n = profile.n
    labels = tuple(object_labels) if object_labels is not None else default_labels(n)
    if len(labels) != n:
        raise ValidationError(f"expected {n} object labels, got {len(labels)}")

    popularity = popularity_ranking(borda_scores(profile))
    schedule = priority_schedule(n, rng.randrange(2**32))

    rounds = []
    for r in range(n):
        priorities = PriorityAssignment(tuple(schedule[p][r] for p in range(n)))
        canonical = canonicalize(profile, popularity, priorities)
        utility = utility_matrix(canonical)
        raw_choice = [0] * n
        for player in range(1, n + 1):
            i = priorities.priority_of(player)
            j = rdm_r_choice(i, utility)
            raw_choice[player - 1] = popularity.object_with_rank(j)
        outcome = allocate(tuple(raw_choice), priorities)
        rounds.append(
            RoundRecord(
                round_index=r + 1,
                priority_of_player=priorities.priority_of_player,
                choices=tuple(labels[c - 1] for c in raw_choice),
                obtained=tuple(
                    None if got is None else labels[got - 1]
                    for got in outcome.obtained
                ),
            )
        )

    log = SessionLog(
        session_id=session_id,
        n=n,
        object_type=object_type,
        object_labels=labels,
        preferences=profile,
        popularity=popularity,
        rounds=tuple(rounds),
    )
    validate_session(log)
    return log
