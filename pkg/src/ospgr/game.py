"""Core mechanics of the one-sided preference game with reference information.

OSPG-R in one paragraph: n players each hold a private strict preference
ranking over n objects and simultaneously pick one object. The only public
signal is the objects' popularity ranking, aggregated from all private
preferences by Borda count. Each player also holds a private priority number;
when several players pick the same object, the one with the best (lowest)
priority number obtains it and the rest obtain nothing.

Conventions used throughout the package:

* players, objects, ranks, and priorities are numbered 1..n in values;
  sequences are ordered so position k holds the value for player/object k+1,
* rank 1 means most preferred, popularity rank 1 means most popular,
  priority 1 wins every conflict.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence


class ValidationError(ValueError):
    """A game value or document violates one of its structural invariants."""


def _is_permutation(values: Sequence[int]) -> bool:
    return sorted(values) == list(range(1, len(values) + 1))


def _check_permutation(values: Sequence[int], what: str) -> None:
    if not _is_permutation(values):
        raise ValidationError(f"{what} is not a permutation of 1..{len(values)}: {tuple(values)!r}")


class TieRule(enum.Enum):
    """Tie-break rule for equal Borda scores (the published ranking must be strict)."""

    LOWEST_RAW_INDEX_FIRST = "lowest_raw_index_first"


@dataclass(frozen=True)
class GameConfig:
    """Size of the game plus the tie-break convention for popularity."""

    n: int
    tie_rule: TieRule = TieRule.LOWEST_RAW_INDEX_FIRST

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValidationError(f"the game needs at least 2 players, got n={self.n}")


@dataclass(frozen=True)
class PreferenceProfile:
    """All players' private rankings.

    ``ranks[i][j]`` is the rank player i+1 assigns to object j+1 (1 = most
    preferred). Every row must be a permutation of 1..n: preferences are
    strict, no ties.
    """

    ranks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.ranks)
        if n < 2:
            raise ValidationError(f"a profile needs at least 2 players, got {n} rows")
        for i, row in enumerate(self.ranks, start=1):
            if len(row) != n:
                raise ValidationError(
                    f"preference row for player {i} has length {len(row)}, expected {n}"
                )
            _check_permutation(row, f"preference row for player {i}")

    @property
    def n(self) -> int:
        return len(self.ranks)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "PreferenceProfile":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    def rank(self, player: int, obj: int) -> int:
        """Rank player gives obj, both 1-based."""
        return self.ranks[player - 1][obj - 1]


@dataclass(frozen=True)
class BordaScores:
    """Borda scores per object, scores[j] for object j+1."""

    scores: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.scores)
        expected_total = n * n * (n + 1) // 2
        if sum(self.scores) != expected_total:
            raise ValidationError(
                f"Borda scores must sum to {expected_total} for n={n}, got {sum(self.scores)}"
            )
        for j, s in enumerate(self.scores, start=1):
            if not n <= s <= n * n:
                raise ValidationError(
                    f"Borda score for object {j} is {s}, outside [{n}, {n * n}]"
                )

    @property
    def n(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class PopularityRanking:
    """Strict public ranking of objects.

    ``rank_of_object[j]`` is the popularity rank of object j+1 (1 = most
    popular). ``tie_flags`` records every pair of raw object indices whose
    Borda scores tied; the published ranking is still strict (the tie rule
    decided the order) but callers can inspect or reject tied instances.
    """

    rank_of_object: tuple[int, ...]
    tie_flags: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        _check_permutation(self.rank_of_object, "popularity ranking")
        for a, b in self.tie_flags:
            if not (1 <= a < b <= len(self.rank_of_object)):
                raise ValidationError(f"tie flag ({a}, {b}) is not an ordered object pair")

    @property
    def n(self) -> int:
        return len(self.rank_of_object)

    def rank_of(self, obj: int) -> int:
        return self.rank_of_object[obj - 1]

    def object_with_rank(self, rank: int) -> int:
        return self.rank_of_object.index(rank) + 1


@dataclass(frozen=True)
class PriorityAssignment:
    """Private priority numbers, priority_of_player[i] for player i+1."""

    priority_of_player: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_permutation(self.priority_of_player, "priority assignment")

    @property
    def n(self) -> int:
        return len(self.priority_of_player)

    def priority_of(self, player: int) -> int:
        return self.priority_of_player[player - 1]

    def player_with_priority(self, priority: int) -> int:
        return self.priority_of_player.index(priority) + 1


@dataclass(frozen=True)
class CanonicalProfile:
    """Profile relabeled so player i is the priority-i player and object j the rank-j object."""

    ranks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.ranks, start=1):
            _check_permutation(row, f"canonical row for priority-{i} player")

    @property
    def n(self) -> int:
        return len(self.ranks)


@dataclass(frozen=True)
class RoundOutcome:
    """Result of one simultaneous round: what everyone chose and what they obtained.

    ``obtained[i]`` is either ``choices[i]`` (the player got their pick) or
    None for Nothing; it is never a different object.
    """

    choices: tuple[int, ...]
    obtained: tuple[Optional[int], ...]

    def __post_init__(self) -> None:
        if len(self.choices) != len(self.obtained):
            raise ValidationError("choices and obtained must have equal length")
        taken: set[int] = set()
        for i, (choice, got) in enumerate(zip(self.choices, self.obtained), start=1):
            if got is not None and got != choice:
                raise ValidationError(
                    f"player {i} obtained object {got} but chose object {choice}"
                )
            if got is not None:
                if got in taken:
                    raise ValidationError(f"object {got} obtained by more than one player")
                taken.add(got)


def borda_scores(profile: PreferenceProfile) -> BordaScores:
    """Aggregate a profile into Borda scores.

    Object j earns n - rank + 1 points from each player, so a unanimous
    favourite scores n*n and a unanimous last place scores n.
    """
    n = profile.n
    scores = [0] * n
    for row in profile.ranks:
        for j, rank in enumerate(row):
            scores[j] += n - rank + 1
    return BordaScores(tuple(scores))


def popularity_ranking(
    scores: BordaScores,
    tie_rule: TieRule = TieRule.LOWEST_RAW_INDEX_FIRST,
) -> PopularityRanking:
    """Rank objects by Borda score, highest score first.

    Equal scores are broken deterministically by the tie rule (the lower raw
    object index takes the better rank) and every tied pair is recorded in
    ``tie_flags`` so callers can detect that the strictness came from the
    tie rule rather than from the scores.
    """
    if tie_rule is not TieRule.LOWEST_RAW_INDEX_FIRST:
        raise ValidationError(f"unsupported tie rule: {tie_rule!r}")
    n = scores.n
    order = sorted(range(n), key=lambda j: (-scores.scores[j], j))
    rank_of_object = [0] * n
    for position, j in enumerate(order, start=1):
        rank_of_object[j] = position
    ties = frozenset(
        (a + 1, b + 1)
        for a, b in itertools.combinations(range(n), 2)
        if scores.scores[a] == scores.scores[b]
    )
    return PopularityRanking(tuple(rank_of_object), ties)


def canonicalize(
    profile: PreferenceProfile,
    popularity: PopularityRanking,
    priorities: PriorityAssignment,
) -> CanonicalProfile:
    """Relabel players by priority and objects by popularity rank.

    Row i of the result is the preference row of the player holding priority
    i, and column j holds that player's rank for the object with popularity
    rank j.
    """
    n = profile.n
    if popularity.n != n or priorities.n != n:
        raise ValidationError(
            f"dimension mismatch: profile n={n}, popularity n={popularity.n}, "
            f"priorities n={priorities.n}"
        )
    player_at = [priorities.player_with_priority(k) for k in range(1, n + 1)]
    object_at = [popularity.object_with_rank(k) for k in range(1, n + 1)]
    rows = tuple(
        tuple(profile.ranks[player_at[i] - 1][object_at[j] - 1] for j in range(n))
        for i in range(n)
    )
    return CanonicalProfile(rows)


def allocate(choices: Sequence[int], priorities: PriorityAssignment) -> RoundOutcome:
    """Resolve one simultaneous round.

    Among the players who picked the same object, exactly the one with the
    smallest priority number obtains it; everyone else who picked it obtains
    Nothing. A player alone on an object always obtains it.
    """
    n = priorities.n
    if len(choices) != n:
        raise ValidationError(f"expected {n} choices, got {len(choices)}")
    for i, choice in enumerate(choices, start=1):
        if not 1 <= choice <= n:
            raise ValidationError(f"player {i} chose object {choice}, outside 1..{n}")
    obtained: list[Optional[int]] = [None] * n
    contenders: dict[int, list[int]] = {}
    for i, choice in enumerate(choices, start=1):
        contenders.setdefault(choice, []).append(i)
    for obj, players in contenders.items():
        winner = min(players, key=priorities.priority_of)
        obtained[winner - 1] = obj
    return RoundOutcome(tuple(int(c) for c in choices), tuple(obtained))


def kendall_tau(sequence: Sequence[int]) -> int:
    """Kendall tau distance of a preference sequence from the sorted order.

    The input is a player's ranks read off in popularity order (rank over the
    most popular object first). The distance is the inversion number: the
    count of out-of-order pairs, which equals the minimum number of adjacent
    exchanges needed to sort the sequence. 0 means the player's preference
    coincides with popularity.
    """
    _check_permutation(sequence, "preference sequence")
    n = len(sequence)
    return sum(
        1
        for a in range(n)
        for b in range(a + 1, n)
        if sequence[a] > sequence[b]
    )
