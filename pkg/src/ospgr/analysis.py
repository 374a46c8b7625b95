"""Analysis pipeline: classification, virtual groups, rates, enumeration.

Everything here is pure and deterministic. Object indices are canonical
(object j = popularity-rank-j object) unless a function explicitly takes a
:class:`~ospgr.formats.SessionLog`, whose stored labels are raw.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .formats import SessionLog
from .game import (
    PopularityRanking,
    PreferenceProfile,
    PriorityAssignment,
    ValidationError,
    allocate,
    borda_scores,
    canonicalize,
    kendall_tau,
    popularity_ranking,
)
from .rdm import rdm_r_choice_row

RATE_TOLERANCE = 1e-12


class ChoiceClassification(Enum):
    RDM_R = "RdmR"
    RISK = "Risk"
    SAFE = "Safe"


def classify_choice(
    chosen: int, rdm_choice: int, pref_row: Sequence[int]
) -> ChoiceClassification:
    """Label a choice relative to the model's choice for the same player.

    ``pref_row`` is the player's canonical rank row. Risk means the player
    went for something they strictly prefer to the model choice (a more
    contested object); Safe means something strictly dispreferred.
    """
    n = len(pref_row)
    if not (1 <= chosen <= n and 1 <= rdm_choice <= n):
        raise ValidationError(f"object index out of range 1..{n}")
    if chosen == rdm_choice:
        return ChoiceClassification.RDM_R
    if pref_row[chosen - 1] < pref_row[rdm_choice - 1]:
        return ChoiceClassification.RISK
    return ChoiceClassification.SAFE


@dataclass(frozen=True)
class TauReport:
    """Per-player Kendall tau distances to popularity, with the group mean."""

    taus: tuple[int, ...]
    group_mean: float

    def __post_init__(self):
        n = len(self.taus)
        limit = n * (n - 1) // 2
        for t in self.taus:
            if not (0 <= t <= limit):
                raise ValidationError(f"tau {t} outside [0, {limit}]")


def taus_against_popularity(
    profile: PreferenceProfile, popularity: PopularityRanking
) -> tuple[int, ...]:
    """Each player's inversion count over objects taken in popularity order."""
    order = [popularity.object_with_rank(k) for k in range(1, profile.n + 1)]
    return tuple(
        kendall_tau([profile.rank(i, obj) for obj in order])
        for i in range(1, profile.n + 1)
    )


def tau_report(profile: PreferenceProfile, popularity: PopularityRanking) -> TauReport:
    taus = taus_against_popularity(profile, popularity)
    return TauReport(taus, sum(taus) / len(taus))


def session_taus(log: SessionLog) -> TauReport:
    return tau_report(log.preferences, log.popularity)


@dataclass(frozen=True)
class VirtualGroup:
    """One recombination of a session: a (player, round) record per priority."""

    member_records: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.member_records)


def reform_virtual_groups(log: SessionLog) -> tuple[VirtualGroup, ...]:
    """All recombinations picking one round per player with distinct priorities.

    Requires a complete session in which every player held every priority
    exactly once; such a session yields exactly n! groups. Enumeration order
    is lexicographic in the round assigned to players 1, 2, ... in turn.
    """
    n = log.n
    if len(log.rounds) != n:
        raise ValidationError(f"session has {len(log.rounds)} rounds, expected {n}")
    priority_at = [
        [log.rounds[r].priority_of_player[i] for r in range(n)] for i in range(n)
    ]
    for i in range(n):
        if sorted(priority_at[i]) != list(range(1, n + 1)):
            raise ValidationError(
                f"player {i + 1} did not hold each priority exactly once"
            )

    groups: list[VirtualGroup] = []
    assignment: list[int] = []
    used = [False] * (n + 1)

    def extend(player: int) -> None:
        if player == n:
            groups.append(
                VirtualGroup(tuple((i + 1, r + 1) for i, r in enumerate(assignment)))
            )
            return
        for r in range(n):
            p = priority_at[player][r]
            if not used[p]:
                used[p] = True
                assignment.append(r)
                extend(player + 1)
                assignment.pop()
                used[p] = False

    extend(0)
    return tuple(groups)


def group_choice_vector(log: SessionLog, group: VirtualGroup) -> tuple[int, ...]:
    """Canonical choices of a virtual group, indexed by priority."""
    vector = [0] * group.n
    for player, round_index in group.member_records:
        rec = log.rounds[round_index - 1]
        priority = rec.priority_of_player[player - 1]
        raw = log.label_index(rec.choices[player - 1])
        vector[priority - 1] = log.popularity.rank_of(raw)
    return tuple(vector)


def group_outcome(log: SessionLog, group: VirtualGroup):
    """Replay a virtual group's choices through allocation."""
    choices = []
    priorities = []
    for player, round_index in group.member_records:
        rec = log.rounds[round_index - 1]
        priorities.append(rec.priority_of_player[player - 1])
        choices.append(log.label_index(rec.choices[player - 1]))
    return allocate(tuple(choices), PriorityAssignment(tuple(priorities)))


@dataclass(frozen=True)
class ChosenRateDistribution:
    """rate[j-1] = fraction of choice events selecting the rank-j object."""

    rate: tuple[float, ...]
    count_basis: int

    def __post_init__(self):
        if abs(sum(self.rate) - 1.0) > RATE_TOLERANCE:
            raise ValidationError(f"rates sum to {sum(self.rate)}, not 1")
        for x in self.rate:
            if not (0.0 <= x <= 1.0):
                raise ValidationError(f"rate {x} outside [0, 1]")

    @property
    def n(self) -> int:
        return len(self.rate)


def chosen_rate(choice_vectors: Iterable[Sequence[int]]) -> ChosenRateDistribution:
    """Average the per-group choice distributions with equal group weights."""
    vectors = [tuple(v) for v in choice_vectors]
    if not vectors:
        raise ValidationError("no choice vectors given")
    n = len(vectors[0])
    totals = [0.0] * n
    events = 0
    for vec in vectors:
        if len(vec) != n:
            raise ValidationError("choice vectors have mixed lengths")
        counts = [0] * n
        for j in vec:
            if not (1 <= j <= n):
                raise ValidationError(f"object index {j} out of range 1..{n}")
            counts[j - 1] += 1
        for k in range(n):
            totals[k] += counts[k] / len(vec)
        events += len(vec)
    rate = tuple(t / len(vectors) for t in totals)
    return ChosenRateDistribution(rate, events)


# --- exhaustive enumeration over tau-bounded preference profiles ---------


def permutations_with_inversions_at_most(n: int, bound: int) -> tuple[tuple[int, ...], ...]:
    """All rank rows of length n with inversion number <= bound, lexicographic."""
    return tuple(
        perm
        for perm in itertools.permutations(range(1, n + 1))
        if kendall_tau(perm) <= bound
    )


def _rdm_agent(priority: int, rank_row: Sequence[int]) -> int:
    n = len(rank_row)
    utility = tuple(n + 1 - r for r in rank_row)
    return rdm_r_choice_row(priority, utility)


Agent = Callable[[int, tuple[int, ...]], int]


def _count_block(
    table: tuple[tuple[int, ...], ...], first_rows: Sequence[int]
) -> list[int]:
    """Tally choices over all profiles whose first row index is in first_rows."""
    n = len(table)
    row_count = len(table[0])
    counts = [0] * n
    for k0 in first_rows:
        for rest in itertools.product(range(row_count), repeat=n - 1):
            counts[table[0][k0] - 1] += 1
            for i, k in enumerate(rest, start=1):
                counts[table[i][k] - 1] += 1
    return counts


@dataclass(frozen=True)
class EnumerationResult:
    n: int
    bound: int
    row_count: int
    profile_count: int
    counts: tuple[int, ...]
    distribution: ChosenRateDistribution


def enumerate_tau_bounded(
    n: int,
    bound: int,
    agent: Agent = _rdm_agent,
    workers: int = 1,
) -> EnumerationResult:
    """Play the agent on every profile whose rows all have <= bound inversions.

    Each player's canonical rank row ranges independently over the bounded
    permutations; each (profile, player) pair contributes one choice event.
    The tally is split over first-row blocks when ``workers`` > 1 and reduced
    by summation, so the result is identical for any worker count.
    """
    limit = n * (n - 1) // 2
    if not (0 <= bound <= limit):
        raise ValidationError(f"bound {bound} outside [0, {limit}]")
    rows = permutations_with_inversions_at_most(n, bound)
    # Choices depend only on a player's own row, so they are precomputed
    # per (priority, row) and the profile loop is pure table lookups.
    table = tuple(
        tuple(agent(i, row) for row in rows) for i in range(1, n + 1)
    )
    for i, per_row in enumerate(table, start=1):
        for choice in per_row:
            if not (i <= choice <= n):
                raise ValidationError(
                    f"agent chose object {choice} at priority {i}"
                )
    row_count = len(rows)
    blocks = [range(w, row_count, max(workers, 1)) for w in range(max(workers, 1))]
    blocks = [b for b in blocks if len(b) > 0]
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
            partials = list(pool.map(_count_block, itertools.repeat(table), blocks))
    else:
        partials = [_count_block(table, b) for b in blocks]
    counts = [sum(p[k] for p in partials) for k in range(n)]
    profile_count = row_count**n
    events = profile_count * n
    rate = tuple(c / events for c in counts)
    return EnumerationResult(
        n=n,
        bound=bound,
        row_count=row_count,
        profile_count=profile_count,
        counts=tuple(counts),
        distribution=ChosenRateDistribution(rate, events),
    )


# --- grouping by the tau constraint ---------------------------------------


@dataclass(frozen=True)
class FormedGroup:
    member_ids: tuple[str, ...]
    preferences: PreferenceProfile
    popularity: PopularityRanking
    taus: tuple[int, ...]
    accepted: bool


@dataclass(frozen=True)
class GroupingResult:
    groups: tuple[FormedGroup, ...]
    all_accepted: bool
    attempts: int


def _build_group(
    members: Sequence[tuple[str, Sequence[int]]], max_tau: int
) -> FormedGroup:
    profile = PreferenceProfile.from_rows([row for _, row in members])
    popularity = popularity_ranking(borda_scores(profile))
    taus = taus_against_popularity(profile, popularity)
    return FormedGroup(
        member_ids=tuple(pid for pid, _ in members),
        preferences=profile,
        popularity=popularity,
        taus=taus,
        accepted=all(t < max_tau for t in taus),
    )


def form_groups(
    players: Sequence[tuple[str, Sequence[int]]],
    group_size: int,
    max_tau: int,
    seed: int,
    max_restarts: int = 200,
) -> GroupingResult:
    """Partition players into groups whose members all sit close to popularity.

    Seeded restart search: shuffle, cut into consecutive groups of
    ``group_size``, accept a group iff every member's tau is strictly below
    ``max_tau``. Keeps the partition with the most accepted groups; failing
    groups are reported as not accepted rather than raising.
    """
    if group_size < 2:
        raise ValidationError("group size must be at least 2")
    if max_tau < 0:
        raise ValidationError("max_tau must be nonnegative")
    if not players or len(players) % group_size != 0:
        raise ValidationError(
            f"{len(players)} players cannot be split into groups of {group_size}"
        )
    for pid, row in players:
        if len(row) != group_size:
            raise ValidationError(
                f"player {pid!r} ranked {len(row)} objects, expected {group_size}"
            )
    rng = random.Random(seed)
    order = list(range(len(players)))
    best: Optional[tuple[int, tuple[FormedGroup, ...]]] = None
    attempts = 0
    for _ in range(max(1, max_restarts)):
        attempts += 1
        groups = tuple(
            _build_group([players[k] for k in order[g : g + group_size]], max_tau)
            for g in range(0, len(order), group_size)
        )
        accepted = sum(g.accepted for g in groups)
        if best is None or accepted > best[0]:
            best = (accepted, groups)
        if accepted == len(groups):
            break
        order = rng.sample(order, len(order))
    assert best is not None
    return GroupingResult(
        groups=best[1],
        all_accepted=best[0] == len(best[1]),
        attempts=attempts,
    )


# --- classification of recorded sessions ----------------------------------


@dataclass(frozen=True)
class ClassifiedChoice:
    session_id: str
    round_index: int
    player: int
    priority: int
    chosen: int
    rdm_choice: int
    label: ChoiceClassification


def classify_session(log: SessionLog) -> tuple[ClassifiedChoice, ...]:
    """Classify every recorded choice against the model player's choice."""
    records = []
    for rec in log.rounds:
        priorities = PriorityAssignment(rec.priority_of_player)
        canonical = canonicalize(log.preferences, log.popularity, priorities)
        for i in range(1, log.n + 1):
            player = priorities.player_with_priority(i)
            pref_row = canonical.ranks[i - 1]
            rdm_choice = _rdm_agent(i, pref_row)
            raw = log.label_index(rec.choices[player - 1])
            chosen = log.popularity.rank_of(raw)
            records.append(
                ClassifiedChoice(
                    session_id=log.session_id,
                    round_index=rec.round_index,
                    player=player,
                    priority=i,
                    chosen=chosen,
                    rdm_choice=rdm_choice,
                    label=classify_choice(chosen, rdm_choice, pref_row),
                )
            )
    return tuple(records)


def session_choice_vectors(log: SessionLog) -> tuple[tuple[int, ...], ...]:
    """Canonical choices per round, indexed by priority."""
    vectors = []
    for rec in log.rounds:
        vec = [0] * log.n
        for player, label in enumerate(rec.choices, start=1):
            priority = rec.priority_of_player[player - 1]
            vec[priority - 1] = log.popularity.rank_of(log.label_index(label))
        vectors.append(tuple(vec))
    return tuple(vectors)


@dataclass(frozen=True)
class ClassificationRates:
    """Empirical label fractions over some basis of classified choices."""

    basis: int
    rates: Mapping[ChoiceClassification, float]

    def __post_init__(self):
        if self.basis <= 0:
            raise ValidationError("basis must be positive")
        if abs(sum(self.rates.values()) - 1.0) > RATE_TOLERANCE:
            raise ValidationError("label rates must sum to 1")

    def rate(self, label: ChoiceClassification) -> float:
        return self.rates.get(label, 0.0)


def _rates_of(records: Sequence[ClassifiedChoice]) -> ClassificationRates:
    counts = {label: 0 for label in ChoiceClassification}
    for rec in records:
        counts[rec.label] += 1
    basis = len(records)
    return ClassificationRates(basis, {k: v / basis for k, v in counts.items()})


def overall_classification(records: Sequence[ClassifiedChoice]) -> ClassificationRates:
    if not records:
        raise ValidationError("no classified choices given")
    return _rates_of(records)


def priority_breakdown(
    records: Sequence[ClassifiedChoice], n: int
) -> tuple[Optional[ClassificationRates], ...]:
    """Label rates per priority level; an empty bucket is None, never zero."""
    buckets: list[list[ClassifiedChoice]] = [[] for _ in range(n)]
    for rec in records:
        if not (1 <= rec.priority <= n):
            raise ValidationError(f"priority {rec.priority} out of range 1..{n}")
        buckets[rec.priority - 1].append(rec)
    return tuple(_rates_of(b) if b else None for b in buckets)
