"""RDM-R: rational decision-making with reference information.

An RDM-R agent is rational and is convinced that every other player's
preference order coincides with the public popularity ranking. Under that
belief the priority-k opponent takes the popularity-rank-k object, so in
canonical indexing the priority-i player treats objects 1..i-1 as gone and
picks the utility maximiser among objects i..n.

Two independent routes compute that choice:

* :func:`rdm_r_choice` applies the closed form directly (argmax over the
  non-excluded objects), and
* :func:`elimination_oracle` replays the iterated reasoning step by step,
  fixing each priority level's best response against the payoff vector in
  which already-claimed objects pay zero.

The test suite checks the two routes against each other exhaustively; the
oracle must therefore never call the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .game import CanonicalProfile, ValidationError, _check_permutation


@dataclass(frozen=True)
class UtilityMatrix:
    """Ordinal utilities in canonical indexing: u[i][j] = n + 1 - rank."""

    u: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.u, start=1):
            _check_permutation(row, f"utility row for priority-{i} player")

    @property
    def n(self) -> int:
        return len(self.u)


@dataclass(frozen=True)
class PayoffTable:
    """Expected payoff of player i choosing object j, with objects below i zeroed.

    Row i keeps u[i][j] for j >= i and holds 0 for j < i, reflecting the
    belief that higher-priority players already claim objects 1..i-1.
    """

    payoff: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.payoff):
            for j in range(i):
                if row[j] != 0:
                    raise ValidationError(
                        f"payoff row {i + 1} must be 0 below the diagonal, "
                        f"got {row[j]} at object {j + 1}"
                    )

    @property
    def n(self) -> int:
        return len(self.payoff)


@dataclass(frozen=True)
class StrategyProfile:
    """One chosen object per canonical player; choices may coincide."""

    choice: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.choice)
        for i, c in enumerate(self.choice, start=1):
            if not 1 <= c <= n:
                raise ValidationError(f"player {i} choice {c} outside 1..{n}")


def utility_matrix(canonical: CanonicalProfile) -> UtilityMatrix:
    """Convert canonical ranks to ordinal utilities, u = n + 1 - rank."""
    n = canonical.n
    return UtilityMatrix(tuple(tuple(n + 1 - p for p in row) for row in canonical.ranks))


def payoff_table(u: UtilityMatrix) -> PayoffTable:
    """Zero out each row's entries for objects assumed taken by higher priorities."""
    n = u.n
    return PayoffTable(
        tuple(
            tuple(u.u[i][j] if j >= i else 0 for j in range(n))
            for i in range(n)
        )
    )


def rdm_r_choice_row(i: int, utility_row: Sequence[int]) -> int:
    """Closed-form RDM-R choice for the priority-i player given their utility row.

    Returns the object index maximising utility among objects i..n. The
    argmax must be unique; utility rows are permutations so a tie would mean
    corrupted input.
    """
    n = len(utility_row)
    if not 1 <= i <= n:
        raise ValidationError(f"player index {i} outside 1..{n}")
    best = max(utility_row[i - 1 :])
    winners = [j for j in range(i - 1, n) if utility_row[j] == best]
    if len(winners) != 1:
        raise ValidationError(
            f"utility argmax for player {i} is not unique: objects {[w + 1 for w in winners]}"
        )
    return winners[0] + 1


def rdm_r_choice(i: int, u: UtilityMatrix) -> int:
    """Closed-form RDM-R choice for canonical player i."""
    return rdm_r_choice_row(i, u.u[i - 1])


def elimination_oracle(own_pref_rows: Mapping[int, Sequence[int]], n: int) -> StrategyProfile:
    """Iterated-reasoning oracle for the RDM-R choice of every player.

    Walks priorities 1..n in order. Player k's preference row is the one
    provided, or the popularity-identical row (1, 2, ..., n) when absent,
    which is exactly what an RDM-R agent assumes about everyone else. At each
    step the full payoff vector is built: zero for every object already
    claimed by a higher-priority player, n + 1 - rank otherwise; the unique
    best response is fixed and the walk continues.

    This deliberately re-derives the choice from the payoff construction and
    must stay independent of :func:`rdm_r_choice`.
    """
    if n < 2:
        raise ValidationError(f"the game needs at least 2 players, got n={n}")
    for k in own_pref_rows:
        if not 1 <= k <= n:
            raise ValidationError(f"preference row given for unknown player {k}")
    identity = tuple(range(1, n + 1))
    choices: list[int] = []
    claimed: set[int] = set()
    for k in range(1, n + 1):
        row = tuple(own_pref_rows.get(k, identity))
        if len(row) != n:
            raise ValidationError(f"preference row for player {k} has length {len(row)}, expected {n}")
        _check_permutation(row, f"preference row for player {k}")
        payoffs = [0 if (j + 1) in claimed else n + 1 - row[j] for j in range(n)]
        best = max(payoffs)
        winners = [j + 1 for j, p in enumerate(payoffs) if p == best]
        if len(winners) != 1:
            raise ValidationError(
                f"best response for player {k} is not unique: objects {winners}"
            )
        choices.append(winners[0])
        claimed.add(winners[0])
    return StrategyProfile(tuple(choices))
