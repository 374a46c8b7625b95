import itertools
import random

import pytest
from hypothesis import given, strategies as st

from ospgr import (
    CanonicalProfile,
    PayoffTable,
    UtilityMatrix,
    ValidationError,
    elimination_oracle,
    payoff_table,
    rdm_r_choice,
    rdm_r_choice_row,
    utility_matrix,
)

perm = lambda n: st.permutations(list(range(1, n + 1)))


def u_of(rank_row):
    n = len(rank_row)
    return tuple(n + 1 - r for r in rank_row)


def test_utility_from_ranks():
    canon = CanonicalProfile(((1, 2, 3), (2, 1, 3), (1, 2, 3)))
    assert utility_matrix(canon).u == ((3, 2, 1), (2, 3, 1), (3, 2, 1))


def test_payoff_zeroes_contested_objects():
    u = UtilityMatrix(((3, 2, 1), (2, 3, 1), (3, 2, 1)))
    assert payoff_table(u).payoff == ((3, 2, 1), (0, 3, 1), (0, 0, 1))


def test_payoff_table_validates_zero_pattern():
    with pytest.raises(ValidationError):
        PayoffTable(((2, 1), (1, 1)))  # cell below the diagonal not zeroed


def test_choice_row_picks_best_available():
    # ranks (2,1,3): utilities (2,3,1)
    assert rdm_r_choice_row(1, (2, 3, 1)) == 2
    assert rdm_r_choice_row(2, (2, 3, 1)) == 2
    assert rdm_r_choice_row(3, (2, 3, 1)) == 3


def test_choice_rejects_out_of_range_player():
    with pytest.raises(ValidationError):
        rdm_r_choice_row(4, (3, 2, 1))


def test_mid_priority_skips_assumed_taken_objects():
    # ranks (2,1,3,5,4) → utilities (4,5,3,1,2); player 3 may only take {3,4,5}.
    row = (2, 1, 3, 5, 4)
    assert rdm_r_choice_row(3, u_of(row)) == 3
    assert elimination_oracle({3: row}, 5).choice[2] == 3


def test_worked_example_choices(worked_profile, worked_popularity, worked_priorities):
    from ospgr import canonicalize

    canon = canonicalize(worked_profile, worked_popularity, worked_priorities)
    u = utility_matrix(canon)
    assert [rdm_r_choice(i, u) for i in (1, 2, 3)] == [1, 2, 3]


# --- elimination oracle ------------------------------------------------------


def test_oracle_identity_rows():
    assert elimination_oracle({}, 4).choice == (1, 2, 3, 4)


def test_oracle_full_profile_sequential_claims():
    # Priority 1 wants object 3; priority 2 then takes the freed object 1.
    rows = {1: (2, 3, 1), 2: (1, 2, 3), 3: (1, 2, 3)}
    assert elimination_oracle(rows, 3).choice == (3, 1, 2)


def test_oracle_differs_from_closed_form_on_actual_play():
    # The closed form answers "what does an RDM-R agent do" (it assumes
    # everyone above shares the popularity ranking); feeding the oracle the
    # full true profile instead answers "best response to actual claims".
    rows = {1: (2, 3, 1), 2: (1, 2, 3), 3: (1, 2, 3)}
    oracle = elimination_oracle(rows, 3)
    assert oracle.choice[1] == 1
    assert rdm_r_choice_row(2, u_of(rows[2])) == 2


def test_oracle_rejects_bad_rows():
    with pytest.raises(ValidationError):
        elimination_oracle({1: (1, 1, 2)}, 3)
    with pytest.raises(ValidationError):
        elimination_oracle({5: (1, 2, 3)}, 3)


# --- closed form vs oracle ---------------------------------------------------


def assert_routes_agree(n, rank_row, i):
    """Closed form and oracle must agree for the deciding player."""
    closed = rdm_r_choice_row(i, u_of(rank_row))
    oracle = elimination_oracle({i: rank_row}, n).choice[i - 1]
    assert closed == oracle, (n, rank_row, i)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_routes_agree_exhaustive(n):
    for row in itertools.permutations(range(1, n + 1)):
        for i in range(1, n + 1):
            assert_routes_agree(n, row, i)


def test_routes_agree_sampled_n5():
    rng = random.Random(91)
    for _ in range(500):
        row = tuple(rng.sample(range(1, 6), 5))
        assert_routes_agree(5, row, rng.randint(1, 5))


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), perm(n), st.integers(1, n))))
def test_choice_is_most_preferred_available(args):
    n, row, i = args
    choice = rdm_r_choice_row(i, u_of(row))
    assert i <= choice <= n
    available_ranks = [row[j - 1] for j in range(i, n + 1)]
    assert row[choice - 1] == min(available_ranks)


@given(st.integers(2, 7))
def test_identity_profile_gives_everyone_their_slot(n):
    identity = tuple(range(1, n + 1))
    for i in range(1, n + 1):
        assert rdm_r_choice_row(i, u_of(identity)) == i


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), perm(n), st.integers(1, n))), st.data())
def test_argmax_equivariant_under_tail_relabeling(args, data):
    # Shuffling the still-available objects (rank >= i) moves the choice with them.
    n, row, i = args
    rho = dict(zip(range(i, n + 1), data.draw(st.permutations(list(range(i, n + 1))))))
    new_row = list(row)
    for j in range(i, n + 1):
        new_row[rho[j] - 1] = row[j - 1]
    choice = rdm_r_choice_row(i, u_of(row))
    assert rdm_r_choice_row(i, u_of(tuple(new_row))) == rho[choice]


@given(st.integers(2, 6).flatmap(lambda n: st.lists(perm(n), min_size=n, max_size=n)))
def test_payoff_row_support_counts(rows):
    n = len(rows)
    canon = CanonicalProfile(tuple(tuple(r) for r in rows))
    table = payoff_table(utility_matrix(canon)).payoff
    for i, row in enumerate(table, start=1):
        assert sum(1 for x in row if x) == n - i + 1
