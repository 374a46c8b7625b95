import itertools

import pytest
from hypothesis import given, strategies as st

from ospgr import (
    BordaScores,
    PopularityRanking,
    PreferenceProfile,
    PriorityAssignment,
    RoundOutcome,
    ValidationError,
    allocate,
    borda_scores,
    canonicalize,
    kendall_tau,
    popularity_ranking,
)

perm = lambda n: st.permutations(list(range(1, n + 1)))


def profiles(min_n=2, max_n=6):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(perm(n), min_size=n, max_size=n)
    ).map(PreferenceProfile.from_rows)


# --- types -----------------------------------------------------------------


def test_profile_rejects_non_permutation_rows():
    with pytest.raises(ValidationError):
        PreferenceProfile.from_rows([(1, 1, 2), (1, 2, 3), (1, 2, 3)])


def test_profile_rejects_ragged_rows():
    with pytest.raises(ValidationError):
        PreferenceProfile.from_rows([(1, 2), (1, 2, 3)])


def test_rank_accessor(worked_profile):
    assert worked_profile.rank(3, 1) == 2  # player 3 ranks object 1 second
    assert worked_profile.rank(1, 1) == 1


def test_priority_assignment_accessors():
    pri = PriorityAssignment((2, 3, 1))
    assert pri.priority_of(1) == 2
    assert pri.player_with_priority(1) == 3
    with pytest.raises(ValidationError):
        PriorityAssignment((1, 1, 2))


def test_outcome_consistency_enforced():
    with pytest.raises(ValidationError):
        RoundOutcome(choices=(1, 2), obtained=(2, None))  # got something unchosen
    with pytest.raises(ValidationError):
        RoundOutcome(choices=(1, 1), obtained=(1, 1))  # same object twice


# --- borda + popularity ------------------------------------------------------


def test_worked_example_borda(worked_profile):
    assert borda_scores(worked_profile).scores == (8, 7, 3)


def test_worked_example_popularity(worked_popularity):
    assert worked_popularity.rank_of_object == (1, 2, 3)
    assert worked_popularity.tie_flags == frozenset()


def test_popularity_tie_broken_by_raw_index():
    # Opposite rankings: both objects score 3; object 1 wins by index.
    profile = PreferenceProfile.from_rows([(1, 2), (2, 1)])
    pop = popularity_ranking(borda_scores(profile))
    assert pop.rank_of_object == (1, 2)
    assert pop.tie_flags == frozenset({(1, 2)})


def test_borda_scores_validated():
    with pytest.raises(ValidationError):
        BordaScores((1, 2))  # conservation violated for n=2


@given(profiles())
def test_borda_conservation(profile):
    n = profile.n
    assert sum(borda_scores(profile).scores) == n * n * (n + 1) // 2


@given(profiles())
def test_popularity_is_permutation_and_score_monotone(profile):
    scores = borda_scores(profile)
    pop = popularity_ranking(scores)
    assert sorted(pop.rank_of_object) == list(range(1, profile.n + 1))
    by_rank = [scores.scores[pop.object_with_rank(k) - 1] for k in range(1, profile.n + 1)]
    assert by_rank == sorted(by_rank, reverse=True)


@given(profiles())
def test_tied_scores_resolve_to_lower_raw_index(profile):
    scores = borda_scores(profile)
    pop = popularity_ranking(scores)
    for a, b in pop.tie_flags:
        assert scores.scores[a - 1] == scores.scores[b - 1]
        assert pop.rank_of(a) < pop.rank_of(b)


# --- canonicalize ------------------------------------------------------------


def test_canonicalize_worked_example(worked_profile, worked_popularity, worked_priorities):
    canon = canonicalize(worked_profile, worked_popularity, worked_priorities)
    # row i = prefs of the priority-i player over popularity-ordered objects
    assert canon.ranks == ((1, 2, 3), (2, 1, 3), (1, 2, 3))


def test_canonicalize_reorders_columns():
    profile = PreferenceProfile.from_rows([(3, 1, 2), (3, 1, 2), (3, 2, 1)])
    pop = popularity_ranking(borda_scores(profile))
    assert pop.rank_of_object == (3, 1, 2)  # object 2 most popular
    canon = canonicalize(profile, pop, PriorityAssignment((1, 2, 3)))
    assert canon.ranks[0] == (1, 2, 3)


@given(profiles(), st.data())
def test_canonical_rows_are_permutations(profile, data):
    n = profile.n
    pri = PriorityAssignment(tuple(data.draw(perm(n))))
    pop = popularity_ranking(borda_scores(profile))
    canon = canonicalize(profile, pop, pri)
    for row in canon.ranks:
        assert sorted(row) == list(range(1, n + 1))


@given(profiles(), st.data())
def test_canonicalize_inverts_cleanly(profile, data):
    # Undoing the player/object relabeling must recover the raw profile.
    n = profile.n
    pri = PriorityAssignment(tuple(data.draw(perm(n))))
    pop = popularity_ranking(borda_scores(profile))
    canon = canonicalize(profile, pop, pri)
    rebuilt = [
        [canon.ranks[pri.priority_of(p) - 1][pop.rank_of(o) - 1] for o in range(1, n + 1)]
        for p in range(1, n + 1)
    ]
    assert PreferenceProfile.from_rows(rebuilt).ranks == profile.ranks


# --- allocate ----------------------------------------------------------------


def test_allocate_case1(worked_priorities):
    out = allocate((1, 2, 2), worked_priorities)
    assert out.obtained == (1, None, 2)


def test_allocate_case2(worked_priorities):
    out = allocate((1, 3, 1), worked_priorities)
    assert out.obtained == (1, 3, None)


def test_allocate_all_distinct_everyone_wins():
    out = allocate((2, 3, 1), PriorityAssignment((3, 1, 2)))
    assert out.obtained == (2, 3, 1)


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(
    st.lists(st.integers(1, n), min_size=n, max_size=n), perm(n))))
def test_allocate_properties(draw):
    choices, priorities = draw
    n = len(choices)
    out = allocate(tuple(choices), PriorityAssignment(tuple(priorities)))
    got = [x for x in out.obtained if x is not None]
    assert len(got) == len(set(got))  # no object handed out twice
    top = priorities.index(1)
    assert out.obtained[top] == choices[top]  # priority 1 never loses
    for obj in set(choices):
        contenders = [i for i in range(n) if choices[i] == obj]
        winner = min(contenders, key=lambda i: priorities[i])
        for i in contenders:
            assert (out.obtained[i] == obj) == (i == winner)


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(
    st.lists(st.integers(1, n), min_size=n, max_size=n), perm(n), perm(n), perm(n))))
def test_allocate_invariant_under_relabeling(draw):
    # Renaming players and objects together renames the outcome and nothing else.
    choices, priorities, sigma, pi = draw
    n = len(choices)
    out = allocate(tuple(choices), PriorityAssignment(tuple(priorities)))
    new_choices, new_priorities = [0] * n, [0] * n
    for i in range(n):
        new_choices[sigma[i] - 1] = pi[choices[i] - 1]
        new_priorities[sigma[i] - 1] = priorities[i]
    relabeled = allocate(tuple(new_choices), PriorityAssignment(tuple(new_priorities)))
    for i in range(n):
        want = None if out.obtained[i] is None else pi[out.obtained[i] - 1]
        assert relabeled.obtained[sigma[i] - 1] == want


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(
    st.lists(st.integers(1, n), min_size=n, max_size=n), perm(n))))
def test_allocate_unchanged_when_a_loser_leaves(draw):
    # Dropping a player who got Nothing cannot change anyone else's outcome.
    # The n-1 survivors must play an (n-1)-object game, so compact priorities
    # and surviving objects order-preservingly (harmless by relabel invariance).
    choices, priorities = draw
    n = len(choices)
    out = allocate(tuple(choices), PriorityAssignment(tuple(priorities)))
    for gone in (i for i in range(n) if out.obtained[i] is None):
        keep = [i for i in range(n) if i != gone]
        relabel = {obj: k for k, obj in enumerate(sorted({choices[i] for i in keep}), 1)}
        order = sorted(keep, key=lambda i: priorities[i])
        sub = allocate(
            tuple(relabel[choices[i]] for i in keep),
            PriorityAssignment(tuple(order.index(i) + 1 for i in keep)),
        )
        for pos, i in enumerate(keep):
            want = None if out.obtained[i] is None else relabel[out.obtained[i]]
            assert sub.obtained[pos] == want


# --- kendall tau -------------------------------------------------------------


def test_tau_identity_and_reverse():
    assert kendall_tau((1, 2, 3, 4, 5)) == 0
    assert kendall_tau((5, 4, 3, 2, 1)) == 10
    assert kendall_tau((2, 1, 3)) == 1


def test_tau_matches_independent_counter():
    from conftest import count_inversions_mergesort

    for p in itertools.permutations(range(1, 6)):
        assert kendall_tau(p) == count_inversions_mergesort(p)


@given(st.integers(1, 8).flatmap(perm))
def test_tau_bounds(seq):
    n = len(seq)
    assert 0 <= kendall_tau(seq) <= n * (n - 1) // 2


@given(st.integers(1, 8).flatmap(perm))
def test_tau_equals_tau_of_inverse(seq):
    inverse = [0] * len(seq)
    for pos, val in enumerate(seq):
        inverse[val - 1] = pos + 1
    assert kendall_tau(seq) == kendall_tau(tuple(inverse))
