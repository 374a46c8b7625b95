from __future__ import annotations

from pathlib import Path

import pytest

import ospgr

DATA = Path(__file__).parent / "data"


def count_inversions_mergesort(seq):
    """Inversion count via merge sort — independent of the library's counter."""
    items = list(seq)
    if len(items) <= 1:
        return 0
    mid = len(items) // 2
    left, right = items[:mid], items[mid:]
    inv = count_inversions_mergesort(left) + count_inversions_mergesort(right)
    left.sort()
    right.sort()
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            i += 1
        else:
            inv += len(left) - i
            j += 1
    return inv


@pytest.fixture
def worked_profile():
    return ospgr.PreferenceProfile.from_rows([(1, 2, 3), (1, 2, 3), (2, 1, 3)])


@pytest.fixture
def worked_popularity(worked_profile):
    return ospgr.popularity_ranking(ospgr.borda_scores(worked_profile))


@pytest.fixture
def worked_priorities():
    return ospgr.PriorityAssignment((1, 3, 2))


@pytest.fixture
def case1():
    return ospgr.read_session(DATA / "case1_session.json")


@pytest.fixture
def case2():
    return ospgr.read_session(DATA / "case2_session.json")


@pytest.fixture
def golden():
    return ospgr.read_session(DATA / "golden_n5.session.json")
