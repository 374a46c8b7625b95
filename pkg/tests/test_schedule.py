import pytest
from hypothesis import given, strategies as st

from ospgr import ValidationError, cyclic_latin_square, is_latin_square, priority_schedule


def test_cyclic_base_n2():
    assert cyclic_latin_square(2) == ((1, 2), (2, 1))


def test_cyclic_base_structure():
    square = cyclic_latin_square(5)
    assert square[0] == (1, 2, 3, 4, 5)
    assert square[3][4] == (3 + 4) % 5 + 1


def test_rejects_tiny_n():
    with pytest.raises(ValidationError):
        priority_schedule(1, seed=0)


@given(st.integers(2, 9), st.integers(0, 10_000))
def test_schedule_is_latin_square(n, seed):
    square = priority_schedule(n, seed)
    assert is_latin_square(square)


def test_schedule_deterministic_per_seed():
    assert priority_schedule(5, 123) == priority_schedule(5, 123)
    seen = {priority_schedule(5, s) for s in range(30)}
    assert len(seen) > 1  # shuffling actually does something


def test_is_latin_square_rejects_broken_tables():
    assert not is_latin_square(((1, 2), (1, 2)))
    assert not is_latin_square(((1, 2), (2,)))
    assert is_latin_square(priority_schedule(6, 7))
