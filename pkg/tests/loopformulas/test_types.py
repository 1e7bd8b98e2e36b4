import pytest

from loopformulas.errors import GuardExceeded
from loopformulas.types import canonical, check_guard, enumeration_limit, max_atoms, subsets


def test_max_atoms_default():
    """
    Test the enumeration limit configured for the test environment.
    """
    assert max_atoms() == 20


def test_max_atoms_environment(monkeypatch: pytest.MonkeyPatch):
    """
    Test overriding the enumeration limit through the environment.
    """
    monkeypatch.setenv("LOOPFORMULAS_MAX_ATOMS", "5")
    assert max_atoms() == 5


def test_enumeration_limit_nested(monkeypatch: pytest.MonkeyPatch):
    """
    Test that context overrides take precedence over the environment and unwind in order.
    """
    monkeypatch.setenv("LOOPFORMULAS_MAX_ATOMS", "5")

    with enumeration_limit(3):
        assert max_atoms() == 3

        with enumeration_limit(8):
            assert max_atoms() == 8

        assert max_atoms() == 3

    assert max_atoms() == 5


def test_enumeration_limit_negative():
    """
    Test rejection of a negative enumeration limit.
    """
    with pytest.raises(ValueError):
        with enumeration_limit(-1):
            pass


def test_check_guard():
    """
    Test that the guard admits sizes up to the limit and refuses larger ones.
    """
    with enumeration_limit(4):
        check_guard(4, "test enumeration")

        with pytest.raises(GuardExceeded) as error:
            check_guard(5, "test enumeration")

    assert error.value.size == 5
    assert error.value.limit == 4
    assert error.value.what == "test enumeration"
    assert "exceeds the enumeration limit of 4" in str(error.value)


def test_subsets_order():
    """
    Test that subsets are produced by cardinality, then by ascending members.
    """
    assert list(subsets({2, 0, 1})) == [
        frozenset({0}),
        frozenset({1}),
        frozenset({2}),
        frozenset({0, 1}),
        frozenset({0, 2}),
        frozenset({1, 2}),
        frozenset({0, 1, 2}),
    ]


def test_subsets_flags():
    """
    Test the inclusion of the empty set and exclusion of the full set.
    """
    assert list(subsets({0, 1}, proper=True, empty=True)) == [frozenset(), frozenset({0}), frozenset({1})]
    assert list(subsets(set(), empty=True)) == [frozenset()]
    assert list(subsets(set())) == []


def test_canonical():
    """
    Test deduplication and canonical ordering of atom sets.
    """
    sets = [frozenset({3}), frozenset({0, 1}), frozenset({1}), frozenset({3}), frozenset({0, 1})]
    assert canonical(sets) == [frozenset({1}), frozenset({3}), frozenset({0, 1})]
