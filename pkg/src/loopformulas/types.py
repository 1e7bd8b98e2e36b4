import logging
import os
from contextlib import contextmanager
from contextvars import ContextVar
from itertools import combinations
from typing import Iterable, Iterator

from loopformulas import AtomSet
from loopformulas.errors import GuardExceeded

LOG = logging.getLogger(__name__)

# default ceiling on the number of atoms an enumeration may range over
DEFAULT_MAX_ATOMS = 20

# environment override for the default ceiling
MAX_ATOMS_VARIABLE = "LOOPFORMULAS_MAX_ATOMS"

# number of answers memoized by each cached program analysis
CACHE_SIZE = 1 << 16

_limit: ContextVar[int | None] = ContextVar("loopformulas_max_atoms", default=None)


def max_atoms() -> int:
    """
    Retrieve the active enumeration limit.

    Returns:
        int:
            The limit set via `enumeration_limit`, or else the value of the
            `LOOPFORMULAS_MAX_ATOMS` environment variable, or else the
            built-in default of 20.
    """
    if (limit := _limit.get()) is not None:
        return limit

    if value := os.environ.get(MAX_ATOMS_VARIABLE):
        return int(value)

    return DEFAULT_MAX_ATOMS


@contextmanager
def enumeration_limit(limit: int) -> Iterator[None]:
    """
    Temporarily override the enumeration limit within the current context.

    Args:
        limit:
            The maximum number of atoms any guarded enumeration may range
            over while the context is active.
    """
    if limit < 0:
        raise ValueError("Enumeration limit must be non-negative")

    token = _limit.set(limit)
    try:
        yield
    finally:
        _limit.reset(token)


def check_guard(size: int, what: str) -> None:
    """
    Refuse an enumeration over more atoms than the active limit.

    Args:
        size:
            The number of atoms the caller is about to enumerate subsets of.
        what:
            A short description of the enumeration, used in diagnostics.

    Raises:
        GuardExceeded:
            If `size` is above the active enumeration limit.
    """
    if size > (limit := max_atoms()):
        LOG.debug("refusing %s over %d atoms (limit %d)", what, size, limit)
        raise GuardExceeded(size, limit, what)


def canonical_key(atoms: AtomSet) -> tuple[int, tuple[int, ...]]:
    """
    Sort key ordering sets by cardinality, then by their ascending members.
    """
    return len(atoms), tuple(sorted(atoms))


def canonical(sets: Iterable[AtomSet]) -> list[AtomSet]:
    """
    Deduplicate and sort a collection of atom sets canonically.
    """
    return sorted(set(sets), key=canonical_key)


def subsets(atoms: Iterable[int], *, proper: bool = False, empty: bool = False) -> Iterator[AtomSet]:
    """
    Enumerate subsets of a set of atoms in canonical order.

    Subsets are produced by ascending cardinality, and within a cardinality
    by ascending atom indices.

    Args:
        atoms:
            The atoms to draw subsets from.
        proper:
            Whether to skip the full set itself.
        empty:
            Whether to include the empty set.

    Returns:
        Iterator[AtomSet]:
            A lazy stream of the requested subsets.
    """
    ordered = sorted(set(atoms))
    upper = len(ordered) - 1 if proper else len(ordered)

    for size in range(0 if empty else 1, upper + 1):
        for chosen in combinations(ordered, size):
            yield frozenset(chosen)
