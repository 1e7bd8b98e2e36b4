import logging
from functools import lru_cache

from loopformulas import AtomSet, Program
from loopformulas.core import body_holds
from loopformulas.errors import PreconditionViolated
from loopformulas.graph import dependency_graph, elementary_subgraph, is_loop, is_strongly_connected, loops
from loopformulas.types import CACHE_SIZE, canonical, check_guard, max_atoms, subsets

LOG = logging.getLogger(__name__)


def is_outbound(p: Program, y: AtomSet, x: AtomSet) -> bool:
    """
    Check whether a subset `y` of `x` is outbound in `x` for a program.

    This holds when some rule has a head meeting `y` but not `x - y`, and a
    positive body meeting `x - y` but not `y`.

    Args:
        p:
            The program providing candidate rules.
        y:
            The subset being tested.
        x:
            The enclosing set of atoms.

    Returns:
        bool:
            True if some rule satisfies all four conditions.

    Raises:
        PreconditionViolated:
            If `y` is not a subset of `x`.
    """
    if not y <= x:
        raise PreconditionViolated("outbound check requires a subset of the enclosing set")

    rest = x - y
    return any(
        rule.head & y and rule.pos & rest and not (rule.head & rest) and not (rule.pos & y) for rule in p.rules
    )


def non_outbound_subset(p: Program, x: AtomSet) -> AtomSet | None:
    """
    Find the first nonempty proper subset of `x` which is not outbound in `x`.

    Subsets are visited in canonical order, so the witness is the smallest
    such subset.

    Raises:
        GuardExceeded:
            If `x` is too large to enumerate subsets of.
    """
    check_guard(len(x), "outbound subset search")

    for y in subsets(x, proper=True):
        if not is_outbound(p, y, x):
            return y

    return None


def is_loop_by_outbound(p: Program, x: AtomSet) -> bool:
    """
    Decide loop membership through the rules connecting subsets of `x`.

    A nonempty set of occurring atoms is a loop exactly when every nonempty
    proper subset has a rule whose head meets the subset and whose positive
    body meets the rest of `x`.

    Raises:
        GuardExceeded:
            If `x` is too large to enumerate subsets of.
    """
    if not x or not x <= p.atoms:
        return False

    check_guard(len(x), "loop subset search")

    for y in subsets(x, proper=True):
        rest = x - y
        if not any(rule.head & y and rule.pos & rest for rule in p.rules):
            return False

    return True


def is_elementary_loop(p: Program, x: AtomSet, *, assume_hef: bool = False) -> bool:
    """
    Check whether a set of atoms is an elementary loop of a program.

    For nondisjunctive programs (and for any program when `assume_hef` is
    set) the answer is read off the strong connectivity of the elementary
    subgraph of `x`. Otherwise every nonempty proper subset of `x` has to
    be outbound in `x`.

    Args:
        p:
            The program to check against.
        x:
            The candidate set of atoms.
        assume_hef:
            Trust that `p` is head-elementary-loop-free and use the graph
            based decision procedure even though `p` is disjunctive.

    Returns:
        bool:
            True if `x` is an elementary loop of `p`; sets which are empty
            or mention atoms not occurring in `p` are never elementary loops.

    Raises:
        GuardExceeded:
            If subset enumeration is required and `x` is too large.
    """
    if not x or not x <= p.atoms:
        return False

    if p.is_nondisjunctive or assume_hef:
        return is_strongly_connected(elementary_subgraph(p, x))

    if len(x) == 1:
        return True

    # within the guard, non-loops already fail on their smallest subsets
    if len(x) > max_atoms() and not is_loop(p, x):
        return False

    return non_outbound_subset(p, x) is None


def elementary_loops(p: Program, *, assume_hef: bool = False) -> list[AtomSet]:
    """
    Enumerate all elementary loops of a program.

    Args:
        p:
            The program to enumerate elementary loops of.
        assume_hef:
            Forwarded to `is_elementary_loop` for each candidate.

    Returns:
        list[AtomSet]:
            All elementary loops of `p`, canonically ordered.

    Raises:
        GuardExceeded:
            If the loops of `p` cannot be enumerated within the guard.
    """
    # refuse oversized components before consulting the cache
    loops(p)
    return list(_elementary_loops(p, assume_hef))


@lru_cache(maxsize=CACHE_SIZE)
def _elementary_loops(p: Program, assume_hef: bool) -> tuple[AtomSet, ...]:
    found = [y for y in loops(p) if is_elementary_loop(p, y, assume_hef=assume_hef)]
    LOG.debug("found %d elementary loops", len(found))

    return tuple(canonical(found))


def restrict_xy(p: Program, x: AtomSet, y: AtomSet) -> Program:
    """
    Select the rules of a program which can provide support for `y` under `x`.

    A rule is kept when its body holds in `x` and its head has no atom of
    `x` outside of `y`. Rule order is preserved.
    """
    return p.subprogram(rule for rule in p.rules if body_holds(x, rule) and not (x & (rule.head - y)))


def restrict_x(p: Program, x: AtomSet) -> Program:
    """
    Select the rules of a program which can provide support for `x` under `x`.
    """
    return restrict_xy(p, x, x)


@lru_cache(maxsize=CACHE_SIZE)
def is_supporting_elementary_loop(p: Program, x: AtomSet, y: AtomSet) -> bool:
    """
    Check whether `y` is an elementary loop of the rules able to support it under `x`.

    Answers are memoized per program, interpretation and set, as the
    stability criteria and unfounded set searches ask the same questions.

    Raises:
        GuardExceeded:
            If subset enumeration is required and `y` is too large.
    """
    return is_elementary_loop(restrict_xy(p, x, y), y)


def is_trivial_loop(p: Program, l: AtomSet) -> bool:
    """
    Check whether a set is a single occurring atom without a positive self-dependency.

    Args:
        p:
            The program to check against.
        l:
            The candidate loop.

    Returns:
        bool:
            True if `l = {a}` for an occurring atom `a` and no rule has `a`
            in both its head and its positive body.
    """
    if len(l) != 1 or not l <= p.atoms:
        return False

    (a,) = l
    return not any(a in rule.head and a in rule.pos for rule in p.rules)


def is_gs_elementary(p: Program, l: AtomSet) -> bool:
    """
    Check the rule-set based elementary loop condition for nondisjunctive programs.

    A nontrivial loop `L` qualifies when, for every proper subset `L'` that
    is itself a nontrivial loop, some rule with its head in `L'` and no
    positive body atom in `L'` also has its head in `L` and a positive
    body atom in `L`.

    Args:
        p:
            A nondisjunctive program.
        l:
            The candidate loop.

    Returns:
        bool:
            True if `l` is a nontrivial loop meeting the condition above.

    Raises:
        PreconditionViolated:
            If `p` is disjunctive.
        GuardExceeded:
            If `l` is too large to enumerate subsets of.
    """
    if not p.is_nondisjunctive:
        raise PreconditionViolated("GS-elementary loops are only defined for nondisjunctive programs")

    graph = dependency_graph(p)

    def nontrivial_loop(s: AtomSet) -> bool:
        if not is_loop(p, s):
            return False

        return len(s) > 1 or any(graph.has_edge(a, a) for a in s)

    def internal(s: AtomSet) -> set[int]:
        # rules whose head is in s and whose positive body re-enters s
        return {i for i, rule in enumerate(p.rules) if rule.head <= s and rule.pos & s}

    def external(s: AtomSet) -> set[int]:
        return {i for i, rule in enumerate(p.rules) if rule.head <= s and not (rule.pos & s)}

    if not nontrivial_loop(l):
        return False

    check_guard(len(l), "GS-elementary subset search")

    supported = internal(l)
    return all(external(s) & supported for s in subsets(l, proper=True) if nontrivial_loop(s))
