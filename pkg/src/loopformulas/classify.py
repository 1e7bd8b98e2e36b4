import logging
from itertools import combinations

import networkx as nx
from pydantic import BaseModel, field_serializer

from loopformulas import Atom, AtomSet, Program, Rule
from loopformulas.core import body_holds, is_supported
from loopformulas.elementary import elementary_loops, is_trivial_loop, restrict_x
from loopformulas.errors import GuardExceeded, PropertyViolation
from loopformulas.graph import dependency_graph, sccs
from loopformulas.types import check_guard

LOG = logging.getLogger(__name__)


class ClassWitness(BaseModel, frozen=True):
    """
    Evidence for a failed class predicate: a loop and the rule index involved.
    """

    loop: AtomSet
    rule: int | None = None

    @field_serializer("loop")
    def serialize_loop(self, loop: AtomSet) -> list[int]:
        """
        Serialize the loop as a sorted list of atom indices.
        """
        return sorted(loop)


class ClassReport(BaseModel, frozen=True):
    """
    Membership of a program in the tight and head-cycle-free program classes.

    The `hef` flag is None when deciding it would exceed the enumeration
    guard. Each false predicate has an entry in `witnesses` keyed by name.
    """

    tight: bool
    e_tight: bool
    hcf: bool
    hef: bool | None = None
    witnesses: dict[str, ClassWitness] = {}


def nontrivial_loop(p: Program) -> AtomSet | None:
    """
    Find a minimal nontrivial loop of a program, if there is one.

    An atom depending positively on itself is preferred; otherwise the atoms
    of a shortest cycle in the first nontrivial strongly connected component
    are returned. Either way no proper subset is a nontrivial loop.
    """
    graph = dependency_graph(p)

    for a in sorted(graph.nodes):
        if graph.has_edge(a, a):
            return frozenset([a])

    for component in sccs(graph):
        if len(component) < 2:
            continue

        subgraph = graph.subgraph(component)
        cycles = (
            nx.shortest_path(subgraph, b, a) for a in sorted(component) for b in sorted(subgraph.successors(a))
        )
        return frozenset(min(cycles, key=len))

    return None


def _entering_rule(p: Program, loop: AtomSet) -> int | None:
    # first rule with both a head atom and a positive body atom in the loop
    return next((i for i, rule in enumerate(p.rules) if rule.head & loop and rule.pos & loop), None)


def is_tight(p: Program) -> bool:
    """
    Check whether every loop of a program is trivial.

    This is decided on the dependency graph directly: there must be no
    self-edge and no strongly connected component with several atoms.
    """
    return nontrivial_loop(p) is None


def is_e_tight(p: Program, *, verify: bool = False) -> bool:
    """
    Check whether every elementary loop of a program is trivial.

    This coincides with tightness, so the answer is taken from `is_tight`.

    Args:
        p:
            The program to classify.
        verify:
            Additionally enumerate the elementary loops of `p` and assert
            that the enumeration gives the same answer.

    Returns:
        bool:
            True if every elementary loop of `p` is trivial.

    Raises:
        GuardExceeded:
            If `verify` is set and enumeration exceeds the guard.
        PropertyViolation:
            If `verify` is set and the enumeration disagrees.
    """
    tight = is_tight(p)

    if verify and all(is_trivial_loop(p, y) for y in elementary_loops(p)) != tight:
        raise PropertyViolation("tight_iff_e_tight", "enumerated elementary loops disagree with tightness")

    return tight


def hcf_witness(p: Program) -> ClassWitness | None:
    """
    Find a rule whose head has two atoms in one strongly connected component.

    Returns:
        ClassWitness | None:
            The component and the offending rule index, or None if `p` is
            head-cycle-free.
    """
    component = {a: c for c in sccs(dependency_graph(p)) for a in c}

    for i, rule in enumerate(p.rules):
        seen: set[AtomSet] = set()
        for a in sorted(rule.head):
            if component[a] in seen:
                return ClassWitness(loop=component[a], rule=i)
            seen.add(component[a])

    return None


def is_hcf(p: Program) -> bool:
    """
    Check whether no rule head meets a loop in more than one atom.
    """
    return hcf_witness(p) is None


def hef_witness(p: Program) -> ClassWitness | None:
    """
    Find the smallest elementary loop meeting some rule head in several atoms.

    Args:
        p:
            The program to classify.

    Returns:
        ClassWitness | None:
            The first violating elementary loop in canonical order, with the
            first rule index it violates, or None if `p` is
            head-elementary-loop-free.

    Raises:
        GuardExceeded:
            If the elementary loops of `p` cannot be enumerated.
    """
    for y in elementary_loops(p):
        if len(y) < 2:
            continue

        for i, rule in enumerate(p.rules):
            if len(rule.head & y) > 1:
                return ClassWitness(loop=y, rule=i)

    return None


def is_hef(p: Program) -> bool:
    """
    Check whether no rule head meets an elementary loop in more than one atom.

    See hef_witness() for documentation.
    """
    return hef_witness(p) is None


def classify(p: Program) -> ClassReport:
    """
    Classify a program, collecting a witness for every failed predicate.

    Args:
        p:
            The program to classify.

    Returns:
        ClassReport:
            The class memberships of `p`; `hef` is None when it cannot be
            decided within the enumeration guard.
    """
    witnesses: dict[str, ClassWitness] = {}

    if (loop := nontrivial_loop(p)) is not None:
        witnesses["tight"] = witnesses["e_tight"] = ClassWitness(loop=loop, rule=_entering_rule(p, loop))

    if (hcf := hcf_witness(p)) is not None:
        witnesses["hcf"] = hcf

    # every head-cycle-free program is also head-elementary-loop-free
    hef: bool | None = True
    if hcf is not None:
        try:
            if (found := hef_witness(p)) is not None:
                witnesses["hef"] = found
            hef = found is None
        except GuardExceeded:
            LOG.info("leaving HEF undecided for %d atoms", len(p.atoms))
            hef = None

    return ClassReport(
        tight=loop is None,
        e_tight=loop is None,
        hcf=hcf is None,
        hef=hef,
        witnesses=witnesses,
    )


def shift(p: Program) -> Program:
    """
    Replace every disjunctive rule by one rule per head atom.

    Each replacement keeps a single head atom and moves the other head atoms
    into the negated body. Replacements take the position of the original
    rule, ordered by head atom index; other rules are copied as they are.

    Args:
        p:
            The program to shift.

    Returns:
        Program:
            The shifted program over the same atom table.
    """
    rules: list[Rule] = []

    for rule in p.rules:
        if len(rule.head) <= 1:
            rules.append(rule)
            continue

        for a in sorted(rule.head):
            rules.append(
                Rule.model_construct(
                    head=frozenset([a]), pos=rule.pos, neg=rule.neg | (rule.head - {a}), dneg=rule.dneg
                )
            )

    return p.subprogram(rules)


def is_inherently_tight(p: Program, x: AtomSet) -> bool:
    """
    Check whether some tight subset of a program supports `x`.

    Atoms of `x` are derived one at a time: an atom becomes derivable once a
    rule with its body true in `x` has a head meeting `x` in exactly that
    atom, and all of its positive body atoms have already been derived. The
    program is inherently tight on `x` exactly when all of `x` is derived.

    Args:
        p:
            The program to check against.
        x:
            The interpretation to support.

    Returns:
        bool:
            True if the derivation reaches all of `x`.
    """
    candidates = [
        (next(iter(rule.head & x)), rule.pos) for rule in p.rules if body_holds(x, rule) and len(rule.head & x) == 1
    ]

    derived: set[int] = set()
    rounds = 0

    while True:
        rounds += 1
        fresh = {a for a, pos in candidates if a not in derived and pos <= derived}
        if not fresh:
            break
        derived |= fresh

    LOG.debug("derivation over %d atoms stopped after %d rounds", len(x), rounds)
    return derived == x


def is_inherently_tight_bruteforce(p: Program, x: AtomSet) -> bool:
    """
    Search all subsets of the supporting rules for a tight one which supports `x`.

    Raises:
        GuardExceeded:
            If there are too many supporting rules to enumerate subsets of.
    """
    supporting = [rule for rule in p.rules if body_holds(x, rule) and len(rule.head & x) == 1]
    check_guard(len(supporting), "supporting rule subset enumeration")

    # subsets of rules cannot support what all of them together do not
    if not is_supported(p.subprogram(supporting), x):
        return False

    for size in range(len(supporting) + 1):
        for chosen in combinations(supporting, size):
            subprogram = p.subprogram(chosen)
            if is_supported(subprogram, x) and is_tight(subprogram):
                return True

    return False


def unfoundedfree_reduction(p: Program, x: AtomSet) -> tuple[Program, Atom]:
    """
    Build the program whose elementary loop check decides unfounded-freeness of `x`.

    A fresh atom `e` is added to the positive body of every rule which can
    support `x` under `x`, and rules `e :- a` are added for every atom of
    `x` and for `e` itself. Then `x` contains no nonempty unfounded set for
    `p` with respect to `x` exactly when `x` plus `e` is an elementary loop
    of the constructed program.

    Args:
        p:
            The program to reduce from.
        x:
            The set of atoms to check for unfounded-freeness.

    Returns:
        tuple[Program, Atom]:
            The constructed program over an extended atom table, and the
            fresh atom `e` (named `e`, `e1`, `e2`, ... whichever is unused).
    """
    extended, e = p.fresh("e")

    rules = [
        Rule.model_construct(head=rule.head, pos=rule.pos | {e.index}, neg=rule.neg, dneg=rule.dneg)
        for rule in restrict_x(p, x).rules
    ]
    rules.extend(
        Rule.model_construct(head=frozenset([e.index]), pos=frozenset([a]), neg=frozenset(), dneg=frozenset())
        for a in sorted(x | {e.index})
    )

    return extended.subprogram(rules), e
