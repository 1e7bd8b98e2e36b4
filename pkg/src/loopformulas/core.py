import logging
from functools import lru_cache

from loopformulas import AtomSet, Program, Rule
from loopformulas.types import CACHE_SIZE, canonical, check_guard, subsets

LOG = logging.getLogger(__name__)


def atoms(p: Program) -> AtomSet:
    """
    Retrieve the atoms occurring anywhere in a program.
    """
    return p.atoms


def body_holds(x: AtomSet, rule: Rule) -> bool:
    """
    Check whether an interpretation satisfies the body of a rule.

    Args:
        x:
            The interpretation, as the set of atoms which are true.
        rule:
            The rule whose positive, negated and doubly negated literals
            are evaluated.

    Returns:
        bool:
            True if every positive atom is in `x`, no negated atom is in
            `x`, and every doubly negated atom is in `x`.
    """
    return rule.pos <= x and not (rule.neg & x) and rule.dneg <= x


def satisfies_rule(x: AtomSet, rule: Rule) -> bool:
    """
    Check whether an interpretation satisfies a rule read as an implication.

    A constraint (empty head) is satisfied exactly when its body fails.
    """
    return not body_holds(x, rule) or bool(rule.head & x)


def is_model(x: AtomSet, p: Program) -> bool:
    """
    Check whether an interpretation satisfies every rule of a program.
    """
    return all(satisfies_rule(x, rule) for rule in p.rules)


def reduct(p: Program, x: AtomSet) -> Program:
    """
    Compute the reduct of a program relative to an interpretation.

    Rules whose negative or doubly negated literals fail under `x` are
    deleted, and the remaining rules keep only their head and positive body.

    Args:
        p:
            The program to reduce.
        x:
            The interpretation the negative literals are evaluated against.

    Returns:
        Program:
            A positive program over the same atom table, in source order.
    """
    return p.subprogram(
        Rule.model_construct(head=rule.head, pos=rule.pos, neg=frozenset(), dneg=frozenset())
        for rule in p.rules
        if not (rule.neg & x) and rule.dneg <= x
    )


def least_model(p: Program) -> AtomSet:
    """
    Compute the least model of a positive program by forward chaining.

    Only rules with at most one head atom are meaningful here; constraints
    are ignored, as they cannot derive atoms.

    Args:
        p:
            A positive program whose rules have at most one head atom.

    Returns:
        AtomSet:
            The smallest set of atoms closed under the rules of `p`.
    """
    derived: set[int] = set()
    pending = [rule for rule in p.rules if rule.head]

    # fire rules until nothing new can be derived
    changed = True
    while changed:
        changed = False
        waiting = []

        for rule in pending:
            if rule.pos <= derived:
                derived |= rule.head
                changed = True
            else:
                waiting.append(rule)

        pending = waiting

    return frozenset(derived)


def is_stable(p: Program, x: AtomSet) -> bool:
    """
    Check whether an interpretation is a stable model of a program.

    The interpretation needs to satisfy the reduct of `p` relative to
    itself, and no proper subset of it may satisfy that reduct as well.
    When every rule of the reduct has at most one head atom, minimality is
    decided through the least model of the reduct; otherwise the proper
    subsets of `x` are enumerated.

    Args:
        p:
            The program to check against.
        x:
            The candidate interpretation, which need not be a model of `p`.

    Returns:
        bool:
            True if `x` is a stable model of `p`.

    Raises:
        GuardExceeded:
            If subset enumeration is required and `x` is too large.
    """
    reduced = reduct(p, x)
    if not is_model(x, reduced):
        return False

    if all(len(rule.head) <= 1 for rule in reduced.rules):
        return least_model(reduced) == x

    check_guard(len(x), "stable model minimality")
    return not any(is_model(y, reduced) for y in subsets(x, proper=True, empty=True))


def is_stable_bruteforce(p: Program, x: AtomSet) -> bool:
    """
    Check stability by comparing against every subset of the occurring atoms.
    """
    reduced = reduct(p, x)
    if not is_model(x, reduced):
        return False

    check_guard(len(p.atoms | x), "stable model oracle")
    return not any(y < x and is_model(y, reduced) for y in subsets(p.atoms | x, empty=True))


def models(p: Program) -> list[AtomSet]:
    """
    Enumerate all models of a program over its occurring atoms.

    Args:
        p:
            The program to enumerate models of.

    Returns:
        list[AtomSet]:
            Every subset of the occurring atoms satisfying `p`, canonically
            ordered.

    Raises:
        GuardExceeded:
            If the program has too many atoms to enumerate.
    """
    check_guard(len(p.atoms), "model enumeration")
    return list(_models(p))


@lru_cache(maxsize=CACHE_SIZE)
def _models(p: Program) -> tuple[AtomSet, ...]:
    return tuple(x for x in subsets(p.atoms, empty=True) if is_model(x, p))


def stable_models(p: Program) -> list[AtomSet]:
    """
    Enumerate all stable models of a program.

    Args:
        p:
            The program to enumerate stable models of.

    Returns:
        list[AtomSet]:
            Every stable model, canonically ordered.

    Raises:
        GuardExceeded:
            If the program has too many atoms to enumerate.
    """
    check_guard(len(p.atoms), "stable model enumeration")
    return list(_stable_models(p))


@lru_cache(maxsize=CACHE_SIZE)
def _stable_models(p: Program) -> tuple[AtomSet, ...]:
    found = [x for x in _models(p) if is_stable(p, x)]
    LOG.debug("found %d stable models over %d atoms", len(found), len(p.atoms))

    return tuple(canonical(found))


def supporting_rules(p: Program, x: AtomSet, a: int) -> list[Rule]:
    """
    Retrieve the rules of a program which support an atom within an interpretation.

    A rule supports `a` when its body holds in `x` and its head meets `x`
    exactly in `a`.
    """
    return [rule for rule in p.rules if body_holds(x, rule) and rule.head & x == {a}]


def is_supported(p: Program, x: AtomSet) -> bool:
    """
    Check whether every atom of an interpretation has a supporting rule.

    Args:
        p:
            The program providing candidate supporting rules.
        x:
            The interpretation to check.

    Returns:
        bool:
            True if each atom of `x` is supported by some rule of `p`.
    """
    return all(supporting_rules(p, x, a) for a in x)
