import logging
from enum import Enum
from typing import Callable, Iterable

from loopformulas import AtomSet, Program, Rule
from loopformulas.core import body_holds, is_model, is_stable, reduct
from loopformulas.elementary import elementary_loops, is_supporting_elementary_loop
from loopformulas.errors import PreconditionViolated
from loopformulas.graph import is_loop, loops
from loopformulas.types import canonical, check_guard, subsets

LOG = logging.getLogger(__name__)


class StabilityCriterion(str, Enum):
    """
    Equivalent characterizations of stability for a model of a program.
    """

    # the model is minimal among the models of its reduct
    A = "a"
    # every nonempty set of occurring atoms satisfies its loop formula
    B = "b"
    # no nonempty subset of the model is unfounded
    BPRIME = "bprime"
    # every loop satisfies its loop formula
    C = "c"
    # every elementary loop satisfies its loop formula
    D = "d"
    # every maximal elementary loop of its supporting subprogram, and every
    # singleton, satisfies its loop formula
    E = "e"
    # the model contains no elementarily unfounded set
    EPRIME = "eprime"


def _supports(x: AtomSet, y: AtomSet, rule: Rule) -> bool:
    return bool(rule.head & y) and not (rule.pos & y) and body_holds(x, rule) and not (x & (rule.head - y))


def externally_supported(p: Program, y: AtomSet, x: AtomSet) -> bool:
    """
    Check whether `x` satisfies the external support formula of `y`.

    Some rule needs to have a head meeting `y`, a positive body avoiding
    `y`, a body which holds in `x`, and no head atom in `x` outside of `y`.

    Args:
        p:
            The program providing candidate supporting rules.
        y:
            The set of atoms looking for support from outside of itself.
        x:
            The interpretation the formula is evaluated in.

    Returns:
        bool:
            True if some rule of `p` supports `y` externally under `x`.
    """
    return any(_supports(x, y, rule) for rule in p.rules)


def loop_formula_holds(p: Program, y: AtomSet, x: AtomSet) -> bool:
    """
    Check whether `x` satisfies the loop formula of `y`.

    The loop formula states that when all of `y` is true, `y` is externally
    supported.

    Raises:
        PreconditionViolated:
            If `y` is empty.
    """
    if not y:
        raise PreconditionViolated("loop formulas are only defined for nonempty sets")

    return not y <= x or externally_supported(p, y, x)


def is_unfounded(p: Program, y: AtomSet, x: AtomSet) -> bool:
    """
    Check whether `y` is unfounded by `p` with respect to `x`.

    The empty set is always unfounded, as there is nothing to support it.
    """
    return not externally_supported(p, y, x)


def is_elementarily_unfounded(p: Program, y: AtomSet, x: AtomSet) -> bool:
    """
    Check whether `y` is an elementarily unfounded set for `p` with respect to `x`.

    Such a set is either an unfounded singleton, or an unfounded elementary
    loop of the subprogram of rules able to support `y` under `x`.

    Args:
        p:
            The program to check against.
        y:
            A nonempty set of occurring atoms.
        x:
            The interpretation the support is evaluated in.

    Returns:
        bool:
            True if `y` is elementarily unfounded.

    Raises:
        PreconditionViolated:
            If `y` is empty or mentions atoms which do not occur in `p`.
    """
    if not y or not y <= p.atoms:
        raise PreconditionViolated("elementarily unfounded sets are nonempty sets of occurring atoms")

    if not is_unfounded(p, y, x):
        return False

    return len(y) == 1 or is_supporting_elementary_loop(p, x, y)


def elementarily_unfounded_sets(p: Program, x: AtomSet) -> list[AtomSet]:
    """
    Enumerate all elementarily unfounded sets for a program with respect to `x`.

    Any such set with more than one atom is contained in `x`, so only
    subsets of `x` are enumerated alongside all occurring singletons.

    Args:
        p:
            The program to check against.
        x:
            The interpretation the support is evaluated in.

    Returns:
        list[AtomSet]:
            All elementarily unfounded sets, canonically ordered.

    Raises:
        GuardExceeded:
            If `x` has too many occurring atoms to enumerate.
    """
    inside = x & p.atoms
    check_guard(len(inside), "elementarily unfounded set enumeration")

    singletons = (frozenset([a]) for a in p.atoms - inside)
    found = [y for y in (*subsets(inside), *singletons) if is_elementarily_unfounded(p, y, x)]

    LOG.debug("found %d elementarily unfounded sets", len(found))
    return canonical(found)


def minimal_unfounded_sets(p: Program, x: AtomSet) -> list[AtomSet]:
    """
    Enumerate the minimal nonempty unfounded sets of occurring atoms by brute force.

    Args:
        p:
            The program to check against.
        x:
            The interpretation the support is evaluated in.

    Returns:
        list[AtomSet]:
            Every nonempty unfounded set of occurring atoms without a
            nonempty unfounded proper subset, canonically ordered.

    Raises:
        GuardExceeded:
            If the program has too many atoms to enumerate.
    """
    check_guard(len(p.atoms), "minimal unfounded set enumeration")

    found: list[AtomSet] = []
    for y in subsets(p.atoms):
        # candidates arrive by ascending size, so earlier hits are minimal
        if is_unfounded(p, y, x) and not any(z < y for z in found):
            found.append(y)

    return found


def is_unfounded_free(p: Program, x: AtomSet) -> bool:
    """
    Check that no nonempty subset of `x` is unfounded by `p` with respect to `x`.

    Raises:
        GuardExceeded:
            If `x` is too large to enumerate subsets of.
    """
    check_guard(len(x), "unfounded subset search")
    return not any(is_unfounded(p, y, x) for y in subsets(x))


def _first_violation(p: Program, x: AtomSet, candidates: Iterable[AtomSet]) -> AtomSet | None:
    return next((y for y in candidates if not loop_formula_holds(p, y, x)), None)


def _witness_a(p: Program, x: AtomSet) -> AtomSet | None:
    if is_stable(p, x):
        return None

    # a smaller model of the reduct refutes minimality
    reduced = reduct(p, x)
    check_guard(len(x), "reduct model search")

    return next(y for y in subsets(x, proper=True, empty=True) if is_model(y, reduced))


def _witness_b(p: Program, x: AtomSet) -> AtomSet | None:
    check_guard(len(p.atoms), "loop formula sweep")
    return _first_violation(p, x, subsets(p.atoms))


def _witness_bprime(p: Program, x: AtomSet) -> AtomSet | None:
    check_guard(len(x), "unfounded subset search")
    return next((y for y in subsets(x) if is_unfounded(p, y, x)), None)


def _witness_c(p: Program, x: AtomSet) -> AtomSet | None:
    return _first_violation(p, x, loops(p))


def _witness_d(p: Program, x: AtomSet) -> AtomSet | None:
    return _first_violation(p, x, elementary_loops(p))


def _witness_e(p: Program, x: AtomSet) -> AtomSet | None:
    inside = x & p.atoms
    check_guard(len(inside), "maximal elementary loop search")

    # elementary loops of supporting rules are loops of the whole program
    family = [z for z in subsets(inside) if is_loop(p, z) and is_supporting_elementary_loop(p, x, z)]
    maximal = [z for z in family if not any(z < other for other in family)]
    singletons = [frozenset([a]) for a in p.atoms]

    return _first_violation(p, x, canonical([*maximal, *singletons]))


def _witness_eprime(p: Program, x: AtomSet) -> AtomSet | None:
    return next((y for y in elementarily_unfounded_sets(p, x) if y <= x), None)


WITNESSES: dict[StabilityCriterion, Callable[[Program, AtomSet], AtomSet | None]] = {
    StabilityCriterion.A: _witness_a,
    StabilityCriterion.B: _witness_b,
    StabilityCriterion.BPRIME: _witness_bprime,
    StabilityCriterion.C: _witness_c,
    StabilityCriterion.D: _witness_d,
    StabilityCriterion.E: _witness_e,
    StabilityCriterion.EPRIME: _witness_eprime,
}


def criterion_witness(p: Program, x: AtomSet, c: StabilityCriterion) -> AtomSet | None:
    """
    Find the first set of atoms violating a stability criterion for a model.

    For criterion `A` the witness is a smaller model of the reduct; for the
    loop formula criteria it is the first set (in canonical order) whose
    loop formula fails; for the unfounded set criteria it is the first
    nonempty unfounded (or elementarily unfounded) subset of `x`.

    Args:
        p:
            The program to check against.
        x:
            A model of `p` made of occurring atoms.
        c:
            The criterion to evaluate.

    Returns:
        AtomSet | None:
            A violating set, or None if the criterion holds.

    Raises:
        PreconditionViolated:
            If `x` is not a model of `p` over its occurring atoms.
        GuardExceeded:
            If the criterion requires an enumeration beyond the guard.
    """
    if not x <= p.atoms or not is_model(x, p):
        raise PreconditionViolated("stability criteria require a model made of occurring atoms")

    return WITNESSES[StabilityCriterion(c)](p, x)


def stable_via(p: Program, x: AtomSet, c: StabilityCriterion) -> bool:
    """
    Decide stability of a model through the selected criterion.

    See criterion_witness() for documentation.
    """
    return criterion_witness(p, x, c) is None


def _literals(p: Program, rule: Rule, y: AtomSet) -> list[str]:
    return (
        [p.names[a] for a in sorted(rule.pos)]
        + [f"not {p.names[a]}" for a in sorted(rule.neg)]
        + [f"not not {p.names[a]}" for a in sorted(rule.dneg)]
        + [f"not {p.names[a]}" for a in sorted(rule.head - y)]
    )


def es_formula_text(p: Program, y: AtomSet) -> str:
    """
    Render the external support formula of `y` as text.

    Args:
        p:
            The program providing candidate supporting rules.
        y:
            The set of atoms to render the formula for.

    Returns:
        str:
            A disjunction (`|`) of conjunctions (`&`), with `#true` for an
            empty conjunction and `#false` for an empty disjunction.
    """
    disjuncts = []
    for rule in p.rules:
        if rule.head & y and not (rule.pos & y):
            literals = _literals(p, rule, y)
            disjuncts.append(" & ".join(literals) if literals else "#true")

    if not disjuncts:
        return "#false"

    if len(disjuncts) == 1:
        return disjuncts[0]

    return " | ".join(f"({d})" if " & " in d else d for d in disjuncts)


def lf_formula_text(p: Program, y: AtomSet) -> str:
    """
    Render the loop formula of a nonempty set `y` as text.
    """
    if not y:
        raise PreconditionViolated("loop formulas are only defined for nonempty sets")

    return f"{' & '.join(p.names_of(y))} -> {es_formula_text(p, y)}"
