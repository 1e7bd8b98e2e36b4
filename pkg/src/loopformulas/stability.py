import logging

from pydantic import BaseModel, field_serializer

from loopformulas import AtomSet, Program
from loopformulas.classify import is_hef
from loopformulas.core import is_model, is_supported
from loopformulas.elementary import restrict_x, restrict_xy
from loopformulas.errors import GuardExceeded, PreconditionViolated
from loopformulas.graph import is_loop, maximal_loops_within
from loopformulas.types import canonical, check_guard, subsets
from loopformulas.unfounded import StabilityCriterion, is_unfounded, stable_via

LOG = logging.getLogger(__name__)


class BoundingLoop(BaseModel, frozen=True):
    """
    A bounding loop alongside what is known about its supporting subprogram.

    Both `hef_subprogram` and `unfounded_free` are None when deciding them
    would exceed the enumeration guard.
    """

    loop: AtomSet
    hef_subprogram: bool | None = None
    unfounded_free: bool | None = None
    unfounded_witness: AtomSet | None = None

    @field_serializer("loop", "unfounded_witness")
    def serialize_atoms(self, atoms: AtomSet | None) -> list[int] | None:
        """
        Serialize atom sets as sorted lists of atom indices.
        """
        return None if atoms is None else sorted(atoms)


class BoundingLoopReport(BaseModel, frozen=True):
    """
    The bounding loops of a program with respect to an interpretation.
    """

    bounding_loops: list[BoundingLoop] = []

    @property
    def loops(self) -> list[AtomSet]:
        """
        Retrieve the bounding loops as plain atom sets.
        """
        return [entry.loop for entry in self.bounding_loops]


def r_omega(p: Program, x: AtomSet, y: AtomSet, *, within_x: bool = False, simultaneous: bool = True) -> AtomSet:
    """
    Shrink `y` by removing atoms with evidence of support until nothing changes.

    In each step, an atom `a` is removable when some rule supporting `x`
    under `x` has a head meeting `x` plus `a` exactly in `a`, and a positive
    body avoiding the current set. All removable atoms of a step are removed
    together, computed against the set at the start of the step.

    Args:
        p:
            The program providing the rules.
        x:
            The interpretation the rule bodies are evaluated in.
        y:
            The starting set.
        within_x:
            Require the head to meet `x` itself exactly in `a`; this gives
            the same result whenever `y` is a subset of `x`.
        simultaneous:
            When disabled, only the first removable atom (by index) is
            removed per step; the result is the same either way.

    Returns:
        AtomSet:
            The largest remaining subset of `y`.
    """
    rules = restrict_x(p, x).rules
    current = set(y)
    steps = 0

    def removable(a: int) -> bool:
        scope = x if within_x else x | {a}
        return any(rule.head & scope == {a} and not (rule.pos & current) for rule in rules)

    while True:
        removed = {a for a in sorted(current) if removable(a)}
        if not removed:
            break

        if not simultaneous:
            removed = {min(removed)}

        current -= removed
        steps += 1

    LOG.debug("R fixpoint from %d atoms reached %d atoms after %d steps", len(y), len(current), steps)
    return frozenset(current)


def unfounded_free_by_r(p: Program, x: AtomSet) -> bool:
    """
    Check for an empty R fixpoint starting from `x`.

    An empty fixpoint proves that `x` contains no nonempty unfounded set.
    For head-elementary-loop-free programs the converse holds too, so a
    nonempty fixpoint proves an unfounded set exists; for other programs a
    nonempty fixpoint is inconclusive.

    Raises:
        PreconditionViolated:
            If `x` contains atoms which do not occur in `p`.
    """
    if not x <= p.atoms:
        raise PreconditionViolated("R fixpoint checks require atoms occurring in the program")

    return not r_omega(p, x, x)


def _unfounded_subset(p: Program, x: AtomSet, y: AtomSet) -> AtomSet | None:
    check_guard(len(y), "unfounded subset search")
    return next((z for z in subsets(y) if is_unfounded(p, z, x)), None)


def _describe(p: Program, x: AtomSet, z: AtomSet) -> BoundingLoop:
    subprogram = restrict_xy(p, x, z)

    try:
        hef = is_hef(subprogram)
    except GuardExceeded:
        hef = None

    try:
        witness = _unfounded_subset(p, x, z)
    except GuardExceeded:
        return BoundingLoop(loop=z, hef_subprogram=hef)

    return BoundingLoop(loop=z, hef_subprogram=hef, unfounded_free=witness is None, unfounded_witness=witness)


def bounding_loops(p: Program, x: AtomSet) -> BoundingLoopReport:
    """
    Compute the bounding loops of a program with respect to `x`.

    Starting from `x`, the working set is shrunk with the R fixpoint. If the
    result is a loop of its supporting subprogram it is a bounding loop;
    otherwise each maximal loop of that subprogram within the result is
    processed the same way.

    Args:
        p:
            The program to decompose.
        x:
            The interpretation, typically a model of `p`.

    Returns:
        BoundingLoopReport:
            The disjoint bounding loops in canonical order, each annotated
            with whether its supporting subprogram is head-elementary-loop-free
            and whether it contains a nonempty unfounded set.
    """
    found: list[AtomSet] = []
    pending = [x]

    while pending:
        z = r_omega(p, x, pending.pop(0))
        if not z:
            continue

        subprogram = restrict_xy(p, x, z)
        if is_loop(subprogram, z):
            found.append(z)
        else:
            pending.extend(maximal_loops_within(subprogram, z))

    return BoundingLoopReport(bounding_loops=[_describe(p, x, z) for z in canonical(found)])


def bounding_loops_bruteforce(p: Program, x: AtomSet) -> list[AtomSet]:
    """
    Enumerate the maximal subsets of `x` which are loops of their supporting subprogram and fixed by R.

    Raises:
        GuardExceeded:
            If `x` is too large to enumerate subsets of.
    """
    check_guard(len(x), "bounding loop enumeration")

    # loops of a supporting subprogram are loops of the whole program
    fixed = [
        z for z in subsets(x) if is_loop(p, z) and r_omega(p, x, z) == z and is_loop(restrict_xy(p, x, z), z)
    ]
    return [z for z in fixed if not any(z < other for other in fixed)]


def baseline_loops(p: Program, x: AtomSet) -> list[AtomSet]:
    """
    Find the maximal loops within the R fixpoint of `x`, without further refinement.
    """
    y = r_omega(p, x, x)
    return maximal_loops_within(restrict_xy(p, x, y), y)


def modular_stable_check(p: Program, x: AtomSet) -> bool:
    """
    Decide stability of a model one bounding loop at a time.

    A model is stable when it is supported and no bounding loop contains a
    nonempty unfounded set. A bounding loop whose supporting subprogram is
    head-elementary-loop-free always contains one; other bounding loops are
    searched directly. If neither can be decided within the guard, the
    whole model is searched for unfounded subsets instead.

    Args:
        p:
            The program to check against.
        x:
            A model of `p`.

    Returns:
        bool:
            True if `x` is a stable model of `p`.

    Raises:
        PreconditionViolated:
            If `x` is not a model of `p`.
        GuardExceeded:
            If the fallback search exceeds the guard.
    """
    if not is_model(x, p):
        raise PreconditionViolated("modular stability checks require a model of the program")

    if not is_supported(p, x):
        return False

    for entry in bounding_loops(p, x).bounding_loops:
        if entry.hef_subprogram or entry.unfounded_free is False:
            return False

        if entry.unfounded_free is None:
            LOG.info("falling back to a whole model search for a bounding loop of %d atoms", len(entry.loop))
            return stable_via(p, x, StabilityCriterion.BPRIME)

    return True
