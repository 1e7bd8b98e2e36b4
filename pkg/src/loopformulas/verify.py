import logging
import random
import string
from abc import ABC, abstractmethod
from itertools import combinations

from loopformulas import AtomSet, Program, Rule, classify, core, elementary, graph, stability, unfounded
from loopformulas.errors import PropertyViolation
from loopformulas.parser import parse_program, render_program
from loopformulas.types import subsets

LOG = logging.getLogger(__name__)


def random_program(rng: random.Random, atoms: int = 6, max_rules: int = 10) -> Program:
    """
    Generate a random program from a pool of single letter atoms.

    Args:
        rng:
            The random source; the program is a pure function of its state.
        atoms:
            The size of the atom pool (at most 26).
        max_rules:
            The maximum number of rules; at least one rule is generated.

    Returns:
        Program:
            A parsed program whose rules have up to three atoms in each of
            their head, positive, negated and doubly negated parts.
    """
    pool = string.ascii_lowercase[:atoms]
    lines = []

    for _ in range(rng.randint(1, max_rules)):
        head, pos, neg, dneg = (rng.sample(pool, rng.randint(0, min(3, len(pool)))) for _ in range(4))
        body = pos + [f"not {a}" for a in neg] + [f"not not {a}" for a in dneg]
        lines.append(f"{' ; '.join(head)}{' :- ' + ', '.join(body) if body else ''}.")

    return parse_program("\n".join(lines))


class Property(ABC):
    """
    Abstract class for a property which must hold on every program.

    Subclassing `Property` automatically registers the property with
    `run_verification`, which checks properties in priority order.
    """

    @classmethod
    @abstractmethod
    def name(cls) -> str:
        """
        Retrieve the name reported when this property is violated.
        """

    @classmethod
    @abstractmethod
    def priority(cls) -> int:
        """
        Retrieve the priority order for this property.

        Returns:
            int:
                A numeric priority value; properties closer to 0 are checked
                first.
        """

    @classmethod
    @abstractmethod
    def violation(cls, p: Program) -> str | None:
        """
        Check this property on a program.

        Args:
            p:
                The program to check, small enough for every enumeration.

        Returns:
            str | None:
                A description of the violation, or None if the property holds.
        """


def properties() -> list[type[Property]]:
    """
    Retrieve every registered property in priority order.
    """
    return sorted(Property.__subclasses__(), key=lambda prop: (prop.priority(), prop.name()))


def _fmt(p: Program, atoms: AtomSet) -> str:
    return "{" + ",".join(p.names_of(atoms)) + "}"


def nondisjunctive_variant(p: Program) -> Program:
    """
    Split every rule into one rule per head atom, dropping double negation.

    Each split rule moves the other head atoms of its origin into the
    negated body. Constraints have no head atom and are dropped, so the
    result is always nondisjunctive.
    """
    return p.subprogram(
        Rule.model_construct(head=frozenset([a]), pos=rule.pos, neg=rule.neg | (rule.head - {a}), dneg=frozenset())
        for rule in p.rules
        for a in sorted(rule.head)
    )


class StableModelsAreSupportedModels(Property):
    """
    Property that every stable model is a supported model accepted by the definition of stability.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "stable_models_are_supported_models"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 10

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.stable_models(p):
            if not core.is_model(x, p) or not core.is_supported(p, x):
                return f"stable model {_fmt(p, x)} is not a supported model"

            if not core.is_stable_bruteforce(p, x):
                return f"stable model {_fmt(p, x)} is rejected by the definition"

        return None


class RuleSubsetStability(Property):
    """
    Property that a model which is not stable stays unstable for every subset of the rules.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "rule_subset_stability"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 11

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        # subsets of larger programs are too many to sweep
        if len(p.rules) > 6:
            return None

        unstable = [x for x in core.models(p) if not core.is_stable(p, x)]
        if not unstable:
            return None

        for size in range(len(p.rules) + 1):
            for chosen in combinations(p.rules, size):
                subprogram = p.subprogram(chosen)
                for x in unstable:
                    if core.is_stable(subprogram, x):
                        return f"model {_fmt(p, x)} is stable for a subset of rules only"

        return None


class StabilityCriteriaAgreement(Property):
    """
    Property that every stability criterion gives the same verdict on every model.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "stability_criteria_agreement"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 20

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            results = {c.value: unfounded.stable_via(p, x, c) for c in unfounded.StabilityCriterion}
            if len(set(results.values())) > 1:
                return f"criteria disagree on {_fmt(p, x)}: {results}"

        return None


class ElementarilyUnfoundedAreMinimal(Property):
    """
    Property that the elementarily unfounded sets are exactly the minimal nonempty unfounded sets.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "elementarily_unfounded_are_minimal_unfounded"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 30

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            if unfounded.elementarily_unfounded_sets(p, x) != unfounded.minimal_unfounded_sets(p, x):
                return f"elementarily unfounded and minimal unfounded sets differ for {_fmt(p, x)}"

        return None


class ElementarilyUnfoundedShape(Property):
    """
    Property that elementarily unfounded sets are unsupported elementary loops with supported proper subsets.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "elementarily_unfounded_shape"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 31

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        elementary_set = set(elementary.elementary_loops(p))

        for x in core.models(p):
            found = unfounded.elementarily_unfounded_sets(p, x)

            for y in found:
                if any(y < other for other in found):
                    return f"{_fmt(p, y)} is a proper subset of another elementarily unfounded set"

                if unfounded.externally_supported(p, y, x):
                    return f"{_fmt(p, y)} is externally supported"

                if not all(unfounded.externally_supported(p, z, x) for z in subsets(y, proper=True)):
                    return f"{_fmt(p, y)} has an unsupported proper subset"

                if y not in elementary_set:
                    return f"{_fmt(p, y)} is not an elementary loop"

        return None


class SupportingSubprogramSubsets(Property):
    """
    Property that elementary loops of their supporting rules only have externally supported proper subsets.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "supporting_subprogram_subsets_supported"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 32

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            for y in subsets(x):
                if len(y) < 2 or not graph.is_loop(p, y) or not elementary.is_supporting_elementary_loop(p, x, y):
                    continue

                if not all(unfounded.externally_supported(p, z, x) for z in subsets(y, proper=True)):
                    return f"elementary loop {_fmt(p, y)} of its supporting rules has an unsupported subset"

        return None


class LoopOutboundAgreement(Property):
    """
    Property that the graph based and the rule based loop checks agree.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "loop_outbound_agreement"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 40

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for y in subsets(p.atoms):
            if graph.is_loop(p, y) != elementary.is_loop_by_outbound(p, y):
                return f"loop checks disagree on {_fmt(p, y)}"

        return None


class ElementarySubgraphAgreement(Property):
    """
    Property that elementary subgraphs certify elementary loops, and decide them for HEF programs.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "elementary_subgraph_agreement"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 41

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        decides = p.is_nondisjunctive or classify.is_hef(p)

        # the elementary subgraph is a subgraph of the dependency graph, so only loops can connect it
        for y in graph.loops(p):
            definition = len(y) == 1 or elementary.non_outbound_subset(p, y) is None
            connected = graph.is_strongly_connected(graph.elementary_subgraph(p, y))

            if connected and not definition:
                return f"{_fmt(p, y)} has a connected elementary subgraph but is not elementary"

            if decides and connected != definition:
                return f"elementary subgraph misjudges {_fmt(p, y)}"

        return None


class ElementarySubsetCharacterization(Property):
    """
    Property that a loop is elementary exactly when its elementary proper subsets are outbound in it.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "elementary_subset_characterization"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 42

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        elementary_set = set(elementary.elementary_loops(p))

        for y in graph.loops(p):
            expected = y in elementary_set
            nested = all(elementary.is_outbound(p, z, y) for z in subsets(y, proper=True) if z in elementary_set)
            if expected != nested:
                return f"elementary subsets misjudge {_fmt(p, y)}"

            if p.is_nondisjunctive:
                nontrivial = expected and not elementary.is_trivial_loop(p, y)
                if elementary.is_gs_elementary(p, y) != nontrivial:
                    return f"rule-set based check misjudges {_fmt(p, y)}"

        return None


class OutboundSupportPropagation(Property):
    """
    Property that external support of a subset carries over to every enclosing set it is not outbound in.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "outbound_support_propagation"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 43

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            if not core.is_supported(p, x):
                continue

            for y in subsets(x):
                if unfounded.externally_supported(p, y, x):
                    continue

                for z in subsets(y, proper=True):
                    if unfounded.externally_supported(p, z, x) and not elementary.is_outbound(p, z, y):
                        return f"{_fmt(p, z)} is supported under {_fmt(p, x)} but {_fmt(p, y)} is not"

        return None


class ElementaryLoopFormulaEntailment(Property):
    """
    Property that the loop formula of every set is entailed by the loop formula of an elementary loop within it.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "elementary_loop_formula_entailment"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 44

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        found = elementary.elementary_loops(p)

        for y in subsets(p.atoms):
            # the loop formula of y only fails on interpretations containing y
            candidates = (y | rest for rest in subsets(p.atoms - y, empty=True))
            failing = [x for x in candidates if not unfounded.externally_supported(p, y, x)]

            if not any(all(not unfounded.loop_formula_holds(p, z, x) for x in failing) for z in found if z <= y):
                return f"no elementary loop within {_fmt(p, y)} entails its loop formula"

        return None


class SupportingSubprogramAgreement(Property):
    """
    Property that for nondisjunctive rules, elementary loops of the rules supporting a set or the whole model agree.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "supporting_subprogram_agreement"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 45

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.

        The property is checked on `nondisjunctive_variant(p)`.
        """
        q = nondisjunctive_variant(p)

        for x in core.models(q):
            if not core.is_supported(q, x):
                continue

            # elementary loops of either subprogram are loops of the rules supporting x
            whole = elementary.restrict_x(q, x)
            for y in graph.loops(whole):
                if len(y) < 2 or not y <= x:
                    continue

                if elementary.is_supporting_elementary_loop(q, x, y) != elementary.is_elementary_loop(whole, y):
                    return f"supporting rules of {_fmt(q, y)} and of {_fmt(q, x)} disagree on elementarity"

        return None


class TightIffETight(Property):
    """
    Property that a program is tight exactly when all of its elementary loops are trivial.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "tight_iff_e_tight"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 50

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        enumerated = all(elementary.is_trivial_loop(p, y) for y in elementary.elementary_loops(p))
        if classify.is_tight(p) != enumerated:
            return "tightness and e-tightness differ"

        return None


class HcfImpliesHef(Property):
    """
    Property that head-cycle-free programs are head-elementary-loop-free.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "hcf_implies_hef"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 51

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        if classify.is_hcf(p) and not classify.is_hef(p):
            return "head-cycle-free program is not head-elementary-loop-free"

        return None


class HefShiftEquivalence(Property):
    """
    Property that shifting keeps the stable models of head-elementary-loop-free programs.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "hef_shift_equivalence"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 60

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        if classify.is_hef(p) and core.stable_models(p) != core.stable_models(classify.shift(p)):
            return "shifting changes the stable models of a head-elementary-loop-free program"

        return None


class ShiftSoundness(Property):
    """
    Property that every stable model of a shifted program is a stable model of the original.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "shift_soundness"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 61

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        original = set(core.stable_models(p))
        for x in core.stable_models(classify.shift(p)):
            if x not in original:
                return f"stable model {_fmt(p, x)} of the shifted program is not stable"

        return None


class ShiftElementaryLoops(Property):
    """
    Property that shifting keeps every elementary loop, and adds none to the rules supporting a model.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "shift_preserves_elementary_loops"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 62

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        shifted = classify.shift(p)
        original = elementary.elementary_loops(p)
        kept = set(elementary.elementary_loops(shifted))

        if lost := [y for y in original if y not in kept]:
            return f"elementary loop {_fmt(p, lost[0])} is lost by shifting"

        for x in core.models(p):
            for y in elementary.elementary_loops(elementary.restrict_x(shifted, x)):
                if y <= x and y not in original:
                    return f"{_fmt(p, y)} is elementary in the shifted supporting rules only"

        return None


class InherentTightness(Property):
    """
    Property that inherently tight models are stable, and are exactly the stable ones for HEF programs.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "inherent_tightness"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 70

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        decides = p.is_nondisjunctive or classify.is_hef(p)

        for x in core.models(p):
            tight = classify.is_inherently_tight(p, x)

            if tight != classify.is_inherently_tight_bruteforce(p, x):
                return f"derivation and rule subset search disagree on {_fmt(p, x)}"

            stable = core.is_stable(p, x)
            if tight and not stable:
                return f"inherently tight model {_fmt(p, x)} is not stable"

            if decides and tight != stable:
                return f"inherent tightness misjudges stability of {_fmt(p, x)}"

        return None


class ROperator(Property):
    """
    Property that the R fixpoint is monotone, contains every unfounded set, and decides stability for HEF programs.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "r_operator"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 80

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        hef = classify.is_hef(p)

        for x in core.models(p):
            top = stability.r_omega(p, x, x)

            for z in subsets(x, empty=True):
                fixpoint = stability.r_omega(p, x, z)
                if not fixpoint <= top:
                    return f"R is not monotone below {_fmt(p, x)}"

                variants = (
                    stability.r_omega(p, x, z, within_x=True),
                    stability.r_omega(p, x, z, simultaneous=False),
                )
                if any(v != fixpoint for v in variants):
                    return f"R variants disagree on {_fmt(p, z)} within {_fmt(p, x)}"

                if z and unfounded.is_unfounded(p, z, x) and not z <= top:
                    return f"unfounded set {_fmt(p, z)} escapes R of {_fmt(p, x)}"

            free = unfounded.is_unfounded_free(p, x)
            if not top and not free:
                return f"empty R fixpoint for {_fmt(p, x)} despite an unfounded subset"

            if hef and (not top) != free:
                return f"R fixpoint misjudges unfounded-freeness of {_fmt(p, x)}"

            if hef and core.is_stable(p, x) != (not top):
                return f"R fixpoint misjudges stability of {_fmt(p, x)}"

        return None


class BoundingLoops(Property):
    """
    Property that bounding loops match their definition, are disjoint, and cover every unfounded elementary loop.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "bounding_loops"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 90

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            report = stability.bounding_loops(p, x)
            found = report.loops

            if found != stability.bounding_loops_bruteforce(p, x):
                return f"bounding loops of {_fmt(p, x)} differ from their definition"

            if any(a & b for a, b in combinations(found, 2)):
                return f"bounding loops of {_fmt(p, x)} overlap"

            for y in unfounded.elementarily_unfounded_sets(p, x):
                if y <= x and len(y) > 1 and not any(y <= z for z in found):
                    return f"elementarily unfounded {_fmt(p, y)} lies outside every bounding loop"

            for entry in report.bounding_loops:
                if entry.hef_subprogram and entry.unfounded_free:
                    return f"bounding loop {_fmt(p, entry.loop)} with HEF supporting rules is unfounded-free"

        return None


class ModularStabilityAgreement(Property):
    """
    Property that deciding stability one bounding loop at a time agrees with the definition.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "modular_stability_agreement"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 91

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            if stability.modular_stable_check(p, x) != core.is_stable(p, x):
                return f"modular check misjudges {_fmt(p, x)}"

        return None


class UnfoundedFreeReduction(Property):
    """
    Property that a model is unfounded-free exactly when its reduction makes it an elementary loop.
    """

    @classmethod
    def name(cls) -> str:
        """
        See Property.name() for documentation.
        """
        return "unfounded_free_reduction"

    @classmethod
    def priority(cls) -> int:
        """
        See Property.priority() for documentation.
        """
        return 95

    @classmethod
    def violation(cls, p: Program) -> str | None:
        """
        See Property.violation() for documentation.
        """
        for x in core.models(p):
            reduced, e = classify.unfoundedfree_reduction(p, x)
            if unfounded.is_unfounded_free(p, x) != elementary.is_elementary_loop(reduced, x | {e.index}):
                return f"reduction misjudges unfounded-freeness of {_fmt(p, x)}"

        return None



def first_violation(p: Program, selected: list[type[Property]]) -> tuple[type[Property], str] | None:
    """
    Find the first property in a selection which is violated by a program.
    """
    for prop in selected:
        if (detail := prop.violation(p)) is not None:
            return prop, detail

    return None


def _without_atom(p: Program, a: int) -> Program:
    return p.subprogram(
        Rule.model_construct(head=rule.head - {a}, pos=rule.pos - {a}, neg=rule.neg - {a}, dneg=rule.dneg - {a})
        for rule in p.rules
    )


def minimize(p: Program, prop: type[Property]) -> Program:
    """
    Shrink a counterexample while it still violates a property.

    Rules are deleted one at a time while the violation persists, and then
    atoms are erased from every rule the same way.

    Args:
        p:
            A program violating `prop`.
        prop:
            The violated property.

    Returns:
        Program:
            A program, no larger than `p`, which still violates `prop`.
    """
    changed = True
    while changed:
        changed = False
        for i in range(len(p.rules)):
            candidate = p.subprogram(p.rules[:i] + p.rules[i + 1 :])
            if prop.violation(candidate) is not None:
                p, changed = candidate, True
                break

    for a in sorted(p.atoms):
        candidate = _without_atom(p, a)
        if prop.violation(candidate) is not None:
            p = candidate

    return p


def run_verification(seed: int, count: int, atoms: int = 6, max_rules: int = 10) -> int:
    """
    Check every registered property on a stream of random programs.

    Args:
        seed:
            The seed of the random program stream.
        count:
            The number of programs to check.
        atoms:
            The size of the atom pool for generated programs.
        max_rules:
            The maximum number of rules in generated programs.

    Returns:
        int:
            The number of programs checked.

    Raises:
        PropertyViolation:
            On the first violated property, carrying the minimized
            counterexample as program text.
    """
    rng = random.Random(seed)
    selected = properties()

    for index in range(count):
        program = random_program(rng, atoms, max_rules)

        if (failure := first_violation(program, selected)) is not None:
            prop, detail = failure
            LOG.info("program %d violates %s, minimizing", index, prop.name())

            smallest = minimize(program, prop)
            raise PropertyViolation(prop.name(), prop.violation(smallest) or detail, render_program(smallest))

        LOG.debug("program %d satisfies %d properties", index, len(selected))

    return count
