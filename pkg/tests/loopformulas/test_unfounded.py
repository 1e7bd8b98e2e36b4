import pytest
from hypothesis import given, settings

from loopformulas import Program
from loopformulas.core import is_model, is_stable, models
from loopformulas.errors import PreconditionViolated
from loopformulas.graph import loops
from loopformulas.parser import parse_program
from loopformulas.types import subsets
from loopformulas.unfounded import (
    StabilityCriterion,
    criterion_witness,
    elementarily_unfounded_sets,
    es_formula_text,
    externally_supported,
    is_elementarily_unfounded,
    is_unfounded,
    is_unfounded_free,
    lf_formula_text,
    loop_formula_holds,
    minimal_unfounded_sets,
    stable_via,
)
from tests.conftest import atoms, name_sets, programs


def test_externally_supported(pi_1: Program, ex_uf: Program):
    """
    Test external support of sets of atoms.
    """
    assert not externally_supported(pi_1, atoms(pi_1, "q r"), atoms(pi_1, "p q r"))
    assert externally_supported(pi_1, atoms(pi_1, "p r"), atoms(pi_1, "p q r"))
    assert not externally_supported(pi_1, atoms(pi_1, "s"), atoms(pi_1, "p s"))
    assert not externally_supported(ex_uf, atoms(ex_uf, "p q"), atoms(ex_uf, "p q"))


def test_loop_formula_holds(pi_1: Program):
    """
    Test loop formulas of every loop under the stable and a non-stable model.
    """
    x = atoms(pi_1, "p")
    assert all(loop_formula_holds(pi_1, y, x) for y in loops(pi_1))

    assert loop_formula_holds(pi_1, atoms(pi_1, "p q r"), atoms(pi_1, "p q r"))
    assert not loop_formula_holds(pi_1, atoms(pi_1, "q r"), atoms(pi_1, "p q r"))


def test_loop_formula_empty(pi_1: Program):
    """
    Test that loop formulas are refused for the empty set.
    """
    with pytest.raises(PreconditionViolated):
        loop_formula_holds(pi_1, frozenset(), atoms(pi_1, "p"))

    with pytest.raises(PreconditionViolated):
        lf_formula_text(pi_1, frozenset())


def test_loop_formula_table(ex_uf: Program):
    """
    Test loop formulas of the cyclic program against direct evaluation on every interpretation.
    """
    # external support evaluated straight from the rule components
    for x in subsets(ex_uf.atoms, empty=True):
        for y in loops(ex_uf):
            expected = not y <= x or any(
                rule.head & y and not (rule.pos & y) and rule.pos <= x and not (x & (rule.head - y))
                for rule in ex_uf.rules
            )
            assert loop_formula_holds(ex_uf, y, x) == expected


def test_formula_text(pi_1: Program):
    """
    Test rendering of external support and loop formulas.
    """
    assert lf_formula_text(pi_1, atoms(pi_1, "q r")) == "q & r -> #false"
    assert lf_formula_text(pi_1, atoms(pi_1, "s")) == "s -> #false"
    assert lf_formula_text(pi_1, atoms(pi_1, "p q r")) == "p & q & r -> not s"
    assert es_formula_text(pi_1, atoms(pi_1, "p")) == "not s | r"


def test_formula_text_disjunctive():
    """
    Test that other head atoms appear negated in the external support formula.
    """
    p = parse_program("p ; q.\np :- r, not s.")

    assert es_formula_text(p, atoms(p, "p")) == "not q | (r & not s)"
    assert es_formula_text(p, atoms(p, "p q")) == "#true | (r & not s)"


def test_is_unfounded(not_r: Program, ex_uf: Program):
    """
    Test unfounded sets, including the empty set.
    """
    x = atoms(not_r, "p q r")

    assert is_unfounded(not_r, atoms(not_r, "p q"), x)
    assert is_unfounded(not_r, frozenset(), x)
    assert is_unfounded(ex_uf, atoms(ex_uf, "p q"), atoms(ex_uf, "p q"))


def test_is_elementarily_unfounded(not_r: Program, pi_2: Program, ex_uf: Program):
    """
    Test elementarily unfounded sets against unfounded sets which are not minimal.
    """
    x = atoms(not_r, "p q r")
    assert not is_elementarily_unfounded(not_r, atoms(not_r, "p q"), x)
    assert is_elementarily_unfounded(not_r, atoms(not_r, "p"), x)

    x = atoms(pi_2, "p q r")
    assert is_elementarily_unfounded(pi_2, atoms(pi_2, "p r"), x)
    assert is_elementarily_unfounded(pi_2, atoms(pi_2, "q r"), x)

    assert is_elementarily_unfounded(ex_uf, atoms(ex_uf, "p q"), atoms(ex_uf, "p q"))


def test_is_elementarily_unfounded_precondition(pi_1: Program):
    """
    Test that elementarily unfounded sets are nonempty sets of occurring atoms.
    """
    with pytest.raises(PreconditionViolated):
        is_elementarily_unfounded(pi_1, frozenset(), atoms(pi_1, "p"))

    with pytest.raises(PreconditionViolated):
        is_elementarily_unfounded(pi_1, frozenset({99}), atoms(pi_1, "p"))


def test_elementarily_unfounded_sets(pi_1: Program, not_r: Program, pi_4: Program):
    """
    Test enumeration of elementarily unfounded sets.
    """
    x = atoms(pi_1, "p")
    found = elementarily_unfounded_sets(pi_1, x)

    assert name_sets(pi_1, found) == {frozenset({"q"}), frozenset({"r"}), frozenset({"s"})}
    assert not [y for y in found if y <= x]

    assert name_sets(not_r, elementarily_unfounded_sets(not_r, atoms(not_r, "p q r"))) == {
        frozenset({"p"}),
        frozenset({"q"}),
        frozenset({"r"}),
    }

    x = atoms(pi_4, "p q r s t u")
    assert {frozenset({"p", "r"}), frozenset({"q", "r"})} <= name_sets(pi_4, elementarily_unfounded_sets(pi_4, x))
    assert elementarily_unfounded_sets(pi_4, x) == minimal_unfounded_sets(pi_4, x)


def test_elementarily_unfounded_sets_empty():
    """
    Test that the empty program has no elementarily unfounded sets.
    """
    assert elementarily_unfounded_sets(parse_program(""), frozenset()) == []


def test_minimal_unfounded_sets(not_r: Program):
    """
    Test brute force enumeration of minimal unfounded sets.
    """
    found = minimal_unfounded_sets(not_r, atoms(not_r, "p q r"))
    assert name_sets(not_r, found) == {frozenset({"p"}), frozenset({"q"}), frozenset({"r"})}


def test_is_unfounded_free(pi_1: Program):
    """
    Test unfounded-freeness of stable and non-stable models.
    """
    assert is_unfounded_free(pi_1, atoms(pi_1, "p"))
    assert not is_unfounded_free(pi_1, atoms(pi_1, "p q r"))


def test_stable_via(pi_1: Program):
    """
    Test every criterion on the stable model and a non-stable model.
    """
    for c in StabilityCriterion:
        assert stable_via(pi_1, atoms(pi_1, "p"), c)
        assert not stable_via(pi_1, atoms(pi_1, "p q r"), c)


def test_criterion_witness(pi_1: Program, neg_loop: Program):
    """
    Test the sets reported as violating individual criteria.
    """
    assert criterion_witness(pi_1, atoms(pi_1, "p q r"), StabilityCriterion.C) == atoms(pi_1, "q r")
    assert criterion_witness(neg_loop, atoms(neg_loop, "p q"), StabilityCriterion.D) == atoms(neg_loop, "q")
    assert criterion_witness(pi_1, atoms(pi_1, "p"), StabilityCriterion.D) is None


def test_criterion_witness_precondition(pi_1: Program):
    """
    Test that the criteria refuse interpretations which are not models.
    """
    with pytest.raises(PreconditionViolated):
        criterion_witness(pi_1, atoms(pi_1, "q"), StabilityCriterion.A)


def test_neg_loop_models(neg_loop: Program):
    """
    Test the models of a loop guarded by its own negation, where only the smaller model is stable.
    """
    assert name_sets(neg_loop, models(neg_loop)) == {frozenset({"p"}), frozenset({"p", "q"})}
    assert is_stable(neg_loop, atoms(neg_loop, "p"))
    assert not is_stable(neg_loop, atoms(neg_loop, "p q"))


@settings(deadline=None, max_examples=40)
@given(programs())
def test_criteria_agreement(p: Program):
    """
    Test that all criteria agree with stability on every model.
    """
    for x in models(p):
        assert is_model(x, p)
        expected = is_stable(p, x)
        assert all(stable_via(p, x, c) == expected for c in StabilityCriterion)


@settings(deadline=None, max_examples=40)
@given(programs())
def test_elementarily_unfounded_are_minimal(p: Program):
    """
    Test that elementarily unfounded sets are exactly the minimal unfounded sets.
    """
    for x in subsets(p.atoms, empty=True):
        assert elementarily_unfounded_sets(p, x) == minimal_unfounded_sets(p, x)
