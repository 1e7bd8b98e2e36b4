from pathlib import Path

import pytest
from hypothesis import strategies as st

from loopformulas import AtomSet, Program, Rule
from loopformulas.parser import SourceProgram, parse_program

# atom pool used by generated programs
POOL = ("p", "q", "r", "s", "t")


def loaded(source: str) -> Program:
    """
    Parse a program from a resource directory.
    """
    return parse_program(SourceProgram.from_path(Path(source) / "program.lp"))


def atoms(p: Program, names: str) -> AtomSet:
    """
    Shorthand to convert space or comma separated names into an `AtomSet`.
    """
    return p.atomset(names)


def name_sets(p: Program, sets) -> set[frozenset[str]]:
    """
    Convert atom sets into a set of name sets, for order insensitive comparison.
    """
    return {frozenset(p.names_of(y)) for y in sets}


@pytest.fixture
def pi_1() -> Program:
    """
    Fixture to load a nondisjunctive program with seven loops.
    """
    yield loaded("tests/resources/pi-1")


@pytest.fixture
def ex_2() -> Program:
    """
    Fixture to load a program sharing the dependency graph of `pi_1`, with elementary loops only.
    """
    yield loaded("tests/resources/ex-2")


@pytest.fixture
def ex_uf() -> Program:
    """
    Fixture to load the cyclic three-rule disjunctive program.
    """
    yield loaded("tests/resources/ex-uf")


@pytest.fixture
def pi_2() -> Program:
    """
    Fixture to load a program which is head-elementary-loop-free but not head-cycle-free.
    """
    yield loaded("tests/resources/pi-2")


@pytest.fixture
def pi_3() -> Program:
    """
    Fixture to load a program whose shifted variant gains an elementary loop.
    """
    yield loaded("tests/resources/pi-3")


@pytest.fixture
def pi_4() -> Program:
    """
    Fixture to load the program used to illustrate bounding loops.
    """
    yield loaded("tests/resources/pi-4")


@pytest.fixture
def neg_loop() -> Program:
    """
    Fixture to load a loop guarded by the negation of one of its own atoms.
    """
    yield loaded("tests/resources/neg-loop")


@pytest.fixture
def not_r() -> Program:
    """
    Fixture to load a positive loop guarded by the negation of an atom outside of it.
    """
    yield loaded("tests/resources/not-r")


@pytest.fixture
def hef_counter() -> Program:
    """
    Fixture to load a program which is not head-elementary-loop-free.
    """
    yield loaded("tests/resources/hef-counter")


@st.composite
def programs(draw, pool: tuple[str, ...] = POOL, max_rules: int = 6) -> Program:
    """
    Strategy drawing small programs over a fixed atom pool.
    """
    parts = st.lists(st.sampled_from(pool), max_size=3, unique=True)
    rules = []

    for _ in range(draw(st.integers(min_value=1, max_value=max_rules))):
        head, pos, neg, dneg = draw(parts), draw(parts), draw(parts), draw(st.lists(st.sampled_from(pool), max_size=1))
        body = pos + [f"not {a}" for a in neg] + [f"not not {a}" for a in dneg]

        text = " ; ".join(head)
        if body or not head:
            text += f" :- {', '.join(body)}"

        rules.append(f"{text}.")

    return parse_program("\n".join(rules))


def broken_shift(p: Program) -> Program:
    """
    Shift disjunctive rules without negating the other head atoms, for mutation tests.
    """
    rules = []

    for rule in p.rules:
        if len(rule.head) <= 1:
            rules.append(rule)
            continue

        rules.extend(
            Rule.model_construct(head=frozenset({a}), pos=rule.pos, neg=rule.neg, dneg=rule.dneg)
            for a in sorted(rule.head)
        )

    return p.subprogram(rules)
