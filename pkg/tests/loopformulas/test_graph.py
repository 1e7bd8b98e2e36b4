import time

import pytest

from loopformulas import Program, Rule
from loopformulas.elementary import is_elementary_loop
from loopformulas.errors import GuardExceeded, PreconditionViolated
from loopformulas.graph import (
    dependency_graph,
    elementary_subgraph,
    induced,
    is_loop,
    is_strongly_connected,
    loops,
    maximal_loops_within,
    sccs,
    to_dot,
)
from loopformulas.types import enumeration_limit, subsets
from tests.conftest import atoms, name_sets

SEVEN_LOOPS = {
    frozenset({"p"}),
    frozenset({"q"}),
    frozenset({"r"}),
    frozenset({"s"}),
    frozenset({"p", "r"}),
    frozenset({"q", "r"}),
    frozenset({"p", "q", "r"}),
}


def _edges(p: Program, g) -> set[tuple[str, str]]:
    return {(p.names[a], p.names[b]) for a, b in g.edges}


def test_dependency_graph(pi_1: Program, ex_uf: Program):
    """
    Test that edges lead from head atoms to positive body atoms.
    """
    graph = dependency_graph(pi_1)

    assert _edges(pi_1, graph) == {("p", "r"), ("r", "p"), ("q", "r"), ("r", "q")}
    assert pi_1.indices["s"] in graph

    assert _edges(ex_uf, dependency_graph(ex_uf)) == {
        ("p", "r"),
        ("q", "r"),
        ("p", "q"),
        ("r", "q"),
        ("q", "p"),
        ("r", "p"),
    }


def test_sccs(pi_1: Program):
    """
    Test partitioning the dependency graph into strongly connected components.
    """
    assert name_sets(pi_1, sccs(dependency_graph(pi_1))) == {frozenset({"p", "q", "r"}), frozenset({"s"})}


def test_is_strongly_connected(pi_1: Program):
    """
    Test strong connectivity of induced subgraphs, including the degenerate cases.
    """
    graph = dependency_graph(pi_1)

    assert is_strongly_connected(induced(graph, atoms(pi_1, "s")))
    assert not is_strongly_connected(induced(graph, atoms(pi_1, "p q")))
    assert not is_strongly_connected(induced(graph, frozenset()))


def test_is_loop(pi_1: Program):
    """
    Test loop membership for every nonempty subset of the atoms.
    """
    for y in subsets(pi_1.atoms):
        assert is_loop(pi_1, y) == (frozenset(pi_1.names_of(y)) in SEVEN_LOOPS)


def test_is_loop_unknown_atom(pi_1: Program):
    """
    Test that sets with atoms outside of the program are never loops.
    """
    assert not is_loop(pi_1, frozenset({99}))
    assert not is_loop(pi_1, frozenset())


def test_loops(pi_1: Program, ex_2: Program, ex_uf: Program):
    """
    Test loop enumeration, including programs sharing a dependency graph.
    """
    assert name_sets(pi_1, loops(pi_1)) == SEVEN_LOOPS
    assert name_sets(ex_2, loops(ex_2)) == SEVEN_LOOPS
    assert name_sets(ex_uf, loops(ex_uf)) == {frozenset(y) for y in ["p", "q", "r", "pq", "pr", "qr", "pqr"]}


def test_loops_guard(pi_1: Program):
    """
    Test that loop enumeration refuses components above the enumeration limit.
    """
    with enumeration_limit(2):
        with pytest.raises(GuardExceeded):
            loops(pi_1)


def test_maximal_loops_within(pi_1: Program):
    """
    Test finding the maximal loops contained in a set.
    """
    found = maximal_loops_within(pi_1, pi_1.atoms)

    assert name_sets(pi_1, found) == {frozenset({"p", "q", "r"}), frozenset({"s"})}
    assert len(found) == 2
    assert name_sets(pi_1, maximal_loops_within(pi_1, atoms(pi_1, "p q"))) == {frozenset({"p"}), frozenset({"q"})}


def test_elementary_subgraph(pi_1: Program, ex_2: Program):
    """
    Test the elementary subgraph fixpoint on programs with the same dependency graph.
    """
    graph = elementary_subgraph(pi_1, atoms(pi_1, "p q r"))

    assert _edges(pi_1, graph) == {("p", "r"), ("q", "r")}
    assert not is_strongly_connected(graph)

    assert is_strongly_connected(elementary_subgraph(ex_2, atoms(ex_2, "p q r")))


def test_elementary_subgraph_precondition(pi_1: Program):
    """
    Test that the elementary subgraph requires occurring atoms.
    """
    with pytest.raises(PreconditionViolated):
        elementary_subgraph(pi_1, frozenset({99}))


def test_to_dot(pi_1: Program):
    """
    Test DOT export of the dependency graph.
    """
    dot = to_dot(dependency_graph(pi_1), pi_1)

    assert dot.startswith("digraph {\n")
    assert dot.endswith("}\n")
    assert '  "s";\n' in dot
    assert '  "p" -> "r";\n' in dot
    assert '  "r" -> "q";\n' in dot


def _program(rules: list[tuple[int, int]], size: int) -> Program:
    names = tuple(f"a{i}" for i in range(size))
    return Program(rules=tuple(Rule(head=frozenset({a}), pos=frozenset({b})) for a, b in rules), names=names)


def test_elementary_loop_large_ring():
    """
    Test that elementary loops of a large nondisjunctive ring are decided quickly.
    """
    size = 10_000
    p = _program([(i, (i + 1) % size) for i in range(size)], size)

    start = time.perf_counter()
    assert is_elementary_loop(p, p.atoms)
    assert time.perf_counter() - start < 1.0


def test_elementary_loop_large_chain_of_cycles():
    """
    Test that a chain of cycles is rejected quickly, while each cycle is elementary.
    """
    width, count = 10, 1_000
    rules = [(k * width + j, k * width + (j + 1) % width) for k in range(count) for j in range(width)]
    rules.extend(((k + 1) * width, k * width) for k in range(count - 1))
    p = _program(rules, width * count)

    start = time.perf_counter()
    assert not is_elementary_loop(p, p.atoms)
    assert is_elementary_loop(p, frozenset(range(width)))
    assert time.perf_counter() - start < 1.0
