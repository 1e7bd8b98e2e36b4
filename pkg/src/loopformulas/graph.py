import logging
from functools import lru_cache
from typing import Iterable

import networkx as nx

from loopformulas import AtomSet, Program
from loopformulas.errors import PreconditionViolated
from loopformulas.types import CACHE_SIZE, canonical, check_guard, subsets

LOG = logging.getLogger(__name__)


@lru_cache(maxsize=CACHE_SIZE)
def dependency_graph(p: Program) -> nx.DiGraph:
    """
    Build the positive dependency graph of a program.

    Vertices are the occurring atoms, and every rule adds an edge from each
    of its head atoms to each of its positive body atoms. Negated literals
    and constraints contribute no edges.

    Args:
        p:
            The program to build the graph for.

    Returns:
        nx.DiGraph:
            A frozen directed graph whose nodes are atom indices; graphs are
            shared between calls for equal programs.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(p.atoms))

    for rule in p.rules:
        graph.add_edges_from((a, b) for a in rule.head for b in rule.pos)

    return nx.freeze(graph)


def sccs(g: nx.DiGraph) -> list[AtomSet]:
    """
    Partition a graph into strongly connected components.

    Returns:
        list[AtomSet]:
            The components, ordered by their smallest atom index.
    """
    return sorted((frozenset(c) for c in nx.strongly_connected_components(g)), key=min)


def is_strongly_connected(g: nx.DiGraph) -> bool:
    """
    Check whether a graph is nonempty and strongly connected.

    A graph with a single vertex counts as strongly connected.
    """
    return g.number_of_nodes() > 0 and nx.is_strongly_connected(g)


def induced(g: nx.DiGraph, x: Iterable[int]) -> nx.DiGraph:
    """
    Restrict a graph to the vertices in `x` (vertices outside of `g` are skipped).
    """
    return g.subgraph(x)


def _is_loop_in(g: nx.DiGraph, x: AtomSet) -> bool:
    # every atom of a loop needs to be a vertex of the dependency graph
    return bool(x) and all(a in g for a in x) and is_strongly_connected(induced(g, x))


@lru_cache(maxsize=CACHE_SIZE)
def is_loop(p: Program, x: AtomSet) -> bool:
    """
    Check whether a set of atoms is a loop of a program.

    Args:
        p:
            The program to check against.
        x:
            The candidate set of atoms.

    Returns:
        bool:
            True if `x` is a nonempty set of occurring atoms and the subgraph
            of the dependency graph induced by `x` is strongly connected.
    """
    return _is_loop_in(dependency_graph(p), x)


def loops(p: Program) -> list[AtomSet]:
    """
    Enumerate all loops of a program.

    Every loop lies within a single strongly connected component of the
    dependency graph, so only subsets of each component are considered.

    Args:
        p:
            The program to enumerate loops of.

    Returns:
        list[AtomSet]:
            All loops of `p`, canonically ordered.

    Raises:
        GuardExceeded:
            If the largest strongly connected component is too large.
    """
    components = sccs(dependency_graph(p))
    check_guard(max((len(c) for c in components), default=0), "loop enumeration")

    return list(_loops(p))


@lru_cache(maxsize=CACHE_SIZE)
def _loops(p: Program) -> tuple[AtomSet, ...]:
    graph = dependency_graph(p)
    components = sccs(graph)

    found = [y for c in components for y in subsets(c) if _is_loop_in(graph, y)]
    LOG.debug("found %d loops in %d components", len(found), len(components))

    return tuple(canonical(found))


def maximal_loops_within(p: Program, s: AtomSet) -> list[AtomSet]:
    """
    Find the maximal loops of a program which are contained in a set of atoms.

    These are exactly the strongly connected components of the dependency
    graph restricted to `s`; atoms of `s` which do not occur in `p` are
    never part of a loop.

    Args:
        p:
            The program providing the dependency graph.
        s:
            The set of atoms to search within.

    Returns:
        list[AtomSet]:
            Disjoint maximal loops, canonically ordered.
    """
    return canonical(sccs(induced(dependency_graph(p), s)))


def elementary_subgraph(p: Program, x: AtomSet) -> nx.DiGraph:
    """
    Construct the elementary subgraph of a set of atoms for a program.

    Starting from the edgeless graph over `x`, an edge `(a, b)` is added
    once some rule has a head meeting `x` exactly in `a`, `b` occurs in the
    positive body, and all positive body atoms within `x` already share a
    strongly connected component. Iteration stops once no edge is added.

    Args:
        p:
            The program to construct the subgraph for.
        x:
            A set of atoms occurring in `p`.

    Returns:
        nx.DiGraph:
            The fixpoint graph over the vertices `x`.

    Raises:
        PreconditionViolated:
            If `x` contains atoms which do not occur in `p`.
    """
    if not x <= p.atoms:
        raise PreconditionViolated("elementary subgraph requires atoms occurring in the program")

    # only rules whose head meets x in a single atom can ever contribute
    candidates = []
    for rule in p.rules:
        if len(hit := rule.head & x) == 1 and (body := rule.pos & x):
            candidates.append((next(iter(hit)), body))

    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(x))

    iterations = 0
    while True:
        iterations += 1
        component = {a: i for i, c in enumerate(sccs(graph)) for a in c}
        edges = {
            (a, b)
            for a, body in candidates
            if len({component[b] for b in body}) == 1
            for b in body
            if not graph.has_edge(a, b)
        }

        if not edges:
            break

        graph.add_edges_from(edges)

    LOG.debug("elementary subgraph over %d atoms reached fixpoint after %d iterations", len(x), iterations)
    return graph


def to_dot(g: nx.DiGraph, p: Program) -> str:
    """
    Render a graph over atoms in DOT format, labelling vertices by atom name.

    Args:
        g:
            The graph to render, with atom indices as nodes.
        p:
            The program providing the atom table.

    Returns:
        str:
            A `digraph` document listing vertices, then edges, both sorted.
    """
    lines = ["digraph {"]
    lines.extend(f'  "{p.names[a]}";' for a in sorted(g.nodes))
    lines.extend(f'  "{p.names[a]}" -> "{p.names[b]}";' for a, b in sorted(g.edges))
    lines.append("}")

    return "\n".join(lines) + "\n"
