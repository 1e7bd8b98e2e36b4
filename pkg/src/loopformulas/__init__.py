from functools import cached_property
from typing import Iterable, TypeAlias

from pydantic import BaseModel, Field

# interpretations, loops and unfounded set candidates are all sets of atom indices
AtomSet: TypeAlias = frozenset[int]


class Atom(BaseModel, frozen=True):
    """
    A propositional atom, interned inside the atom table of a `Program`.
    """

    index: int = Field(ge=0)
    name: str


class Rule(BaseModel, frozen=True):
    """
    A disjunctive rule of the form `A :- B, not N, not not D`.

    Each component is a set of atom indices into the atom table of the
    owning `Program`. An empty head denotes a constraint, and components
    may overlap freely.
    """

    head: AtomSet = frozenset()
    pos: AtomSet = frozenset()
    neg: AtomSet = frozenset()
    dneg: AtomSet = frozenset()

    @property
    def atoms(self) -> AtomSet:
        """
        Retrieve every atom mentioned anywhere in this rule.
        """
        return self.head | self.pos | self.neg | self.dneg

    @property
    def is_nondisjunctive(self) -> bool:
        """
        Check whether this rule has a single head atom and no double negation.
        """
        return len(self.head) == 1 and not self.dneg


class Program(BaseModel, frozen=True):
    """
    An ordered sequence of rules alongside the atom table they index into.

    Subprograms (reducts, restrictions, shifted variants) share the atom
    table of the program they were derived from, so atom indices remain
    comparable across all of them. The atoms which actually occur in a
    program are available via `Program.atoms`.
    """

    rules: tuple[Rule, ...] = ()
    names: tuple[str, ...] = ()

    @cached_property
    def atoms(self) -> AtomSet:
        """
        Retrieve the set of atoms textually occurring in any rule.
        """
        return frozenset().union(*(rule.atoms for rule in self.rules))

    @cached_property
    def indices(self) -> dict[str, int]:
        """
        Retrieve the reverse mapping of the atom table.
        """
        return {name: index for index, name in enumerate(self.names)}

    @cached_property
    def is_nondisjunctive(self) -> bool:
        """
        Check whether every rule has exactly one head atom and no double negation.
        """
        return all(rule.is_nondisjunctive for rule in self.rules)

    def atomset(self, names: Iterable[str] | str) -> AtomSet:
        """
        Convert atom names into an `AtomSet` over this atom table.

        Args:
            names:
                Either an iterable of names, or a single string of names
                separated by whitespace and/or commas.

        Returns:
            AtomSet:
                The set of indices for the provided names.

        Raises:
            KeyError:
                If any name is not part of the atom table.
        """
        if isinstance(names, str):
            names = names.replace(",", " ").split()

        return frozenset(self.indices[name] for name in names)

    def names_of(self, atoms: Iterable[int]) -> list[str]:
        """
        Convert an `AtomSet` into a lexicographically sorted list of names.
        """
        return sorted(self.names[index] for index in atoms)

    def subprogram(self, rules: Iterable[Rule]) -> "Program":
        """
        Create a program over the same atom table from a selection of rules.

        The rules are trusted (they already index into this table), so no
        validation is performed.
        """
        return Program.model_construct(rules=tuple(rules), names=self.names)

    def fresh(self, base: str, avoid: Iterable[str] = ()) -> tuple["Program", Atom]:
        """
        Register a new atom name which does not yet occur in the atom table.

        Candidate names are tried as `base`, `base1`, `base2`, ... until an
        unused one is found.

        Args:
            base:
                The preferred symbol for the new atom.
            avoid:
                Additional names which must not be chosen.

        Returns:
            tuple[Program, Atom]:
                A copy of this program with the extended atom table, and the
                newly interned atom.
        """
        taken = set(self.names) | set(avoid)
        name, suffix = base, 0

        while name in taken:
            suffix += 1
            name = f"{base}{suffix}"

        program = Program.model_construct(rules=self.rules, names=self.names + (name,))
        return program, Atom(index=len(self.names), name=name)

    def structure(self) -> tuple[tuple[frozenset[str], ...], ...]:
        """
        Describe the rules in terms of atom names rather than indices.

        Two programs with equal structure are identical modulo the numbering
        of their atom tables.
        """
        return tuple(
            tuple(frozenset(self.names[i] for i in part) for part in (rule.head, rule.pos, rule.neg, rule.dneg))
            for rule in self.rules
        )


__all__ = [
    "Atom",
    "AtomSet",
    "Program",
    "Rule",
]
