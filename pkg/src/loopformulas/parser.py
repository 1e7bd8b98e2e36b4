import sys
from pathlib import Path

import pyparsing as pp
from pydantic import BaseModel

from loopformulas import Program, Rule
from loopformulas.errors import ProgramSyntaxError

# reserved word introducing (double) negation in bodies
NOT = pp.Keyword("not")

# atom symbols, excluding the negation keyword itself
ATOM = (~NOT + pp.Word(pp.alphas + "_", pp.alphanums + "_")).set_name("atom")

# body literals, tagged with the component they belong to
POSITIVE = ATOM.copy().set_parse_action(lambda t: ("pos", t[0]))
NEGATIVE = (pp.Suppress(NOT) + ATOM).set_parse_action(lambda t: ("neg", t[0]))
DOUBLE = (pp.Suppress(NOT) + pp.Suppress(NOT) + ATOM).set_parse_action(lambda t: ("dneg", t[0]))
LITERAL = (DOUBLE | NEGATIVE | POSITIVE).set_name("literal")

NECK = pp.Suppress(":-").set_name("':-'")
PERIOD = pp.Suppress(".").set_name("'.'")

HEAD = pp.Group(ATOM + pp.ZeroOrMore(pp.Suppress(";") - ATOM)).set_name("head")
BODY = pp.Group(pp.Opt(LITERAL + pp.ZeroOrMore(pp.Suppress(",") - LITERAL))).set_name("body")

# whatever may follow a head: a body, or the period closing a fact
TAIL = ((NECK - BODY - PERIOD) | (PERIOD + pp.Group(pp.Empty()))).set_name("':-' or '.'")

# a rule is either a headed rule, a constraint, or the empty rule "."
RULE = pp.Group(
    (HEAD - TAIL)
    | (pp.Group(pp.Empty()) + NECK - BODY - PERIOD)
    | (pp.Group(pp.Empty()) + PERIOD + pp.Group(pp.Empty()))
).set_name("rule")

GRAMMAR = pp.ZeroOrMore(RULE)
GRAMMAR.ignore(pp.Regex(r"%.*"))


class SourceProgram(BaseModel, frozen=True):
    """
    Program text alongside a label describing where it came from.
    """

    text: str
    origin: str = "<string>"

    @classmethod
    def from_path(cls, path: str | Path) -> "SourceProgram":
        """
        Read program text from a file, or from stdin when the path is `-`.

        Args:
            path:
                The location of a UTF-8 program file.

        Returns:
            SourceProgram:
                The loaded text, labelled with the path it came from.
        """
        if str(path) == "-":
            return cls(text=sys.stdin.read(), origin="<stdin>")

        return cls(text=Path(path).read_text(encoding="utf-8"), origin=str(path))


def parse_program(src: SourceProgram | str) -> Program:
    """
    Parse program text into a `Program`.

    Atoms are numbered by first occurrence in the text, rules keep their
    source order (duplicates included), and atoms repeated within a single
    rule component are collapsed.

    Args:
        src:
            The program text to parse, either wrapped in a `SourceProgram`
            or as a bare string.

    Returns:
        Program:
            The parsed program and its atom table.

    Raises:
        ProgramSyntaxError:
            If the text does not follow the rule grammar. The error carries
            the 1-based line and column of the offending position.
    """
    if isinstance(src, str):
        src = SourceProgram(text=src)

    try:
        parsed = GRAMMAR.parse_string(src.text, parse_all=True)
    except pp.ParseBaseException as error:
        raise ProgramSyntaxError(error.msg, src.origin, error.lineno, error.col, error.line) from None

    names: dict[str, int] = {}

    def intern(name: str) -> int:
        return names.setdefault(name, len(names))

    rules = []
    for head, body in parsed:
        parts: dict[str, set[int]] = {"head": {intern(name) for name in head}}
        parts.update(pos=set(), neg=set(), dneg=set())

        for kind, name in body:
            parts[kind].add(intern(name))

        rules.append(Rule(**{kind: frozenset(atoms) for kind, atoms in parts.items()}))

    return Program(rules=tuple(rules), names=tuple(names))


def render_rule(program: Program, rule: Rule) -> str:
    """
    Render a single rule of a program in canonical form.

    Args:
        program:
            The program providing the atom table for the rule.
        rule:
            The rule to render.

    Returns:
        str:
            The rule text, without a trailing newline.
    """
    head = " ; ".join(program.names[i] for i in sorted(rule.head))
    body = ", ".join(
        [program.names[i] for i in sorted(rule.pos)]
        + [f"not {program.names[i]}" for i in sorted(rule.neg)]
        + [f"not not {program.names[i]}" for i in sorted(rule.dneg)]
    )

    if not body:
        return f"{head}." if head else ":- ."

    return f"{head} :- {body}." if head else f":- {body}."


def render_program(program: Program) -> str:
    """
    Render a program in canonical text form, one rule per line.

    Head atoms are joined by `" ; "` and body literals are listed positive
    first, then negated, then doubly negated, each group in atom table order.
    The output parses back into a structurally identical program.
    """
    return "".join(f"{render_rule(program, rule)}\n" for rule in program.rules)
