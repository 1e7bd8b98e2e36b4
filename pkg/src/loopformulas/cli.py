import argparse
import json
import logging
import sys
from typing import Sequence

from loopformulas import AtomSet, Program
from loopformulas.classify import shift
from loopformulas.core import is_model
from loopformulas.errors import GuardExceeded, PreconditionViolated, ProgramSyntaxError, PropertyViolation
from loopformulas.graph import dependency_graph, elementary_subgraph, to_dot
from loopformulas.parser import SourceProgram, parse_program, render_program
from loopformulas.reports import CheckReport, analyze, name_set, render_text
from loopformulas.types import enumeration_limit, max_atoms
from loopformulas.unfounded import StabilityCriterion, criterion_witness, lf_formula_text
from loopformulas.verify import run_verification

LOG = logging.getLogger(__name__)

# process exit codes
EXIT_OK = 0
EXIT_GUARD = 1
EXIT_SYNTAX = 2
# unreadable files share the exit code of syntax errors
EXIT_UNREADABLE = 2
EXIT_NOT_STABLE = 3
EXIT_VIOLATION = 4
EXIT_HYPOTHESIS = 5


def _load(path: str) -> tuple[Program, str]:
    src = SourceProgram.from_path(path)
    return parse_program(src), src.origin


def _atoms(p: Program, names: Sequence[str]) -> AtomSet:
    # names may be given as separate arguments, comma separated, or both
    try:
        return p.atomset(" ".join(names))
    except KeyError as error:
        raise PreconditionViolated(f"atom {error.args[0]} does not occur in the program") from None


def _unreadable(error: OSError) -> str:
    return f"error: cannot read {error.filename or 'input'}: {error.strerror or error}"


def _emit(payload: str) -> None:
    sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")


def cmd_analyze(args: argparse.Namespace) -> int:
    """
    Analyze one or more program files, emitting one report per file.
    """
    reports, code = [], EXIT_OK

    for path in args.paths:
        try:
            program, origin = _load(path)
        except ProgramSyntaxError as error:
            print(f"error: {error}", file=sys.stderr)
            code = max(code, EXIT_SYNTAX)
            continue
        except OSError as error:
            print(_unreadable(error), file=sys.stderr)
            code = max(code, EXIT_UNREADABLE)
            continue

        report = analyze(
            program,
            origin,
            include_loops=not args.skip_loops,
            include_models=args.models,
            assume_hef=args.assume_hef,
            baseline=args.baseline,
        )
        if report.refused:
            print(f"warning: {origin}: exceeded the guard for {', '.join(report.refused)}", file=sys.stderr)
            code = max(code, EXIT_GUARD)

        reports.append(report)

    if args.format == "text":
        _emit("\n".join(render_text(report) for report in reports))
    elif len(args.paths) == 1:
        if reports:
            _emit(reports[0].model_dump_json(indent=2))
    else:
        _emit(json.dumps([report.model_dump(mode="json") for report in reports], indent=2))

    return code


def cmd_check_model(args: argparse.Namespace) -> int:
    """
    Check whether an interpretation is a stable model, under one or all criteria.
    """
    program, origin = _load(args.path)

    try:
        x = _atoms(program, args.model)
    except PreconditionViolated as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_HYPOTHESIS

    report = CheckReport(origin=origin, model=name_set(program, x), is_model=is_model(x, program))
    if not report.is_model:
        _emit(report.model_dump_json(indent=2))
        print(f"error: {{{', '.join(report.model)}}} is not a model of {origin}", file=sys.stderr)
        return EXIT_HYPOTHESIS

    selected = list(StabilityCriterion) if args.criterion == "all" else [StabilityCriterion(args.criterion)]
    for c in selected:
        witness = criterion_witness(program, x, c)
        report.criteria[c.value] = witness is None
        report.witnesses[c.value] = None if witness is None else name_set(program, witness)

    report.agreement = len(set(report.criteria.values())) == 1
    report.stable = report.agreement and all(report.criteria.values())

    if args.format == "text":
        lines = [
            f"{c:<7} {'holds' if ok else 'fails'} {' '.join(report.witnesses[c] or [])}".rstrip()
            for c, ok in report.criteria.items()
        ]
        _emit("\n".join(lines))
    else:
        _emit(report.model_dump_json(indent=2))

    if not report.agreement:
        print("error: stability criteria disagree", file=sys.stderr)
        return EXIT_VIOLATION

    return EXIT_OK if report.stable else EXIT_NOT_STABLE


def cmd_shift(args: argparse.Namespace) -> int:
    """
    Print the shifted variant of a program in canonical form.
    """
    program, _ = _load(args.path)
    sys.stdout.write(render_program(shift(program)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """
    Check every registered property on a stream of random programs.
    """
    try:
        checked = run_verification(args.seed, args.count, atoms=args.atoms, max_rules=args.max_rules)
    except PropertyViolation as error:
        print(f"violated: {error.name}", file=sys.stderr)
        print(error.detail, file=sys.stderr)
        sys.stdout.write(error.program)
        return EXIT_VIOLATION

    LOG.info("verified %d programs", checked)
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    """
    Print the dependency graph, or an elementary subgraph, in DOT format.
    """
    program, _ = _load(args.path)

    if args.atoms is None:
        sys.stdout.write(to_dot(dependency_graph(program), program))
        return EXIT_OK

    sys.stdout.write(to_dot(elementary_subgraph(program, _atoms(program, args.atoms)), program))
    return EXIT_OK


def cmd_formula(args: argparse.Namespace) -> int:
    """
    Print the loop formula of a set of atoms.
    """
    program, _ = _load(args.path)
    sys.stdout.write(lf_formula_text(program, _atoms(program, args.atoms)) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser for all subcommands.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="log progress (repeat for debug output)")
    common.add_argument("--max-atoms", type=int, default=None, metavar="N", help="enumeration guard (default 20)")
    common.add_argument("--format", choices=["json", "text"], default="json", help="output format")

    parser = argparse.ArgumentParser(prog="loopformulas", description="Loop analysis for disjunctive logic programs")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="classify a program and enumerate its loops")
    analyze.add_argument("paths", nargs="+", help="program files, or - for stdin")
    analyze.add_argument("--skip-loops", action="store_true", help="skip loop and elementary loop enumeration")
    analyze.add_argument("--models", action="store_true", help="analyze every model individually")
    analyze.add_argument(
        "--assume-hef", action="store_true", help="decide elementary loops via the elementary subgraph"
    )
    analyze.add_argument("--baseline", action="store_true", help="include maximal loops of the R fixpoint per model")
    analyze.set_defaults(handler=cmd_analyze)

    check = commands.add_parser("check-model", parents=[common], help="check whether a model is stable")
    check.add_argument("path", help="program file, or - for stdin")
    check.add_argument("model", nargs="*", help="atoms of the model (space or comma separated)")
    check.add_argument(
        "--criterion",
        choices=["all", *(c.value for c in StabilityCriterion)],
        default="all",
        help="stability criterion to evaluate",
    )
    check.set_defaults(handler=cmd_check_model)

    shifting = commands.add_parser("shift", parents=[common], help="print the shifted program")
    shifting.add_argument("path", help="program file, or - for stdin")
    shifting.set_defaults(handler=cmd_shift)

    verify = commands.add_parser("verify", parents=[common], help="check properties on random programs")
    verify.add_argument("--seed", type=int, default=1, help="random seed")
    verify.add_argument("--count", type=int, default=500, help="number of programs")
    verify.add_argument("--atoms", type=int, default=6, help="size of the atom pool")
    verify.add_argument("--max-rules", type=int, default=10, help="maximum rules per program")
    verify.set_defaults(handler=cmd_verify)

    graph = commands.add_parser("graph", parents=[common], help="print a graph in DOT format")
    graph.add_argument("path", help="program file, or - for stdin")
    graph.add_argument("--atoms", nargs="+", default=None, help="print the elementary subgraph of these atoms")
    graph.set_defaults(handler=cmd_graph)

    formula = commands.add_parser("formula", parents=[common], help="print the loop formula of a set of atoms")
    formula.add_argument("path", help="program file, or - for stdin")
    formula.add_argument("atoms", nargs="+", help="atoms of the set")
    formula.set_defaults(handler=cmd_formula)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run the command line interface.

    Args:
        argv:
            The arguments to parse, defaulting to `sys.argv`.

    Returns:
        int:
            The process exit code.
    """
    args = build_parser().parse_args(argv)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    limit = max_atoms() if args.max_atoms is None else args.max_atoms

    try:
        with enumeration_limit(limit):
            return args.handler(args)
    except ProgramSyntaxError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_SYNTAX
    except OSError as error:
        print(_unreadable(error), file=sys.stderr)
        return EXIT_UNREADABLE
    except GuardExceeded as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_GUARD
    except PreconditionViolated as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
