import logging
from typing import Iterable

from pydantic import BaseModel

from loopformulas import AtomSet, Program
from loopformulas.classify import ClassReport, classify
from loopformulas.core import is_stable, models, stable_models
from loopformulas.elementary import elementary_loops
from loopformulas.errors import GuardExceeded
from loopformulas.graph import loops
from loopformulas.parser import render_program
from loopformulas.stability import BoundingLoopReport, baseline_loops, bounding_loops
from loopformulas.unfounded import StabilityCriterion, criterion_witness, elementarily_unfounded_sets

LOG = logging.getLogger(__name__)


def name_set(p: Program, atoms: AtomSet) -> list[str]:
    """
    Convert an atom set into a sorted list of atom names.
    """
    return p.names_of(atoms)


def name_sets(p: Program, sets: Iterable[AtomSet]) -> list[list[str]]:
    """
    Convert atom sets into name lists, sorted by cardinality and then lexicographically.
    """
    return sorted((name_set(p, atoms) for atoms in sets), key=lambda names: (len(names), names))


class WitnessEntry(BaseModel):
    """
    A loop named by its atoms, and the index of the rule involved.
    """

    loop: list[str]
    rule: int | None = None


class ClassificationEntry(BaseModel):
    """
    Program class memberships, with witnesses for every failed predicate.
    """

    tight: bool
    e_tight: bool
    hcf: bool
    hef: bool | None
    witnesses: dict[str, WitnessEntry] = {}

    @classmethod
    def build(cls, p: Program, report: ClassReport) -> "ClassificationEntry":
        """
        Convert a classification into its named form, resolving witness loops to atom names.

        Args:
            p:
                The classified program, providing the atom table.
            report:
                The classification to convert.

        Returns:
            ClassificationEntry:
                The memberships and witnesses of `report`, keyed as before.
        """
        witnesses = {
            key: WitnessEntry(loop=name_set(p, witness.loop), rule=witness.rule)
            for key, witness in report.witnesses.items()
        }
        return cls(tight=report.tight, e_tight=report.e_tight, hcf=report.hcf, hef=report.hef, witnesses=witnesses)


class BoundingEntry(BaseModel):
    """
    A bounding loop named by its atoms.
    """

    loop: list[str]
    hef_subprogram: bool | None
    unfounded_free: bool | None
    unfounded_witness: list[str] | None = None

    @classmethod
    def build_all(cls, p: Program, report: BoundingLoopReport) -> list["BoundingEntry"]:
        """
        Convert every bounding loop of a report into its named form, keeping their order.
        """
        return [
            cls(
                loop=name_set(p, entry.loop),
                hef_subprogram=entry.hef_subprogram,
                unfounded_free=entry.unfounded_free,
                unfounded_witness=None if entry.unfounded_witness is None else name_set(p, entry.unfounded_witness),
            )
            for entry in report.bounding_loops
        ]


class ModelEntry(BaseModel):
    """
    The stability analysis of a single model.
    """

    model: list[str]
    stable: bool
    criteria: dict[str, bool | None] = {}
    elementarily_unfounded_sets: list[list[str]] | None = None
    bounding: list[BoundingEntry] = []
    baseline: list[list[str]] | None = None


class AnalysisReport(BaseModel):
    """
    The full analysis of a program, as emitted by the `analyze` command.

    Entries which could not be computed within the enumeration guard are
    None, and the refused analyses are listed in `refused`.
    """

    origin: str
    program: str
    rules: int
    atoms: list[str]
    classification: ClassificationEntry
    loops: list[list[str]] | None = None
    elementary_loops: list[list[str]] | None = None
    stable_models: list[list[str]] | None = None
    models: list[ModelEntry] | None = None
    refused: list[str] = []


class CheckReport(BaseModel):
    """
    The outcome of checking one interpretation against the stability criteria.
    """

    origin: str
    model: list[str]
    is_model: bool
    stable: bool | None = None
    agreement: bool = True
    criteria: dict[str, bool] = {}
    witnesses: dict[str, list[str] | None] = {}


def _model_entry(p: Program, x: AtomSet, *, baseline: bool) -> ModelEntry:
    criteria: dict[str, bool | None] = {}

    for c in StabilityCriterion:
        try:
            criteria[c.value] = criterion_witness(p, x, c) is None
        except GuardExceeded:
            criteria[c.value] = None

    try:
        found = name_sets(p, elementarily_unfounded_sets(p, x))
    except GuardExceeded:
        found = None

    return ModelEntry(
        model=name_set(p, x),
        stable=is_stable(p, x),
        criteria=criteria,
        elementarily_unfounded_sets=found,
        bounding=BoundingEntry.build_all(p, bounding_loops(p, x)),
        baseline=name_sets(p, baseline_loops(p, x)) if baseline else None,
    )


def analyze(
    p: Program,
    origin: str = "<string>",
    *,
    include_loops: bool = True,
    include_models: bool = False,
    assume_hef: bool = False,
    baseline: bool = False,
) -> AnalysisReport:
    """
    Analyze a program, skipping whatever exceeds the enumeration guard.

    Args:
        p:
            The program to analyze.
        origin:
            The label of the program source, copied into the report.
        include_loops:
            Whether to enumerate loops and elementary loops.
        include_models:
            Whether to analyze every model of `p` individually.
        assume_hef:
            Decide elementary loops through the elementary subgraph even
            for disjunctive programs.
        baseline:
            Whether to add the maximal loops of the R fixpoint to each
            model entry.

    Returns:
        AnalysisReport:
            The analysis, with the names of refused analyses in `refused`.
    """
    refused: list[str] = []
    report = AnalysisReport(
        origin=origin,
        program=render_program(p),
        rules=len(p.rules),
        atoms=p.names_of(p.atoms),
        classification=ClassificationEntry.build(p, classify(p)),
    )

    if report.classification.hef is None:
        refused.append("hef")

    if include_loops:
        try:
            report.loops = name_sets(p, loops(p))
            report.elementary_loops = name_sets(p, elementary_loops(p, assume_hef=assume_hef))
        except GuardExceeded as error:
            LOG.info("skipping loop enumeration: %s", error)
            refused.append("loops")

    try:
        report.stable_models = name_sets(p, stable_models(p))
    except GuardExceeded as error:
        LOG.info("skipping stable model enumeration: %s", error)
        refused.append("stable_models")

    if include_models:
        try:
            report.models = [_model_entry(p, x, baseline=baseline) for x in models(p)]
        except GuardExceeded as error:
            LOG.info("skipping model analysis: %s", error)
            refused.append("models")

    report.refused = refused
    return report


def render_text(report: AnalysisReport) -> str:
    """
    Render an analysis report as aligned plain text.
    """

    def sets(values: list[list[str]] | None) -> str:
        if values is None:
            return "(refused)"
        return " ".join("{" + ",".join(names) + "}" for names in values) or "(none)"

    classes = report.classification
    rows = [
        ("origin", report.origin),
        ("rules", str(report.rules)),
        ("atoms", " ".join(report.atoms) or "(none)"),
        ("tight", str(classes.tight).lower()),
        ("e-tight", str(classes.e_tight).lower()),
        ("hcf", str(classes.hcf).lower()),
        ("hef", "(refused)" if classes.hef is None else str(classes.hef).lower()),
        ("loops", sets(report.loops)),
        ("elementary", sets(report.elementary_loops)),
        ("stable", sets(report.stable_models)),
    ]

    for entry in report.models or []:
        verdict = "stable" if entry.stable else "not stable"
        rows.append(("model", f"{sets([entry.model])} {verdict}, bounding {sets([b.loop for b in entry.bounding])}"))

    if report.refused:
        rows.append(("refused", " ".join(report.refused)))

    width = max(len(key) for key, _ in rows)
    return "".join(f"{key.ljust(width)}  {value}\n" for key, value in rows)
