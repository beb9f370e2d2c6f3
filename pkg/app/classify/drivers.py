"""
Classification Drivers: turn LP verdicts into a parameter table.

Every exclusion cites an Infeasible solver run (or, where named, a structural
argument); Feasible runs never claim existence on their own. Listed matrices
are matched against the construction catalog, verified on a torus before
being reported as realized.

Buckets of the 1-null G_3 run:
    radius-1          covering radius 1
    lifted            codes determined by a Hamming-graph lift
    closed            LP_= feasible, LP_> infeasible
    dead-end          LP_= and LP_> feasible, no descendant survives LP_>=
    branching         LP_= and LP_> feasible, some descendant survives
    deep              LP_= infeasible; the matrices come from descendants
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from loguru import logger

from app.classify.candidates import (
    canonicalize,
    enumerate_partial,
    family_reduction,
    viable_descendants,
)
from app.classify.report import LISTED_KINDS, ClassificationReport, CandidateVerdict, LpRecord, VerdictKind
from app.core.budget import SearchBudget
from app.core.config import settings
from app.core.errors import InvalidArgument
from app.grid.codes import load_code, verify_periodic
from app.grid.constructions import (
    ConstructionSpec,
    build,
    distance_anticode_matrix,
    distance_matrix,
    diameter_union_matrix,
    halved_perfect_matrix,
    realizations,
)
from app.grid.matrix import (
    ParamMatrix,
    PartialMatrix,
    extension,
    format_compact,
    format_partial,
    parse_compact,
)
from app.lp.problem import Mode
from app.lp.solver import SolveStatus
from app.worker.pool import LpJob, SolvePool, run_job

# Triangular-grid codes whose instances are not shipped; an instance file
# passed to the Classifier upgrades them to verified realizations.
PER_REFERENCE = {
    "[0,6|1,2,3|2,4]": "CRC of the triangular grid (cited, not machine-verified)",
    "[0,6|1,2,3|3,3]": "CRC of the triangular grid (cited, not machine-verified)",
}

LIFTED_BINARY = "2-null codes with c1=1, c2=2 lift from H(2n,2) through the Gray map"
LIFTED_TERNARY = "1-null codes with a1=1 lift from H(n,3); in G_3 only the singleton has a1=1"
INTERVAL_ARGUMENT = "interval-graph argument: 2-null codes with c1=1, c2=3 exist only in G_2"
HALVED_TENSION = (
    "c2=7 runs the same LP route as c2=4..6; the halved perfect code realizes the matrix it leaves standing"
)


def realization_catalog(n: int) -> Dict[str, ConstructionSpec]:
    """Canonical compact matrix -> first catalog construction claiming it."""
    catalog: Dict[str, ConstructionSpec] = {}
    for spec in realizations(n):
        key = format_compact(canonicalize(spec.claimed_matrix))
        catalog.setdefault(key, spec)
    return catalog


def ladder_radii(radius: int, min_radius: Optional[int] = None) -> List[int]:
    low = min(min_radius or settings.CRC_MIN_RADIUS, radius)
    return list(range(low, radius + 1))


@dataclass
class LpOutcome:
    status: SolveStatus
    radius: int
    runs: List[LpRecord] = field(default_factory=list)


@dataclass
class Exploration:
    verdicts: List[CandidateVerdict] = field(default_factory=list)
    eq: Optional[SolveStatus] = None
    gt: Optional[SolveStatus] = None
    surviving_descendants: int = 0

    @property
    def undecided(self) -> bool:
        return any(v.kind == VerdictKind.TIMEOUT for v in self.verdicts)


class Classifier:
    """LP runs and verdict assembly for one grid G_n at one ball radius."""

    def __init__(self, n: int, radius: Optional[int] = None, budget: Optional[SearchBudget] = None,
                 min_radius: Optional[int] = None, instances: Sequence[Path] = ()):
        if not 1 <= n <= 4:
            raise InvalidArgument(f"Classification supports 1 <= n <= 4, got {n}")
        self.n = n
        self.radius = radius or settings.CRC_BALL_RADIUS
        self.budget = budget or SearchBudget.default()
        self.min_radius = min_radius
        self.catalog = realization_catalog(n)
        self._confirmed: Dict[str, Optional[str]] = {}
        self.instances: Dict[str, str] = {}
        for path in instances:
            self.add_instance(path)

    def add_instance(self, path: Path) -> Optional[str]:
        """
        Register a user-supplied code file as a realization.

        The code is verified on a torus; a document that is not a CRC of G_n,
        or whose claimed matrix disagrees, is skipped with a warning.
        Returns the canonical matrix it realizes.
        """
        path = Path(path)
        code, document = load_code(path)
        if code.n != self.n:
            raise InvalidArgument(f"{path} holds a code of G_{code.n}, classifying G_{self.n}")
        expected = parse_compact(document.matrix, 2 * self.n) if document.matrix else None
        verdict = verify_periodic(code, expected)
        if not verdict.is_crc or verdict.expected_matches is False:
            logger.warning(f"⚠️ Ignoring instance {path.name}: {verdict.summary()}")
            return None
        canonical = format_compact(canonicalize(verdict.matrix))
        identifier = f"instance({path.name})"
        self.instances.setdefault(canonical, identifier)
        logger.info(f"📦 {identifier} verifies to {canonical}")
        return canonical

    # -- LP runs ---------------------------------------------------------

    def lp(self, matrix: str, mode: Mode) -> LpOutcome:
        """
        Solve at increasing radii, stopping at the first Infeasible or Timeout.

        LP_> is not monotone under restriction, so it runs at the full radius only.
        """
        radii = [self.radius] if mode == Mode.GT else ladder_radii(self.radius, self.min_radius)
        runs: List[LpRecord] = []
        for radius in radii:
            record = run_job(LpJob(self.n, matrix, mode, radius), self.budget)
            runs.append(record)
            status = SolveStatus(record.status)
            if status != SolveStatus.FEASIBLE:
                return LpOutcome(status, radius, runs)
        return LpOutcome(SolveStatus.FEASIBLE, self.radius, runs)

    # -- verdicts --------------------------------------------------------

    def confirm(self, canonical: str) -> Optional[str]:
        """Catalog construction for a canonical matrix, if it verifies on a torus."""
        if canonical not in self._confirmed:
            identifier = None
            spec = self.catalog.get(canonical)
            if spec is not None:
                _, code = build(spec.kind, **dict(spec.parameters))
                if verify_periodic(code, spec.claimed_matrix).expected_matches:
                    identifier = spec.identifier
                else:
                    logger.error(f"🚫 {spec.identifier} does not verify to {format_compact(spec.claimed_matrix)}")
            self._confirmed[canonical] = identifier
        return self._confirmed[canonical]

    def listed(self, candidate: str, matrix: ParamMatrix, runs: List[LpRecord],
               radius: Optional[int] = None, bucket: Optional[str] = None) -> CandidateVerdict:
        """Verdict for a matrix the LP did not exclude."""
        text = format_compact(matrix)
        canonical = format_compact(canonicalize(matrix))
        construction = self.confirm(canonical) or self.instances.get(canonical)
        if construction:
            kind, citation = VerdictKind.REALIZED, None
        elif canonical in PER_REFERENCE:
            kind, citation = VerdictKind.PER_REFERENCE, PER_REFERENCE[canonical]
        else:
            kind, citation = VerdictKind.FEASIBLE, None
        return CandidateVerdict(
            candidate=candidate, kind=kind, matrix=text, canonical=canonical, bucket=bucket,
            construction=construction, citation=citation, radius=radius, runs=runs,
        )

    def realized(self, candidate: str, matrix: ParamMatrix, citation: str,
                 bucket: Optional[str] = None, note: str = "") -> CandidateVerdict:
        """Verdict for a matrix a structural argument places on a construction."""
        verdict = self.listed(candidate, matrix, [], bucket=bucket)
        verdict.citation = citation
        verdict.note = note
        return verdict

    @staticmethod
    def _unlisted(candidate: str, kind: VerdictKind, outcome: LpOutcome, matrix: Optional[str] = None,
                  bucket: Optional[str] = None, note: str = "") -> CandidateVerdict:
        return CandidateVerdict(
            candidate=candidate, kind=kind, matrix=matrix, bucket=bucket,
            radius=outcome.radius, runs=outcome.runs, note=note,
        )

    # -- exploration -----------------------------------------------------

    def explore(self, partial: PartialMatrix, bucket: Optional[str] = None) -> Exploration:
        """
        LP_= and LP_> on a candidate that survived LP_>=, then LP_>= on its
        viable descendants and recursion into the survivors.
        """
        text = format_partial(partial)
        rho = partial.rho
        result = Exploration()

        reduction = family_reduction(partial, self.n) if rho >= 3 else None
        if reduction is not None:
            matrix = format_compact(extension(partial))
            if reduction.consistent:
                result.verdicts.append(CandidateVerdict(
                    candidate=text, kind=VerdictKind.REDUCED, matrix=matrix, bucket=bucket,
                    reduced=format_compact(reduction.reduced),
                    note=f"rows {reduction.rows[0]} and {reduction.rows[1]} repeat",
                ))
            else:
                result.verdicts.append(CandidateVerdict(
                    candidate=text, kind=VerdictKind.EXCLUDED_BY_THEOREM, matrix=matrix, bucket=bucket,
                    citation=f"repeating rows require a multiple of a valency-2 matrix (n={self.n})",
                ))
            return result

        if rho > 2 * self.n + 1:
            result.verdicts.append(CandidateVerdict(
                candidate=text, kind=VerdictKind.TIMEOUT, bucket=bucket,
                note=f"covering radius above the cap {2 * self.n + 1}",
            ))
            return result

        completed = extension(partial)
        eq = self.lp(text, Mode.EQ)
        result.eq = eq.status
        if eq.status == SolveStatus.FEASIBLE:
            result.verdicts.append(self.listed(text, completed, eq.runs, eq.radius, bucket))
        else:
            kind = VerdictKind.EXCLUDED if eq.status == SolveStatus.INFEASIBLE else VerdictKind.TIMEOUT
            result.verdicts.append(self._unlisted(text, kind, eq, format_compact(completed), bucket))

        if rho + 1 > self.radius:
            result.verdicts.append(CandidateVerdict(
                candidate=text, kind=VerdictKind.TIMEOUT, bucket=bucket,
                note=f"ball radius {self.radius} cannot separate rho={rho} from larger covering radii",
            ))
            return result

        gt = self.lp(text, Mode.GT)
        result.gt = gt.status
        if gt.status == SolveStatus.INFEASIBLE:
            return result
        if gt.status == SolveStatus.TIMEOUT:
            result.verdicts.append(self._unlisted(text, VerdictKind.TIMEOUT, gt, bucket=bucket,
                                                  note="LP_> undecided"))
            return result

        survivors = []
        for child in viable_descendants(partial):
            child_text = format_partial(child)
            ge = self.lp(child_text, Mode.GE)
            if ge.status == SolveStatus.FEASIBLE:
                survivors.append(child)
            else:
                kind = VerdictKind.EXCLUDED if ge.status == SolveStatus.INFEASIBLE else VerdictKind.TIMEOUT
                result.verdicts.append(self._unlisted(child_text, kind, ge, bucket=bucket))
        result.surviving_descendants = len(survivors)

        for child in survivors:
            result.verdicts.extend(self.explore(child, bucket).verdicts)
        return result

    # -- per-candidate entry points ---------------------------------------

    def radius_one(self, partial: PartialMatrix, bucket: Optional[str] = None) -> CandidateVerdict:
        text = format_partial(partial)
        completed = extension(partial)
        outcome = self.lp(format_compact(completed), Mode.FULL)
        if outcome.status == SolveStatus.FEASIBLE:
            return self.listed(text, completed, outcome.runs, outcome.radius, bucket)
        kind = VerdictKind.EXCLUDED if outcome.status == SolveStatus.INFEASIBLE else VerdictKind.TIMEOUT
        return self._unlisted(text, kind, outcome, format_compact(completed), bucket)

    def g3_candidate(self, partial: PartialMatrix) -> List[CandidateVerdict]:
        """Decision tree for one rho=2, 1-null candidate of G_3."""
        text = format_partial(partial)
        c1, a1, _ = partial.complete_row(1)
        c2 = partial.c[1]

        if a1 == 1:
            if c1 == 1 and c2 == 2:
                spec, _ = build("ternary", n=3, source="singleton")
                return [self.realized(text, spec.claimed_matrix, LIFTED_TERNARY, "lifted")]
            return [CandidateVerdict(candidate=text, kind=VerdictKind.EXCLUDED_BY_THEOREM,
                                     bucket="lifted", citation=LIFTED_TERNARY)]
        if (c1, a1, c2) == (1, 0, 2):
            return [
                self.realized(text, distance_matrix(3), LIFTED_BINARY, "lifted"),
                self.realized(text, distance_anticode_matrix(3), LIFTED_BINARY, "lifted"),
            ]

        ge = self.lp(text, Mode.GE)
        if ge.status == SolveStatus.INFEASIBLE:
            return [self._unlisted(text, VerdictKind.EXCLUDED, ge)]
        if ge.status == SolveStatus.TIMEOUT:
            return [self._unlisted(text, VerdictKind.TIMEOUT, ge)]

        explored = self.explore(partial)
        if explored.undecided:
            bucket = "undecided"
        elif explored.eq == SolveStatus.INFEASIBLE:
            bucket = "deep"
        elif explored.gt == SolveStatus.INFEASIBLE:
            bucket = "closed"
        elif explored.surviving_descendants == 0:
            bucket = "dead-end"
        else:
            bucket = "branching"
        for verdict in explored.verdicts:
            verdict.bucket = bucket
        logger.debug(f"{text}: {bucket}, {len(explored.verdicts)} verdicts")
        return explored.verdicts

    def g4_candidate(self, c2: int) -> List[CandidateVerdict]:
        """c1=1, a0=a1=0 and the given c2 in G_4."""
        valency = 2 * self.n
        partial = PartialMatrix((0, 0), (valency,), (1, c2), valency)
        text = format_partial(partial)

        if c2 == 2:
            return [
                self.realized(text, distance_matrix(self.n), LIFTED_BINARY),
                self.realized(text, distance_anticode_matrix(self.n), LIFTED_BINARY),
            ]
        if c2 == 2 * self.n:
            return [self.realized(text, diameter_union_matrix(self.n, 1), "diameter perfect code")]

        ge = self.lp(text, Mode.GE)
        if ge.status == SolveStatus.INFEASIBLE:
            if c2 == 2 * self.n - 1:
                logger.error(f"🚫 {text}: LP_>= infeasible although the halved perfect code has this c2")
            verdicts = [self._unlisted(text, VerdictKind.EXCLUDED, ge)]
        elif ge.status == SolveStatus.TIMEOUT and c2 == 3:
            verdict = self._unlisted(text, VerdictKind.EXCLUDED_BY_THEOREM, ge,
                                     note="LP route exceeded its budget")
            verdict.citation = INTERVAL_ARGUMENT
            verdicts = [verdict]
        elif ge.status == SolveStatus.TIMEOUT:
            verdicts = [self._unlisted(text, VerdictKind.TIMEOUT, ge)]
        else:
            if c2 == 3:
                logger.error(f"🚫 {text}: LP_>= feasible where the interval-graph argument excludes it")
            verdicts = self.explore(partial).verdicts

        if c2 == 2 * self.n - 1:
            self._attach_halved(text, verdicts)
        return verdicts

    def _attach_halved(self, candidate: str, verdicts: List[CandidateVerdict]):
        """Mark the halved perfect matrix among the c2=2n-1 verdicts, adding it if the runs did not reach it."""
        matrix = halved_perfect_matrix(self.n)
        canonical = format_compact(canonicalize(matrix))
        found = [v for v in verdicts if v.canonical == canonical and v.kind in LISTED_KINDS]
        if not found:
            found = [self.realized(candidate, matrix, "even-weight half of the perfect code")]
            verdicts.append(found[0])
        for verdict in found:
            verdict.note = HALVED_TENSION


def classify_rho1(n: int, radius: Optional[int] = None, budget: Optional[SearchBudget] = None,
                  n_jobs: Optional[int] = None, min_radius: Optional[int] = None,
                  instances: Sequence[Path] = ()) -> ClassificationReport:
    """LP_=1 over every rho=1 candidate [0,2n|c,2n-c]."""
    clf = Classifier(n, radius, budget, min_radius, instances)
    candidates = enumerate_partial(n, 1, 1)
    logger.info(f"📦 rho=1 classification for G_{n}: {len(candidates)} candidates at R={clf.radius}")
    report = ClassificationReport(scope="rho1", n=n, radius=clf.radius)
    report.extend(SolvePool(n_jobs).map(clf.radius_one, candidates.candidates))
    _log_summary(report)
    return report


def classify_g3_1null(radius: Optional[int] = None, budget: Optional[SearchBudget] = None,
                      n_jobs: Optional[int] = None, min_radius: Optional[int] = None,
                      instances: Sequence[Path] = ()) -> ClassificationReport:
    clf = Classifier(3, radius, budget, min_radius, instances)
    pool = SolvePool(n_jobs)
    report = ClassificationReport(scope="g3-1null", n=3, radius=clf.radius)

    rho1 = enumerate_partial(3, 1, 1)
    verdicts = pool.map(clf.radius_one, rho1.candidates)
    for verdict in verdicts:
        verdict.bucket = "radius-1"
    report.extend(verdicts)

    rho2 = enumerate_partial(3, 2, 1)
    logger.info(f"📦 1-null classification for G_3: {len(rho2)} rho=2 candidates at R={clf.radius}")
    for verdicts in pool.map(clf.g3_candidate, rho2.candidates):
        report.extend(verdicts)
    _log_summary(report)
    return report


def classify_g4_2null(c2_values: Sequence[int] = tuple(range(2, 9)), radius: Optional[int] = None,
                      budget: Optional[SearchBudget] = None, n_jobs: Optional[int] = None,
                      min_radius: Optional[int] = None, instances: Sequence[Path] = ()) -> ClassificationReport:
    c2_values = sorted(set(c2_values))
    if not c2_values or c2_values[0] < 2 or c2_values[-1] > 8:
        raise InvalidArgument(f"c2 values must lie in 2..8, got {c2_values}")
    clf = Classifier(4, radius, budget, min_radius, instances)
    report = ClassificationReport(scope="g4-2null", n=4, radius=clf.radius)
    logger.info(f"📦 2-null classification for G_4, c1=1, c2 in {c2_values}, R={clf.radius}")
    for verdicts in SolvePool(n_jobs).map(clf.g4_candidate, c2_values):
        report.extend(verdicts)
    _log_summary(report)
    return report


def _log_summary(report: ClassificationReport):
    counts = {kind.value: len(report.by_kind(kind)) for kind in VerdictKind if report.by_kind(kind)}
    logger.info(f"✅ {report.scope}: {counts}")
    if report.has_timeout:
        logger.warning(f"⚠️ {report.scope}: some candidates are undecided within the budget")
