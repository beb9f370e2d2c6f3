"""
Command-line interface.

    gridcrc construct perfect --n 3
    gridcrc verify reports/codes/perfect.json --expected "[0,6|1,5]"
    gridcrc solve --n 3 --partial "[0,6|2,0|0,3]" --mode ge
    gridcrc classify g3-1null --format table
    gridcrc export-opb --n 3 --matrix "[0,6|1,5]" --out perfect.opb
    gridcrc ball --n 3 --radius 6

Exit codes: 0 consistent results, 1 usage or domain error, 2 contradiction
between a claimed and a verified matrix, 3 Timeout present.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from loguru import logger

from app.classify.drivers import classify_g3_1null, classify_g4_2null, classify_rho1
from app.core.budget import SearchBudget
from app.core.config import settings
from app.core.errors import ConfigError, CrcError
from app.grid.codes import load_code, load_words, save_code, verify_periodic
from app.grid.constructions import BUILDERS, build
from app.grid.lattice import ball_graph
from app.grid.matrix import format_compact, parse_compact, parse_partial
from app.lp.opb import export_opb, problem_hash
from app.lp.problem import FeasibilityProblem, Mode, build_lp_full, build_lp_partial
from app.lp.solver import SolveStatus, brute_force, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONTRADICTION = 2
EXIT_TIMEOUT = 3

SCOPES = ("rho1", "g3-1null", "g4-2null")
CLASSIFY_COMMANDS = ("classify",)


class CliParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    n: Optional[int] = None
    radius: int = field(default_factory=lambda: settings.CRC_BALL_RADIUS)
    min_radius: Optional[int] = None
    scope: Optional[str] = None
    mode: Optional[Mode] = None
    node_limit: int = field(default_factory=lambda: settings.CRC_NODE_LIMIT)
    time_limit: float = field(default_factory=lambda: settings.CRC_TIME_LIMIT)
    input: Optional[Path] = None
    output: Optional[Path] = None
    report_format: str = "json"
    n_jobs: int = field(default_factory=lambda: settings.N_JOBS)

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ConfigError(f"Budgets must be positive (nodes={self.node_limit}, seconds={self.time_limit})")
        if self.radius < 2:
            raise ConfigError(f"Ball radius must be >= 2, got {self.radius}")
        if self.min_radius is not None and not 1 <= self.min_radius <= self.radius:
            raise ConfigError(f"--min-radius must lie in 1..{self.radius}, got {self.min_radius}")
        if self.subcommand in CLASSIFY_COMMANDS and self.n is not None and not 1 <= self.n <= 4:
            raise ConfigError(f"Classification supports n in 1..4, got {self.n}")
        if self.n is not None and self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.report_format not in ("json", "table"):
            raise ConfigError(f"Unknown report format {self.report_format!r}")
        if self.n_jobs == 0:
            raise ConfigError("--jobs must be nonzero")

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(self.node_limit, self.time_limit)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = {
            "subcommand": args.command,
            "n": getattr(args, "n", None),
            "min_radius": getattr(args, "min_radius", None),
            "scope": getattr(args, "scope", None),
            "mode": Mode(args.mode) if getattr(args, "mode", None) else None,
            "input": getattr(args, "code", None),
            "output": getattr(args, "out", None),
            "report_format": getattr(args, "format", "json"),
        }
        for name, attr in (("radius", "radius"), ("node_limit", "node_limit"),
                           ("time_limit", "time_limit"), ("n_jobs", "jobs")):
            value = getattr(args, attr, None)
            if value is not None:
                values[name] = value
        return cls(**values)


def setup_logging(verbose: bool = False, quiet: bool = False):
    level = "DEBUG" if verbose else "WARNING" if quiet else settings.LOG_LEVEL
    settings.LOG_LEVEL = level
    logger.remove()
    logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> | {message}")


def _construction_params(args: argparse.Namespace) -> Dict:
    params = {}
    for name in ("n", "t", "k", "p", "q", "source"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if getattr(args, "words", None) is not None:
        params["words"] = load_words(args.words)
    return params


def cmd_construct(args: argparse.Namespace, config: RunConfig) -> int:
    spec, code = build(args.kind, **_construction_params(args))
    verdict = verify_periodic(code, spec.claimed_matrix)
    output = config.output or settings.REPORT_DIR / "codes" / f"{args.kind}.json"
    save_code(code, output, kind=spec.identifier, matrix=spec.claimed_matrix)

    print(f"construction: {spec.identifier}")
    print(f"claimed:      {format_compact(spec.claimed_matrix)}")
    print(f"verified:     {verdict.summary()} (torus {verdict.periods})")
    if not verdict.expected_matches:
        logger.error(f"🚫 {spec.identifier}: claimed and verified matrices differ")
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    code, document = load_code(config.input)
    claim = args.expected or document.matrix
    expected = parse_compact(claim) if claim else None
    verdict = verify_periodic(code, expected)

    print(verdict.summary())
    if verdict.witness is not None:
        w = verdict.witness
        print(f"witness: vertex {w.vertex} (label {w.label}) has counts {w.counts}, expected {w.expected}")
    if expected is not None and not verdict.expected_matches:
        print(f"expected: {claim}")
        print(f"verified: {format_compact(verdict.matrix) if verdict.matrix else 'not a CRC'}")
        return EXIT_CONTRADICTION
    return EXIT_OK


def _problem(args: argparse.Namespace, config: RunConfig) -> FeasibilityProblem:
    if config.n is None:
        raise ConfigError("--n is required")
    ball = ball_graph(config.n, config.radius)
    if args.matrix:
        return build_lp_full(ball, parse_compact(args.matrix, 2 * config.n))
    if not args.partial:
        raise ConfigError("Give --matrix or --partial")
    if config.mode is None or config.mode == Mode.FULL:
        raise ConfigError("--partial needs --mode ge, eq or gt")
    return build_lp_partial(ball, parse_partial(args.partial, 2 * config.n), config.mode)


def cmd_solve(args: argparse.Namespace, config: RunConfig) -> int:
    problem = _problem(args, config)
    result = brute_force(problem) if args.brute_force else solve(problem, config.budget)
    summary = {
        "problem": problem.describe(),
        "problem_hash": problem_hash(problem),
        **result.to_dict(with_timing=True),
    }
    print(json.dumps(summary, indent=2))
    return EXIT_TIMEOUT if result.status == SolveStatus.TIMEOUT else EXIT_OK


def cmd_export_opb(args: argparse.Namespace, config: RunConfig) -> int:
    problem = _problem(args, config)
    text = export_opb(problem, config.output)
    if config.output is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, config: RunConfig) -> int:
    common = dict(radius=config.radius, budget=config.budget, n_jobs=config.n_jobs, min_radius=config.min_radius,
                  instances=args.instance)
    if config.scope == "rho1":
        report = classify_rho1(config.n or 3, **common)
    elif config.scope == "g3-1null":
        report = classify_g3_1null(**common)
    else:
        report = classify_g4_2null(args.c2 or tuple(range(2, 9)), **common)

    if config.output is not None:
        report.save(config.output)
    if config.report_format == "table":
        print(report.to_table())
    else:
        print(report.to_json())
    return EXIT_TIMEOUT if report.has_timeout else EXIT_OK


def cmd_ball(args: argparse.Namespace, config: RunConfig) -> int:
    ball = ball_graph(config.n or 3, config.radius)
    if args.json:
        print(json.dumps(ball.to_json()))
    else:
        interior = int(ball.interior.sum())
        print(f"G_{ball.n} ball of radius {ball.radius}: {len(ball)} vertices, "
              f"{interior} interior, {len(ball) - interior} boundary")
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "classify": cmd_classify,
    "export-opb": cmd_export_opb,
    "ball": cmd_ball,
}


def _add_budget(parser: argparse.ArgumentParser):
    parser.add_argument("--node-limit", type=int, help="Branching nodes per solve")
    parser.add_argument("--time-limit", type=float, help="Seconds per solve")


def _add_problem(parser: argparse.ArgumentParser):
    parser.add_argument("--n", type=int, required=True, help="Grid dimension")
    parser.add_argument("--radius", type=int, help="Ball radius")
    parser.add_argument("--matrix", help='Full matrix, e.g. "[0,6|1,5]"')
    parser.add_argument("--partial", help='Partial matrix, e.g. "[0,6|2,0|0,3]"')
    parser.add_argument("--mode", choices=[m.value for m in Mode if m != Mode.FULL], help="Slack-color mode")
    parser.add_argument("--out", type=Path, help="Output path")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="gridcrc", description="Completely regular codes in the Manhattan grid")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    parser.add_argument("--jobs", type=int, help="Parallel workers for classification (-1 = all cores)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("construct", help="Build a construction and verify its matrix")
    p.add_argument("kind", choices=sorted(BUILDERS))
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int, help="Number of cosets (diameter-union)")
    p.add_argument("--k", type=int, help="Multiplication factor (multiply)")
    p.add_argument("--p", type=int, help="Period (line)")
    p.add_argument("--q", type=int, help="Alphabet or torus size (quotient)")
    p.add_argument("--source", help="Source code name (multiply, ternary, binary, triangular)")
    p.add_argument("--words", type=Path, help="JSON list of residue words (quotient, ternary, binary, triangular)")
    p.add_argument("--out", type=Path, help="Code JSON output path")

    p = sub.add_parser("verify", help="Verify a periodic code file")
    p.add_argument("code", type=Path)
    p.add_argument("--expected", help="Claimed compact matrix")

    p = sub.add_parser("solve", help="Solve one LP instance")
    _add_problem(p)
    _add_budget(p)
    p.add_argument("--brute-force", action="store_true", help="Exhaustive check (<= 24 variables)")

    p = sub.add_parser("classify", help="Run a classification driver")
    p.add_argument("scope", choices=SCOPES)
    p.add_argument("--n", type=int, help="Grid dimension (rho1 only)")
    p.add_argument("--c2", type=int, nargs="+", help="c2 values (g4-2null)")
    p.add_argument("--radius", type=int, help="Ball radius")
    p.add_argument("--min-radius", type=int, help="First radius of the exclusion ladder")
    p.add_argument("--instance", type=Path, action="append", default=[],
                   help="Code JSON realizing a listed matrix (repeatable)")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--out", type=Path, help="Report JSON path")
    _add_budget(p)

    p = sub.add_parser("export-opb", help="Write an LP instance in OPB format")
    _add_problem(p)

    p = sub.add_parser("ball", help="Ball subgraph statistics")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--radius", type=int)
    p.add_argument("--json", action="store_true", help="Print the graph as JSON")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    try:
        config = RunConfig.from_args(args)
        return COMMANDS[args.command](args, config)
    except CrcError as e:
        logger.error(f"🚫 {e.code.name}: {e}")
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        logger.error(f"🚫 {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
