"""
OPB (pseudo-Boolean competition format) export and import.

Variables are written x1..xN (1-based). "<=" constraints are negated into
">=" form; anchors become unit equalities.
"""
import hashlib
import re
from pathlib import Path
from typing import List, Optional, Tuple

from loguru import logger

from app.core.errors import InvalidArgument
from app.lp.problem import FeasibilityProblem, LinearConstraint, Relation

_TERM = re.compile(r"([+-]?\d+)\s+x(\d+)")


def _term_text(terms: Tuple[Tuple[int, int], ...], sign: int) -> str:
    return " ".join(f"{sign * coef:+d} x{var + 1}" for var, coef in terms)


def opb_lines(problem: FeasibilityProblem) -> List[str]:
    rows = []
    for c in problem.constraints:
        if c.relation == Relation.LE:
            rows.append(f"{_term_text(c.terms, -1)} >= {-c.bound} ;")
        else:
            rows.append(f"{_term_text(c.terms, 1)} {c.relation.value} {c.bound} ;")
    for var, value in problem.anchors:
        rows.append(f"+1 x{var + 1} = {value} ;")

    header = [f"* #variable= {problem.num_vars} #constraint= {len(rows)}"]
    if problem.matrix:
        header.append(
            f"* {problem.mode.value} {problem.matrix} n={problem.n} R={problem.radius} colors={problem.num_colors}"
        )
    return header + rows


def export_opb(problem: FeasibilityProblem, path: Optional[Path] = None) -> str:
    text = "\n".join(opb_lines(problem)) + "\n"
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"💾 Wrote OPB ({problem.num_vars} vars) to {path}")
    return text


def problem_hash(problem: FeasibilityProblem) -> str:
    return hashlib.sha256(export_opb(problem).encode()).hexdigest()


def parse_opb(text: str) -> FeasibilityProblem:
    """Read a feasibility-only OPB instance into a plain (ungrouped) problem."""
    constraints = []
    declared = None
    highest = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("*"):
            match = re.search(r"#variable=\s*(\d+)", line)
            if match:
                declared = int(match.group(1))
            continue
        if line.startswith(("min:", "max:")):
            raise InvalidArgument(f"Line {lineno}: objectives are not supported")
        if not line.endswith(";"):
            raise InvalidArgument(f"Line {lineno}: missing ';'")

        match = re.fullmatch(r"(.*?)(>=|<=|=)\s*([+-]?\d+)\s*;", line)
        if not match:
            raise InvalidArgument(f"Line {lineno}: cannot parse {line!r}")
        lhs, op, rhs = match.groups()
        terms = tuple((int(var) - 1, int(coef)) for coef, var in _TERM.findall(lhs))
        if not terms or _TERM.sub("", lhs).strip():
            raise InvalidArgument(f"Line {lineno}: malformed terms in {line!r}")
        highest = max(highest, max(var + 1 for var, _ in terms))
        constraints.append(LinearConstraint(terms, Relation(op), int(rhs), f"line {lineno}"))

    num_vars = declared if declared is not None else highest
    if highest > num_vars:
        raise InvalidArgument(f"Variable x{highest} exceeds #variable= {num_vars}")
    return FeasibilityProblem(num_vars, tuple(constraints))
