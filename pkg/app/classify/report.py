"""
Classification Reports: per-candidate verdicts with the LP runs behind them.

JSON output is deterministic (sorted keys, no wall-clock fields apart from
the timestamp); the text table mirrors a two-column parameters/provenance
listing.
"""
import json
import platform
import sys
from datetime import datetime, timezone
from enum import Enum
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field

from app.core.config import settings


class VerdictKind(str, Enum):
    EXCLUDED = "excluded"
    EXCLUDED_BY_THEOREM = "excluded-by-theorem"
    FEASIBLE = "feasible-not-excluded"
    REALIZED = "realized-by-construction"
    PER_REFERENCE = "realized-per-reference"
    REDUCED = "reduced-to-G1"
    TIMEOUT = "timeout"


# kinds that place a matrix in the parameter table
LISTED_KINDS = (VerdictKind.FEASIBLE, VerdictKind.REALIZED, VerdictKind.PER_REFERENCE)


class LpRecord(BaseModel):
    """One solver run: enough to reproduce it."""
    mode: str
    matrix: str
    n: int
    radius: int
    status: str
    nodes: int = 0
    propagations: int = 0
    max_depth: int = 0
    problem_hash: str = ""


class CandidateVerdict(BaseModel):
    candidate: str                     # partial or full compact text that was examined
    kind: VerdictKind
    matrix: Optional[str] = None       # full matrix the verdict is about
    canonical: Optional[str] = None    # min of matrix and its opposite
    bucket: Optional[str] = None
    construction: Optional[str] = None
    citation: Optional[str] = None
    reduced: Optional[str] = None      # G_1 matrix for reduced-to-G1
    radius: Optional[int] = None       # radius of the deciding run
    runs: List[LpRecord] = Field(default_factory=list)
    note: str = ""

    @property
    def provenance(self) -> str:
        if self.construction:
            return f"{self.kind.value}: {self.construction}"
        if self.citation:
            return f"{self.kind.value}: {self.citation}"
        if self.reduced:
            return f"{self.kind.value}: {self.reduced}"
        if self.radius is not None:
            return f"{self.kind.value} (R={self.radius})"
        return self.kind.value


def environment_metadata() -> Dict[str, str]:
    versions = {}
    for package in ("numpy", "networkx", "pandas", "pydantic", "joblib"):
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return {
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "node_limit": str(settings.CRC_NODE_LIMIT),
        "time_limit": str(settings.CRC_TIME_LIMIT),
        **versions,
    }


class ClassificationReport(BaseModel):
    scope: str
    n: int
    radius: int
    verdicts: List[CandidateVerdict] = Field(default_factory=list)
    environment: Dict[str, str] = Field(default_factory=environment_metadata)
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def extend(self, verdicts: List[CandidateVerdict]):
        self.verdicts.extend(verdicts)

    def by_kind(self, kind: VerdictKind) -> List[CandidateVerdict]:
        return [v for v in self.verdicts if v.kind == kind]

    def buckets(self) -> Dict[str, List[str]]:
        """Listed matrices per proof case, in discovery order."""
        result: Dict[str, List[str]] = {}
        for v in self.verdicts:
            if v.bucket and v.kind in LISTED_KINDS and v.matrix:
                bucket = result.setdefault(v.bucket, [])
                if v.matrix not in bucket:
                    bucket.append(v.matrix)
        return result

    def listed_parameters(self) -> List[str]:
        """Canonical matrices that are realized or not excluded, sorted."""
        return sorted({v.canonical for v in self.verdicts if v.kind in LISTED_KINDS and v.canonical})

    @property
    def has_timeout(self) -> bool:
        return any(v.kind == VerdictKind.TIMEOUT for v in self.verdicts)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "parameters": v.matrix or v.candidate,
                "provenance": v.provenance,
                "case": v.bucket or "",
            }
            for v in self.verdicts
        ]
        return pd.DataFrame(rows, columns=["parameters", "provenance", "case"])

    def to_table(self, listed_only: bool = False) -> str:
        frame = self.to_frame()
        if listed_only:
            mask = [v.kind in LISTED_KINDS for v in self.verdicts]
            frame = frame[mask]
        if frame.empty:
            return "(no verdicts)"
        return frame.to_string(index=False)

    def save(self, path: Optional[Path] = None) -> Path:
        path = Path(path) if path else settings.REPORT_DIR / f"{self.scope}-n{self.n}-R{self.radius}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        logger.info(f"💾 Saved {self.scope} report ({len(self.verdicts)} verdicts) to {path}")
        return path
