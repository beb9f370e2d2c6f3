"""
Search Budget Tracker: bounds every solver run.

Tracks:
- Nodes explored (branching decisions) against a node limit
- Wall-clock seconds against a time limit
- Propagations and maximum search depth (statistics only)

Logs a warning once a run crosses 80% of either limit.
"""
import time
from dataclasses import dataclass, asdict
from typing import Dict, Optional
from loguru import logger

from app.core.config import settings
from app.core.errors import ConfigError


@dataclass(frozen=True)
class SearchBudget:
    """Node and wall-clock limits for one solve."""
    node_limit: int
    time_limit: float  # seconds

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ConfigError(
                f"Budgets must be positive (nodes={self.node_limit}, seconds={self.time_limit})"
            )

    @classmethod
    def default(cls) -> "SearchBudget":
        return cls(node_limit=settings.CRC_NODE_LIMIT, time_limit=settings.CRC_TIME_LIMIT)


@dataclass
class SearchStats:
    """Statistics of one solve."""
    nodes: int = 0
    propagations: int = 0
    max_depth: int = 0
    elapsed: float = 0.0

    def to_dict(self, with_timing: bool = True) -> Dict:
        data = asdict(self)
        if not with_timing:
            data.pop("elapsed")
        return data


class SearchMeter:
    """
    Meters one solver run against its budget.
    
    The clock is only sampled every CLOCK_STRIDE nodes.
    """
    
    WARNING_THRESHOLD = 0.80
    CLOCK_STRIDE = 256
    
    def __init__(self, budget: Optional[SearchBudget] = None, label: str = "solve"):
        self.budget = budget or SearchBudget.default()
        self.label = label
        self.stats = SearchStats()
        self._started = time.monotonic()
        self._warned = False
        self._exhausted = False
    
    def elapsed(self) -> float:
        return time.monotonic() - self._started
    
    def record_node(self, depth: int) -> bool:
        """Count one branching node. Returns False once the budget is spent."""
        stats = self.stats
        stats.nodes += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        
        if stats.nodes >= self.budget.node_limit:
            self._exhausted = True
            return False
        
        if stats.nodes % self.CLOCK_STRIDE == 0:
            seconds = self.elapsed()
            if seconds >= self.budget.time_limit:
                self._exhausted = True
                return False
            self._check_warnings(seconds)
        return True
    
    def _check_warnings(self, seconds: float):
        """Log once at threshold."""
        if self._warned:
            return
        node_pct = self.stats.nodes / self.budget.node_limit
        time_pct = seconds / self.budget.time_limit
        if max(node_pct, time_pct) >= self.WARNING_THRESHOLD:
            self._warned = True
            logger.warning(
                f"⚠️ {self.label}: {node_pct:.0%} of node budget, {time_pct:.0%} of time budget used"
            )
    
    @property
    def exhausted(self) -> bool:
        return self._exhausted
    
    def finish(self) -> SearchStats:
        self.stats.elapsed = self.elapsed()
        return self.stats
    
    def status(self) -> Dict:
        """Current consumption, for progress logging."""
        return {
            "label": self.label,
            "nodes_used": self.stats.nodes,
            "node_limit": self.budget.node_limit,
            "node_pct": f"{self.stats.nodes / self.budget.node_limit:.1%}",
            "elapsed": round(self.elapsed(), 3),
            "time_limit": self.budget.time_limit,
            "exhausted": self._exhausted,
        }
