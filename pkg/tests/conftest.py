"""
Pytest Configuration for grid code tests.
"""
import pytest
import sys
import os

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.core.budget import SearchBudget
from app.core.config import settings
from app.grid.lattice import ball_graph


def pytest_collection_modifyitems(config, items):
    """Skip slow acceptance runs unless RUN_SLOW=1."""
    if os.environ.get("RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="slow: set RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def mock_settings(monkeypatch, tmp_path):
    """Pin budgets and keep report output inside the test's tmp dir."""
    monkeypatch.setenv("CRC_NODE_LIMIT", "200000")
    monkeypatch.setenv("CRC_TIME_LIMIT", "120")
    monkeypatch.setenv("N_JOBS", "1")
    monkeypatch.setattr(settings, "CRC_NODE_LIMIT", 200_000)
    monkeypatch.setattr(settings, "CRC_TIME_LIMIT", 120.0)
    monkeypatch.setattr(settings, "N_JOBS", 1)
    monkeypatch.setattr(settings, "REPORT_DIR", tmp_path / "reports")


@pytest.fixture
def small_budget():
    """Budget for unit-scale solves."""
    return SearchBudget(node_limit=50_000, time_limit=60.0)


@pytest.fixture
def slow_budget():
    """Budget for acceptance runs."""
    return SearchBudget(node_limit=50_000_000, time_limit=3600.0)


@pytest.fixture(scope="session")
def ball_1_3():
    return ball_graph(1, 3)


@pytest.fixture(scope="session")
def ball_2_3():
    return ball_graph(2, 3)


@pytest.fixture(scope="session")
def ball_3_3():
    return ball_graph(3, 3)


@pytest.fixture(scope="session")
def ball_3_6():
    return ball_graph(3, 6)
