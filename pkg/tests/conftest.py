import os
from pathlib import Path

import hypothesis
import pytest

from src.grid import Grid
from src.scarf2 import ScarfModel

hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=50, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=300, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def model() -> ScarfModel:
    """v1=24, v2=18: p=3, q=1, levels -16, -9, -4, -1."""
    return ScarfModel.from_couplings(24.0, 18.0)


@pytest.fixture(scope="session")
def broken_model() -> ScarfModel:
    return ScarfModel.from_couplings(6.0, 8.0)


@pytest.fixture(scope="session")
def fd_grid() -> Grid:
    return Grid(12.0, 1201)


@pytest.fixture(scope="session")
def broken_grid() -> Grid:
    return Grid(30.0, 1201)


@pytest.fixture
def isolated_logs(tmp_path, monkeypatch):
    log_dir = tmp_path / "logs"
    monkeypatch.setenv("SCARF_LOG_DIR", str(log_dir))
    return log_dir
