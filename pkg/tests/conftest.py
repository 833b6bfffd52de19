"""Shared fixtures for the chebdyn test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from chebdyn.maps import build_cn  # noqa: E402


@pytest.fixture(autouse=True)
def quiet_environment(monkeypatch, tmp_path):
    """No step logs and a fixed thread count unless a test asks otherwise."""
    monkeypatch.setenv("CHEBDYN_STEP_LOGGING", "false")
    monkeypatch.setenv("CHEBDYN_THREADS", "2")
    monkeypatch.setenv("CHEBDYN_LOG_DIR", str(tmp_path / "Logs"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def cn_maps():
    return {n: build_cn(n) for n in range(1, 17)}
