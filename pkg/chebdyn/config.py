"""Numerical tolerances and environment-driven settings.

Constants are module-level so every module (and every test) reads the same
values. ``load_settings`` is the only place that touches the environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Root finding
ROOT_TOL = 1e-12
ROOT_MAX_ITER = 500
CLUSTER_TOL = 1e-6
MULTIPLE_ROOT_TOL = 1e-7
# Irrational rotation of the starting circle (golden angle, radians)
ROOT_START_ANGLE = 2.399963229728653

# Rational maps
GCD_TOL = 1e-8
SERIES_TOL = 1e-8

# Fixed-point classification
CLASS_TOL = 1e-9
PARABOLIC_MAX_ORDER = 24
FIX_TOL = 1e-8

# Orbits and rendering
EPS_ZERO = 1e-6
R_ESC = 1e6
ESCAPE_CONFIRM = 8
DEFAULT_BUDGET = 5000
POLE_GUARD = 1e-6
PETAL_RADIUS = 100.0
POLE_WINDOW_PX = 3

# Claims
INTERVAL_SAMPLES = 10_000
EXTRANEOUS_N_MAX = 16
VERIFY_N_MAX = 18
ODD_HYPOTHESIS_N_MAX = 15
EVEN_HYPOTHESIS_N_MAX = 16
GN_PROFILE_N_MIN = 8

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Settings:
    """Run-time options read from ``.env`` / the process environment.

    Attributes
    ----------
    threads:
        Render parallelism. ``0`` means one worker per CPU.
    step_logging:
        Write per-run JSON step logs under ``log_dir``.
    log_dir:
        Root directory for step logs.
    """

    threads: int = 0
    step_logging: bool = False
    log_dir: str = "Logs"

    def __post_init__(self) -> None:
        if self.threads < 0:
            raise ValueError(f"CHEBDYN_THREADS must be >= 0, got {self.threads}")

    def worker_count(self) -> int:
        if self.threads:
            return self.threads
        return os.cpu_count() or 1


def load_settings() -> Settings:
    """Load ``.env`` and build a :class:`Settings` from the environment."""

    load_dotenv()

    raw_threads = os.getenv("CHEBDYN_THREADS", "").strip()
    if raw_threads:
        try:
            threads = int(raw_threads)
        except ValueError as exc:
            raise ValueError(f"CHEBDYN_THREADS must be an integer, got '{raw_threads}'") from exc
    else:
        threads = 0

    return Settings(
        threads=threads,
        step_logging=os.getenv("CHEBDYN_STEP_LOGGING", "false").lower() == "true",
        log_dir=os.getenv("CHEBDYN_LOG_DIR", "Logs"),
    )
