"""Configuration: defaults read from the environment (.env supported)."""
import os
from dataclasses import dataclass, fields
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

ROOT = Path(__file__).resolve().parents[1]

DEFAULT_R = float(os.getenv("CLIFFORD_R", "0.05"))
DEFAULT_GRID_N = int(os.getenv("CLIFFORD_GRID_N", "64"))
DEFAULT_BACKEND = os.getenv("CLIFFORD_BACKEND", "fourier")
DEFAULT_SCAN_N = int(os.getenv("CLIFFORD_SCAN_N", "4096"))
DEFAULT_BISECTION_TOL = float(os.getenv("CLIFFORD_BISECTION_TOL", "1e-4"))
OUTPUT_DIR = Path(os.getenv("CLIFFORD_OUTPUT_DIR", str(ROOT / "out")))
LOG_LEVEL = os.getenv("CLIFFORD_LOG_LEVEL", "WARNING")

# Chart guard: |t| must stay below pi/4 - CHART_MARGIN
CHART_MARGIN = 1e-12


@dataclass(frozen=True)
class Tolerances:
    """Verdict tolerances, one block for the whole run."""

    geometric: float = 1e-12
    curvature: float = 1e-10
    quadrature: float = 1e-8
    discrete_spectra: float = 1e-2
    ricci_slack: float = 1e-9
    balance: float = 1e-8
    zero_fourier: float = 1e-8
    zero_fd: float = 1e-2
    oracle: float = 1e-4

    @classmethod
    def from_env(cls) -> "Tolerances":
        """Override each field from CLIFFORD_TOL_<FIELD> when set."""
        values = {}
        for f in fields(cls):
            raw = os.getenv(f"CLIFFORD_TOL_{f.name.upper()}")
            if raw:
                values[f.name] = float(raw)
        return cls(**values)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
