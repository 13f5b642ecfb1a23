"""Exceptions raised by the toolkit.

Every error derives from CliffordError so the CLI can map it to exit code 2.
Domain errors also derive from ValueError.
"""
from pathlib import Path


class CliffordError(Exception):
    """Base class for toolkit errors."""


class ChartDomainError(CliffordError, ValueError):
    """Raised when t leaves the chart interval (-pi/4, pi/4)."""

    def __init__(self, t: float, margin: float):
        self.t = t
        self.margin = margin
        super().__init__(f"t={t!r} is outside the chart: need |t| < pi/4 - {margin:g}")


class BumpParameterError(CliffordError, ValueError):
    """Raised when the lobe half-width r is not in (0, pi/8) with [-2r, 2r] inside the chart guard."""

    def __init__(self, r: float):
        self.r = r
        super().__init__(f"r={r!r} is outside (0, pi/8) or too close to pi/8 for the chart")


class GridError(CliffordError, ValueError):
    """Bad grid size, or more modes requested than the grid holds."""


class DegenerateMassError(CliffordError):
    """All samples coincide; no balancing transformation exists."""


class NonConvergenceError(CliffordError):
    """The balancing iteration ran out of steps or stalled at the ball boundary."""

    def __init__(self, residual: float, iterations: int, a, clamped: bool = False):
        self.residual = residual
        self.iterations = iterations
        self.a = a
        self.clamped = clamped
        reason = "clamped at the ball boundary" if clamped else "iteration budget exhausted"
        super().__init__(
            f"balance did not converge ({reason}): residual={residual:.3e} after {iterations} iterations"
        )


class UnbalancedMapError(CliffordError):
    """The test map is not balanced to the required residual."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"map is not balanced: residual={residual:.3e} > {tol:.1e}")


class EmptyFeasibleSetError(CliffordError):
    """Even the smallest scanned r fails the Ricci scan."""

    def __init__(self, r: float, min_eigenvalue: float):
        self.r = r
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"no feasible r found: r={r:g} already gives min eigenvalue {min_eigenvalue:.3e}"
        )


class ReportWriteError(CliffordError, OSError):
    """Writing a report or side file failed."""

    def __init__(self, path: Path, cause: Exception):
        self.path = Path(path)
        self.cause = cause
        super().__init__(f"could not write {self.path}: {cause}")


class InputFileError(CliffordError, OSError):
    """Reading a map or weight file failed."""

    def __init__(self, path: Path, cause: Exception):
        self.path = Path(path)
        self.cause = cause
        super().__init__(f"could not read {self.path}: {cause}")
