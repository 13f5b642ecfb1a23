"""Bump function zeta and the conformal profile w with w'' = zeta.

zeta is even, equals 1 - S(t/r) on [0, r] (S the quintic smootherstep), the
negative lobe -A * 140 (u(1-u))^3 with u = (t - r)/r on [r, 2r], and 0 beyond.
The positive lobe integrates to r/2 and the negative lobe to -A r, so A = 1/2
gives a zero mean on [0, 2r]. Both joins are C^2.

w and w' are exact polynomial antiderivatives on each piece, so no quadrature
enters any curvature formula downstream.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial

from .errors import BumpParameterError
from .settings import CHART_MARGIN

logger = logging.getLogger(__name__)

R_MAX = math.pi / 8
T_END = math.pi / 4
# largest accepted r: the support [-2r, 2r] must stay inside the chart guard
R_LIMIT = (T_END - CHART_MARGIN) / 2

SMOOTHERSTEP = Polynomial([0.0, 0.0, 0.0, 10.0, -15.0, 6.0])
_BETA = Polynomial([0.0, 1.0, -1.0]) ** 3

# Shapes in the local variable s in [0, 1].
POSITIVE_SHAPES = {"smootherstep": 1.0 - SMOOTHERSTEP}
# Negative lobes have unit integral; the amplitude carries the sign.
NEGATIVE_SHAPES = {"beta4": 140.0 * _BETA}


@dataclass(frozen=True)
class BumpSpec:
    r: float
    positive_shape: str = "smootherstep"
    negative_shape: str = "beta4"
    amplitude: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.r < R_LIMIT):
            raise BumpParameterError(self.r)
        if self.positive_shape not in POSITIVE_SHAPES:
            raise ValueError(f"unknown positive lobe shape {self.positive_shape!r}")
        if self.negative_shape not in NEGATIVE_SHAPES:
            raise ValueError(f"unknown negative lobe shape {self.negative_shape!r}")


@dataclass(frozen=True)
class _Piece:
    """One polynomial piece on [t0, t0 + r] in the local variable u = (t - t0) / r."""

    t0: float
    r: float
    zeta: Polynomial
    w1: Polynomial
    w0: Polynomial


@dataclass(frozen=True)
class ConformalProfile:
    """w, w', w'' for the metric e^{2w} g; w is even and w' is odd."""

    bump: BumpSpec | None
    pieces: tuple = field(default=(), repr=False)
    offset: float = 0.0

    @property
    def support(self) -> float:
        if not self.pieces:
            return 0.0
        last = self.pieces[-1]
        return last.t0 + last.r

    def _tail_values(self):
        """(w, w') at the end of the last piece."""
        if not self.pieces:
            return self.offset, 0.0
        last = self.pieces[-1]
        return self.offset + float(last.w0(1.0)), float(last.w1(1.0))

    def _evaluate(self, t, which: str):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        shape = t.shape
        t = np.atleast_1d(t)
        a = np.abs(t)
        out = np.zeros_like(a)
        for piece in self.pieces:
            mask = (a >= piece.t0) & (a <= piece.t0 + piece.r)
            if not np.any(mask):
                continue
            u = (a[mask] - piece.t0) / piece.r
            if which == "zeta":
                out[mask] = piece.zeta(u)
            elif which == "zeta1":
                out[mask] = piece.zeta.deriv()(u) / piece.r
            elif which == "w1":
                out[mask] = piece.w1(u)
            else:
                out[mask] = self.offset + piece.w0(u)
        tail = a > self.support
        if np.any(tail):
            w_end, w1_end = self._tail_values()
            if which == "w1":
                out[tail] = w1_end
            elif which == "w":
                out[tail] = w_end + w1_end * (a[tail] - self.support)
        if not self.pieces and which == "w":
            out[:] = self.offset
        if which in ("w1", "zeta1"):
            out = np.where(t < 0, -out, out)
        if scalar:
            return float(out[0])
        return out.reshape(shape)

    def zeta(self, t):
        return self._evaluate(t, "zeta")

    def zeta_prime(self, t):
        return self._evaluate(t, "zeta1")

    def w(self, t):
        return self._evaluate(t, "w")

    def w1(self, t):
        return self._evaluate(t, "w1")

    def w2(self, t):
        return self.zeta(t)


def make_bump(r: float) -> BumpSpec:
    """Standard bump: smootherstep positive lobe, beta(4,4) negative lobe, A = 1/2."""
    bump = BumpSpec(r=float(r))
    logger.debug("bump r=%g A=%g", bump.r, bump.amplitude)
    return bump


def profile(b: BumpSpec) -> ConformalProfile:
    """Double antiderivative of zeta, piece by piece (w(0) = w'(0) = 0)."""
    r = b.r
    lobes = [
        POSITIVE_SHAPES[b.positive_shape],
        -b.amplitude * NEGATIVE_SHAPES[b.negative_shape],
    ]
    pieces = []
    w_start, w1_start = 0.0, 0.0
    for k, zeta in enumerate(lobes):
        # d/dt = (1/r) d/du
        w1 = w1_start + r * zeta.integ()
        w0 = w_start + r * w1.integ()
        pieces.append(_Piece(t0=k * r, r=r, zeta=zeta, w1=w1, w0=w0))
        w_start, w1_start = float(w0(1.0)), float(w1(1.0))
    return ConformalProfile(bump=b, pieces=tuple(pieces))


def zero_profile() -> ConformalProfile:
    """Degenerate control w = 0 (zeta = 0)."""
    return ConformalProfile(bump=None)


def constant_profile(c: float) -> ConformalProfile:
    """w = c everywhere; the metric is a constant multiple of the round one."""
    return ConformalProfile(bump=None, offset=float(c))


def tail_constant(p: ConformalProfile) -> float:
    """C = e^{2 w(2r)}, the scale of the metric beyond the bump support."""
    return math.exp(2.0 * float(p.w(p.support)))


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ConditionReport:
    r: float
    tol: float
    results: tuple

    @property
    def passed(self) -> bool:
        return all(res.passed for res in self.results)

    def __getitem__(self, name: str) -> ConditionResult:
        for res in self.results:
            if res.name == name:
                return res
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {res.name: {"passed": res.passed, "residual": res.residual} for res in self.results}


def verify_conditions(b: BumpSpec, tol: float = 1e-12, n: int = 4001) -> ConditionReport:
    """Check zeta and w against the construction requirements on a dense grid."""
    p = profile(b)
    r = b.r
    s = np.linspace(0.0, 1.0, n)[1:-1]
    inner_pos = r * s
    inner_neg = r + r * s
    tail = np.linspace(2.0 * r, T_END, n, endpoint=False)
    full = np.linspace(-T_END, T_END, 2 * n + 1)[1:-1]

    checks = {
        "i_zeta_at_0": abs(p.zeta(0.0) - 1.0),
        "i_decreasing": max(0.0, float(np.max(p.zeta_prime(inner_pos)))),
        "i_zeta_at_r": abs(p.zeta(r)),
        "ii_negative_lobe": max(0.0, float(np.max(p.zeta(inner_neg)))),
        "iii_zero_tail": float(np.max(np.abs(p.zeta(tail)))),
        # exact: w'(2r) is the integral of zeta over [0, 2r]
        "iv_zero_mean": abs(p.w1(2.0 * r)),
        "even": float(np.max(np.abs(p.zeta(full) - p.zeta(-full)))),
        "zeta_le_1": max(0.0, float(np.max(p.zeta(full))) - 1.0),
        "w1_bound": max(0.0, float(np.max(np.abs(p.w1(full)))) - r),
        "w2_le_1": max(0.0, float(np.max(p.w2(full))) - 1.0),
        "sign_sin2t_w1": max(0.0, -float(np.min(np.sin(2.0 * full) * p.w1(full)))),
    }
    # strict decrease means zeta' < 0 at interior points, not just <= tol
    strict = float(np.max(p.zeta_prime(inner_pos))) < 0.0
    results = []
    for name, residual in checks.items():
        passed = residual <= tol
        if name == "i_decreasing":
            passed = passed and strict
        results.append(ConditionResult(name=name, passed=passed, residual=float(residual)))
    report = ConditionReport(r=r, tol=tol, results=tuple(results))
    if not report.passed:
        failed = [res.name for res in results if not res.passed]
        logger.warning("bump r=%g fails %s", r, ", ".join(failed))
    return report


def profile_table(p: ConformalProfile, n: int = 801) -> pd.DataFrame:
    """Columns t, zeta, w, w1, w2 on a symmetric grid of the chart interval."""
    t = np.linspace(-T_END, T_END, n + 2)[1:-1]
    return pd.DataFrame(
        {"t": t, "zeta": p.zeta(t), "w": p.w(t), "w1": p.w1(t), "w2": p.w2(t)}
    )
