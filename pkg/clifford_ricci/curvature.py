"""Ricci tensor of e^{2w} g in the chart frame (d/dt, d/dtheta, d/dphi).

With Ric = 2g for the round metric, the conformal change gives

    Ric(dt, dt)         = 2 (1 - w'') + 2 tan(2t) w'
    Ric(dth, dth)       = (1 + sin 2t) B - w' cos 2t
    Ric(dph, dph)       = (1 - sin 2t) B + w' cos 2t
    B                   = 2 - w'' + 2 tan(2t) w' - w'^2

and every mixed component vanishes. Dividing by the diagonal of e^{2w} g gives
the eigenvalues that are scanned for nonnegativity.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .chart import T_LIMIT, check_t
from .conformal_profile import R_MAX, ConformalProfile, make_bump, profile, tail_constant
from .errors import EmptyFeasibleSetError

logger = logging.getLogger(__name__)

DIRECTIONS = ("t", "theta", "phi")


@dataclass(frozen=True)
class RicciDiagonal:
    t: float
    R_tt: float
    R_thth: float
    R_phph: float
    lam_t: float
    lam_th: float
    lam_ph: float

    @property
    def components(self) -> tuple:
        return (self.R_tt, self.R_thth, self.R_phph)

    @property
    def eigenvalues(self) -> tuple:
        return (self.lam_t, self.lam_th, self.lam_ph)


def hessian_diag(p: ConformalProfile, t: float) -> tuple:
    """Diagonal of the round-metric Hessian of w; mixed components are zero."""
    check_t(t)
    w1 = p.w1(t)
    c2 = math.cos(2.0 * t)
    return (p.w2(t), w1 * c2, -w1 * c2)


def laplacian_w(p: ConformalProfile, t: float) -> float:
    check_t(t)
    return p.w2(t) - 2.0 * math.tan(2.0 * t) * p.w1(t)


def ricci_arrays(p: ConformalProfile, t) -> tuple:
    """Vectorized (R_tt, R_thth, R_phph, lam_t, lam_th, lam_ph) at the given t."""
    check_t(t)
    t = np.asarray(t, dtype=float)
    w, w1, w2 = p.w(t), p.w1(t), p.w2(t)
    c2, tan2 = np.cos(2.0 * t), np.tan(2.0 * t)
    # 1 +- sin 2t without cancellation near |t| = pi/4
    a2 = 2.0 * np.sin(t + T_LIMIT) ** 2
    b2 = 2.0 * np.cos(t + T_LIMIT) ** 2
    bracket = 2.0 - w2 + 2.0 * tan2 * w1 - w1 * w1
    r_tt = 2.0 * (1.0 - w2) + 2.0 * tan2 * w1
    r_thth = a2 * bracket - w1 * c2
    r_phph = b2 * bracket + w1 * c2
    scale = np.exp(2.0 * w)
    return (
        r_tt,
        r_thth,
        r_phph,
        r_tt / scale,
        (bracket - w1 * c2 / a2) / scale,
        (bracket + w1 * c2 / b2) / scale,
    )


def ricci_diag(p: ConformalProfile, t: float) -> RicciDiagonal:
    values = ricci_arrays(p, float(t))
    return RicciDiagonal(float(t), *(float(v) for v in values))


@dataclass(frozen=True)
class ScanResult:
    r: float | None
    n: int
    min_eigenvalue: float
    argmin_t: float
    direction: str
    tail_constant: float
    tail_min_eigenvalue: float

    def feasible(self, slack: float = 1e-9) -> bool:
        return self.min_eigenvalue >= -slack and self.tail_min_eigenvalue > 0.0


def _scan_span(p: ConformalProfile) -> float:
    # profiles without a bump have no tail; scan most of the chart instead
    return p.support if p.support > 0.0 else T_LIMIT - 1e-3


def scan_nonnegativity(p: ConformalProfile, n: int = 4096) -> ScanResult:
    """Minimum normalized Ricci eigenvalue on a uniform grid of [-2r, 2r].

    Beyond 2r the metric is C g with C constant, so Ric = 2g there and the
    normalized eigenvalues equal 2/C exactly.
    """
    if n < 64:
        raise ValueError(f"grid resolution {n} is below 64")
    span = _scan_span(p)
    t = np.linspace(-span, span, n)
    lams = np.stack(ricci_arrays(p, t)[3:], axis=0)
    # argmin over the flattened (direction, t) array is deterministic
    flat = int(np.argmin(lams))
    k, i = divmod(flat, n)
    c = tail_constant(p)
    result = ScanResult(
        r=p.bump.r if p.bump is not None else None,
        n=n,
        min_eigenvalue=float(lams[k, i]),
        argmin_t=float(t[i]),
        direction=DIRECTIONS[k],
        tail_constant=c,
        tail_min_eigenvalue=2.0 / c,
    )
    logger.debug("scan r=%s min=%.3e at t=%.6f (%s)", result.r, result.min_eigenvalue, result.argmin_t, result.direction)
    return result


@dataclass(frozen=True)
class FeasibleRadius:
    r: float
    lower: float
    upper: float
    hit_domain_bound: bool
    min_eigenvalue: float
    half_feasible: bool
    evaluations: int


def max_feasible_r(
    n: int = 4096,
    tol: float = 1e-4,
    slack: float = 1e-9,
    r_min: float = 1e-4,
    steps: int = 32,
    top_gap: float = 1e-3,
) -> FeasibleRadius:
    """Largest scanned r whose Ricci scan stays above -slack.

    The scan descends from pi/8 (1 - top_gap) and stops at the first feasible r;
    the bracket [lower, upper] around that sign change is then bisected to tol.
    Feasibility is not assumed monotone in r: only the first change seen from
    above is bracketed. If the top of the scan is already feasible, upper is the
    domain bound pi/8. Closer to pi/8 the support end 2r reaches the chart
    boundary, where rounding in w'(2r) is amplified by the degenerating metric.
    """
    if tol <= 0.0:
        raise ValueError("bisection tol must be positive")

    evaluations = 0

    def scan(r: float) -> ScanResult:
        nonlocal evaluations
        evaluations += 1
        return scan_nonnegativity(profile(make_bump(r)), n)

    r_top = R_MAX * (1.0 - top_gap)
    candidates = np.linspace(r_top, r_min, steps)
    upper = R_MAX
    lower = None
    lower_scan = None
    for r in candidates:
        res = scan(float(r))
        if res.feasible(slack):
            lower, lower_scan = float(r), res
            break
        upper = float(r)
    if lower is None:
        raise EmptyFeasibleSetError(r_min, res.min_eigenvalue)

    hit_bound = upper == R_MAX
    if not hit_bound:
        while upper - lower > tol:
            mid = 0.5 * (lower + upper)
            res = scan(mid)
            if res.feasible(slack):
                lower, lower_scan = mid, res
            else:
                upper = mid

    half_feasible = scan(0.5 * lower).feasible(slack)
    logger.info(
        "max feasible r=%.6f bracket=[%.6f, %.6f] domain bound=%s",
        lower, lower, upper, hit_bound,
    )
    return FeasibleRadius(
        r=lower,
        lower=lower,
        upper=upper,
        hit_domain_bound=hit_bound,
        min_eigenvalue=lower_scan.min_eigenvalue,
        half_feasible=half_feasible,
        evaluations=evaluations,
    )


def vanishing_directions(p: ConformalProfile, tol: float = 1e-12, n: int = 2049) -> list[tuple]:
    """(t, direction) pairs on an odd grid (so t = 0 is a node) where an eigenvalue is within tol of 0."""
    if n % 2 == 0:
        n += 1
    span = _scan_span(p)
    t = np.linspace(-span, span, n)
    t[n // 2] = 0.0
    lams = ricci_arrays(p, t)[3:]
    hits = []
    for direction, lam in zip(DIRECTIONS, lams):
        for i in np.flatnonzero(np.abs(lam) <= tol):
            hits.append((float(t[i]), direction))
    return sorted(hits)


def ricci_table(p: ConformalProfile, n: int = 801) -> pd.DataFrame:
    """Columns t, lam_t, lam_th, lam_ph over [-2r, 2r]."""
    span = _scan_span(p)
    t = np.linspace(-span, span, n)
    _, _, _, lam_t, lam_th, lam_ph = ricci_arrays(p, t)
    return pd.DataFrame({"t": t, "lam_t": lam_t, "lam_th": lam_th, "lam_ph": lam_ph})
