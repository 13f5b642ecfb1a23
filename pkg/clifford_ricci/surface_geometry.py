"""Parallel tori Phi(., ., t) under the round metric g and the perturbed metric e^{2w} g.

Conventions: the unit normal is +d/dt and the second fundamental form is
(1/2) d/dt of the induced metric. For the round metric this gives
kappa = (cot(t + pi/4), -tan(t + pi/4)), so (1, -1) on the Clifford torus and
H = -tan 2t. Only H^2, |sigma|^2 and kappa1 kappa2 are used downstream.

Under the conformal change the unit normal becomes e^{-w} d/dt and

    kappa_bar_i = e^{-w} (kappa_i + w'(t)).

On the Clifford torus w(0) = 0, so this agrees with the e^{-2w} form of the
law; away from t = 0 only the e^{-w} form keeps (kappa1 - kappa2)^2 dA invariant.
"""
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

from .chart import T_LIMIT, check_t
from .conformal_profile import ConformalProfile
from .spectral import TorusGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorusGeometry:
    t: float
    metric: str
    kappa1: float
    kappa2: float
    H: float
    sigma2: float
    area_density: float
    K: float
    Ks: float

    def as_dict(self) -> dict:
        return asdict(self)


def parallel_torus_round(t: float) -> TorusGeometry:
    check_t(t)
    kappa1 = 1.0 / math.tan(t + T_LIMIT)
    kappa2 = -math.tan(t + T_LIMIT)
    return TorusGeometry(
        t=float(t),
        metric="round",
        kappa1=kappa1,
        kappa2=kappa2,
        H=0.5 * (kappa1 + kappa2),
        sigma2=kappa1**2 + kappa2**2,
        area_density=math.cos(2.0 * t),
        # the induced metric has constant coefficients, hence is flat
        K=0.0,
        Ks=1.0,
    )


def conformal_principal(p: ConformalProfile, t: float, base: TorusGeometry) -> TorusGeometry:
    """Geometry of the same torus for e^{2w} g, from the round geometry at t."""
    if base.metric != "round" or base.t != t:
        raise ValueError("base geometry must be the round torus at the same t")
    w = float(p.w(t))
    w1 = float(p.w1(t))
    scale = math.exp(-w)
    kappa1 = scale * (base.kappa1 + w1)
    kappa2 = scale * (base.kappa2 + w1)
    K = 0.0
    return TorusGeometry(
        t=float(t),
        metric="perturbed",
        kappa1=kappa1,
        kappa2=kappa2,
        H=0.5 * (kappa1 + kappa2),
        sigma2=kappa1**2 + kappa2**2,
        area_density=math.exp(2.0 * w) * base.area_density,
        K=K,
        Ks=K - kappa1 * kappa2,
    )


def torus_geometry(p: ConformalProfile | None, t: float) -> TorusGeometry:
    base = parallel_torus_round(t)
    return base if p is None else conformal_principal(p, t, base)


def gauss_residual(geom: TorusGeometry) -> float:
    """| |sigma|^2 - (4H^2 + 2Ks - 2K) |"""
    return abs(geom.sigma2 - (4.0 * geom.H**2 + 2.0 * geom.Ks - 2.0 * geom.K))


def gauss_bonnet_integral(geom: TorusGeometry, grid: TorusGrid) -> float:
    """int K dA over the torus; 2 pi chi = 0."""
    return grid.integrate(np.full((grid.n, grid.n), geom.K * geom.area_density))


def willmore(p: ConformalProfile | None, t: float, grid: TorusGrid | int = 128) -> float:
    """int (H^2 + Ks) dA over the parallel torus at t, by periodic trapezoidal quadrature."""
    if isinstance(grid, int):
        grid = TorusGrid(grid)
    geom = torus_geometry(p, t)
    density = (geom.H**2 + geom.Ks) * geom.area_density
    return grid.integrate(np.full((grid.n, grid.n), density))


def willmore_round_closed_form(t: float) -> float:
    check_t(t)
    return 2.0 * math.pi**2 / math.cos(2.0 * t)


def conformal_density_residual(p: ConformalProfile, t: float) -> float:
    """| (kbar1 - kbar2)^2 dAbar - (k1 - k2)^2 dA | per unit dtheta dphi."""
    base = parallel_torus_round(t)
    pert = conformal_principal(p, t, base)
    before = (base.kappa1 - base.kappa2) ** 2 * base.area_density
    after = (pert.kappa1 - pert.kappa2) ** 2 * pert.area_density
    return abs(after - before)


def willmore_pairs(p: ConformalProfile, ts, grid: TorusGrid | int = 128) -> list[dict]:
    """Round and perturbed Willmore values with relative gap at each t."""
    pairs = []
    for t in ts:
        w_round = willmore(None, t, grid)
        w_pert = willmore(p, t, grid)
        pairs.append(
            {
                "t": float(t),
                "round": w_round,
                "perturbed": w_pert,
                "relative_gap": abs(w_pert - w_round) / w_round,
                "closed_form_gap": abs(w_round - willmore_round_closed_form(t)),
            }
        )
    return pairs


def torus_table(p: ConformalProfile, ts, grid: TorusGrid | int = 128) -> pd.DataFrame:
    """Columns t, metric, kappa1, kappa2, H, sigma2, W for both metrics."""
    rows = []
    for t in ts:
        for prof in (None, p):
            geom = torus_geometry(prof, t)
            rows.append(
                {
                    "t": geom.t,
                    "metric": geom.metric,
                    "kappa1": geom.kappa1,
                    "kappa2": geom.kappa2,
                    "H": geom.H,
                    "sigma2": geom.sigma2,
                    "W": willmore(prof, t, grid),
                }
            )
    return pd.DataFrame(rows)
