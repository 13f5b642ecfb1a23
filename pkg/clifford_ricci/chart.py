"""Clifford coordinate chart on S^3 minus the two circles z1 = 0 and z2 = 0.

Phi(theta, phi, t) = sin(t + pi/4) (cos sqrt2 theta, sin sqrt2 theta, 0, 0)
                   + cos(t + pi/4) (0, 0, cos sqrt2 phi, sin sqrt2 phi)

The round metric reads (1 + sin 2t) dtheta^2 + (1 - sin 2t) dphi^2 + dt^2.
At t = 0 this is the Clifford torus |z1|^2 = |z2|^2 = 1/2, a flat square torus of
side sqrt(2) pi. (The value 1/sqrt(2) sometimes quoted for |z_i|^2 contradicts
|z1|^2 + |z2|^2 = 1; the chart is taken as ground truth.)
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ChartDomainError
from .settings import CHART_MARGIN

SQRT2 = math.sqrt(2.0)
PERIOD = SQRT2 * math.pi
T_LIMIT = math.pi / 4


def check_t(t, margin: float = CHART_MARGIN) -> None:
    """Raise ChartDomainError unless every |t| < pi/4 - margin."""
    t_arr = np.asarray(t, dtype=float)
    bad = ~(np.abs(t_arr) < T_LIMIT - margin)
    if np.any(bad):
        first = float(t_arr[bad].flat[0]) if t_arr.ndim else float(t_arr)
        raise ChartDomainError(first, margin)


@dataclass(frozen=True)
class ChartPoint:
    theta: float
    phi: float
    t: float

    def __post_init__(self):
        check_t(self.t)
        object.__setattr__(self, "theta", math.fmod(self.theta, PERIOD) % PERIOD)
        object.__setattr__(self, "phi", math.fmod(self.phi, PERIOD) % PERIOD)


@dataclass(frozen=True)
class RoundMetricCoeffs:
    a2: float
    b2: float
    c2: float = 1.0


def embed_array(theta, phi, t) -> np.ndarray:
    """Vectorized Phi; returns an array of shape broadcast(theta, phi, t) + (4,)."""
    check_t(t)
    theta, phi, t = np.broadcast_arrays(
        np.asarray(theta, float), np.asarray(phi, float), np.asarray(t, float)
    )
    s = np.sin(t + T_LIMIT)
    c = np.cos(t + T_LIMIT)
    return np.stack(
        [
            s * np.cos(SQRT2 * theta),
            s * np.sin(SQRT2 * theta),
            c * np.cos(SQRT2 * phi),
            c * np.sin(SQRT2 * phi),
        ],
        axis=-1,
    )


def embed(p: ChartPoint) -> np.ndarray:
    """Unit vector of R^4 for a chart point."""
    return embed_array(p.theta, p.phi, p.t)


def embed_jacobian(theta: float, phi: float, t: float) -> np.ndarray:
    """4x3 Jacobian of Phi with columns (d/dt, d/dtheta, d/dphi)."""
    check_t(t)
    s = math.sin(t + T_LIMIT)
    c = math.cos(t + T_LIMIT)
    ct, st = math.cos(SQRT2 * theta), math.sin(SQRT2 * theta)
    cp, sp = math.cos(SQRT2 * phi), math.sin(SQRT2 * phi)
    return np.array(
        [
            [c * ct, -SQRT2 * s * st, 0.0],
            [c * st, SQRT2 * s * ct, 0.0],
            [-s * cp, 0.0, -SQRT2 * c * sp],
            [-s * sp, 0.0, SQRT2 * c * cp],
        ]
    )


def round_metric_coeffs(t: float) -> RoundMetricCoeffs:
    check_t(t)
    s2 = math.sin(2.0 * t)
    return RoundMetricCoeffs(a2=1.0 + s2, b2=1.0 - s2, c2=1.0)


def clifford_point(theta, phi) -> np.ndarray:
    """Point of the Clifford torus, i.e. embed at t = 0."""
    return embed_array(theta, phi, 0.0)


def pullback_metric_fd(theta: float, phi: float, t: float, h: float = 1e-4) -> np.ndarray:
    """Pullback of the Euclidean metric by Phi with central differences, order (t, theta, phi)."""
    x0 = np.array([t, theta, phi], dtype=float)
    cols = []
    for k in range(3):
        dx = np.zeros(3)
        dx[k] = h
        plus = embed_array(x0[1] + dx[1], x0[2] + dx[2], x0[0] + dx[0])
        minus = embed_array(x0[1] - dx[1], x0[2] - dx[2], x0[0] - dx[0])
        cols.append((plus - minus) / (2.0 * h))
    jac = np.stack(cols, axis=-1)
    return jac.T @ jac
