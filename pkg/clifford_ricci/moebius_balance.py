"""Conformal dilations of S^n and Hersch balancing of sphere-valued maps.

The dilation with parameter a (|a| < 1) attracts towards p = a/|a| and repels
from -p: project stereographically from -p onto the hyperplane p^perp, scale by
(1 - |a|)/(1 + |a|), project back. a = 0 is the identity.

Balancing looks for a with sum_i rho_i T_a(x_i) = 0 (weighted center of mass at
the origin). Near a = 0 the center of mass moves like G(0) + 2 (I - M) a, with
M the second-moment matrix of the samples, so the damped step a <- a - eta G(a)
contracts for eta <= 1/2.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft, linalg

from .chart import clifford_point
from .errors import DegenerateMassError, NonConvergenceError
from .spectral import TorusGrid

logger = logging.getLogger(__name__)

BALL_MARGIN = 1e-12
# below this 1 + <x, pole> the point is taken to be the repelling pole; y^2 stays finite
POLE_GAP = 1e-200
MIN_STEP = 1e-8


@dataclass(frozen=True)
class MobiusParam:
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        norm = float(np.linalg.norm(a))
        if not norm < 1.0:
            raise ValueError(f"|a| = {norm} must be < 1")
        object.__setattr__(self, "a", clamp_ball(a))

    @classmethod
    def identity(cls, dim: int) -> "MobiusParam":
        return cls(np.zeros(dim))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.a))


@dataclass(frozen=True)
class BalanceProblem:
    """Values of the map at quadrature nodes and their weights rho dA."""

    samples: np.ndarray
    weights: np.ndarray
    grid: TorusGrid | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        flat = samples.reshape(-1, samples.shape[-1])
        if np.max(np.abs(np.linalg.norm(flat, axis=-1) - 1.0)) > 1e-12:
            raise ValueError("every sample must be a unit vector")
        if weights.shape != samples.shape[:-1] or np.any(weights <= 0.0):
            raise ValueError("weights must be positive with one weight per sample")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.samples.shape[-1]


@dataclass(frozen=True)
class BalanceResult:
    param: MobiusParam
    residual: float
    iterations: int
    history: list = field(default_factory=list, repr=False)
    newton_steps: int = 0
    clamped: bool = False

    def as_dict(self) -> dict:
        return {
            "a": [float(v) for v in self.param.a],
            "residual": self.residual,
            "iterations": self.iterations,
            "newton_steps": self.newton_steps,
            "clamped": self.clamped,
        }


def clamp_ball(a: np.ndarray, margin: float = BALL_MARGIN) -> np.ndarray:
    norm = float(np.linalg.norm(a))
    limit = 1.0 - margin
    if norm > limit:
        return a * (limit / norm)
    return a


def _outside_ball(a: np.ndarray, margin: float = BALL_MARGIN) -> bool:
    return bool(np.linalg.norm(a) > 1.0 - margin)


def _dilate(a: np.ndarray, x: np.ndarray, factor_power: float) -> np.ndarray:
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return np.array(x, dtype=float, copy=True)
    pole = a / norm
    factor = ((1.0 - norm) / (1.0 + norm)) ** factor_power
    # 1 + <x, pole> = |x + pole|^2 / 2 on the sphere, free of cancellation near -pole
    lifted = x + pole
    denom = np.asarray(0.5 * np.sum(lifted * lifted, axis=-1))
    perp = lifted - denom[..., None] * pole
    # projection from -pole; -pole itself is the repelling fixed point
    safe = denom > POLE_GAP
    y = np.where(safe[..., None], perp / np.where(safe, denom, 1.0)[..., None], 0.0)
    y = factor * y
    y2 = np.sum(y * y, axis=-1)
    out = ((1.0 - y2) / (1.0 + y2))[..., None] * pole + (2.0 / (1.0 + y2))[..., None] * y
    out = out / np.linalg.norm(out, axis=-1, keepdims=True)
    return np.where(safe[..., None], out, -pole)


def mobius_apply(m: MobiusParam, x: np.ndarray) -> np.ndarray:
    """Apply the dilation to one unit vector or an array of them (last axis)."""
    return _dilate(m.a, np.asarray(x, dtype=float), 1.0)


def mobius_inverse(m: MobiusParam, y: np.ndarray) -> np.ndarray:
    """Same pole, reciprocal scale factor."""
    return _dilate(m.a, np.asarray(y, dtype=float), -1.0)


def center_of_mass(p: BalanceProblem, m: MobiusParam) -> np.ndarray:
    moved = mobius_apply(m, p.samples)
    w = p.weights[..., None]
    axes = tuple(range(moved.ndim - 1))
    return np.sum(moved * w, axis=axes) / float(np.sum(p.weights))


def _numerical_jacobian(p: BalanceProblem, a: np.ndarray, h: float = 1e-6) -> np.ndarray:
    jac = np.empty((a.size, a.size))
    for k in range(a.size):
        da = np.zeros_like(a)
        da[k] = h
        plus = center_of_mass(p, MobiusParam(clamp_ball(a + da)))
        minus = center_of_mass(p, MobiusParam(clamp_ball(a - da)))
        jac[:, k] = (plus - minus) / (2.0 * h)
    return jac


def balance(
    p: BalanceProblem,
    tol: float = 1e-8,
    max_iter: int = 200,
    eta: float = 0.5,
    newton_radius: float = 1e-3,
) -> BalanceResult:
    """Find a with |center_of_mass(p, a)| <= tol, starting from a = 0.

    Damped fixed-point steps a <- a - eta G(a), with eta halved whenever |G|
    fails to decrease; the history is strictly decreasing. A step that cannot
    improve even at eta = MIN_STEP raises NonConvergenceError. Once |G| <
    newton_radius a Newton step with a finite-difference Jacobian is tried and
    kept if it lowers |G|. `clamped` records whether the last accepted step had
    to be pulled back inside the ball.
    """
    flat = p.samples.reshape(-1, p.dim)
    if np.max(np.linalg.norm(flat - flat[0], axis=-1)) <= 1e-12:
        raise DegenerateMassError("all samples coincide; the balancing limit lies on the boundary")

    a = np.zeros(p.dim)
    g = center_of_mass(p, MobiusParam(a))
    residual = float(np.linalg.norm(g))
    history = [residual]
    newton_steps = 0
    clamped = False
    iterations = 0
    while residual > tol and iterations < max_iter:
        iterations += 1
        candidate = None
        if residual < newton_radius:
            try:
                trial = a + linalg.solve(_numerical_jacobian(p, a), -g)
                candidate = clamp_ball(trial)
            except linalg.LinAlgError:
                candidate = None
            if candidate is not None:
                g_new = center_of_mass(p, MobiusParam(candidate))
                if np.linalg.norm(g_new) < residual:
                    newton_steps += 1
                    clamped = _outside_ball(trial)
                else:
                    candidate = None
        if candidate is None:
            step_eta = eta
            while True:
                trial = a - step_eta * g
                candidate = clamp_ball(trial)
                g_new = center_of_mass(p, MobiusParam(candidate))
                if np.linalg.norm(g_new) < residual:
                    break
                step_eta *= 0.5
                if step_eta < MIN_STEP:
                    logger.warning("balance stalled at iter=%d residual=%.3e", iterations, residual)
                    raise NonConvergenceError(residual, iterations, a, clamped=clamped)
            clamped = _outside_ball(trial)
        a, g = candidate, g_new
        residual = float(np.linalg.norm(g))
        history.append(residual)
        logger.debug("balance iter=%d residual=%.3e |a|=%.6f", iterations, residual, np.linalg.norm(a))

    if residual > tol:
        raise NonConvergenceError(residual, iterations, a, clamped=clamped)
    logger.info("balanced in %d iterations, residual=%.3e, |a|=%.3e", iterations, residual, np.linalg.norm(a))
    return BalanceResult(MobiusParam(a), residual, iterations, history, newton_steps, clamped)


def clifford_problem(grid: TorusGrid, rho: np.ndarray | None = None) -> BalanceProblem:
    """The Clifford embedding sampled on the grid with weights rho dA."""
    samples = grid.function(clifford_point)
    weights = grid.weights if rho is None else np.asarray(rho, dtype=float) * grid.weights
    return BalanceProblem(samples=samples, weights=weights, grid=grid)


def shifted_problem(grid: TorusGrid, b, rho: np.ndarray | None = None) -> BalanceProblem:
    """Clifford embedding pre-composed with the dilation of parameter b."""
    base = clifford_problem(grid, rho)
    moved = mobius_apply(MobiusParam(np.asarray(b, dtype=float)), base.samples)
    # renormalize away the last ulp so the unit-norm check stays strict
    moved = moved / np.linalg.norm(moved, axis=-1, keepdims=True)
    return BalanceProblem(samples=moved, weights=base.weights, grid=grid)


@dataclass(frozen=True)
class EnergyReport:
    energy: float
    twice_area: float

    @property
    def residual(self) -> float:
        return abs(self.energy - self.twice_area)


def conformal_energy(p: BalanceProblem, m: MobiusParam) -> EnergyReport:
    """Dirichlet energy of T o Psi and twice the area of its pullback metric.

    Derivatives are Fourier derivatives on the flat Clifford torus grid, so the
    energy density is |d_theta F|^2 + |d_phi F|^2. The two numbers agree for
    conformal maps.
    """
    if p.grid is None:
        raise ValueError("conformal_energy needs samples laid out on a TorusGrid")
    grid = p.grid
    values = mobius_apply(m, p.samples)
    k = grid.wavenumbers(derivative=True)
    v_hat = fft.fft2(values, axes=(0, 1))
    f_theta = fft.ifft2(1j * k[:, None, None] * v_hat, axes=(0, 1)).real
    f_phi = fft.ifft2(1j * k[None, :, None] * v_hat, axes=(0, 1)).real
    e = np.sum(f_theta * f_theta, axis=-1)
    g = np.sum(f_phi * f_phi, axis=-1)
    f = np.sum(f_theta * f_phi, axis=-1)
    energy = grid.integrate(e + g)
    twice_area = 2.0 * grid.integrate(np.sqrt(np.maximum(e * g - f * f, 0.0)))
    return EnergyReport(energy=energy, twice_area=twice_area)


def positive_weight(grid: TorusGrid, amplitude: float = 0.5) -> np.ndarray:
    """A smooth positive weight on the torus used as a stand-in first eigenfunction."""
    if not 0.0 <= amplitude < 1.0:
        raise ValueError("amplitude must lie in [0, 1)")
    theta, phi = grid.mesh()
    s = math.sqrt(2.0)
    return 1.0 + amplitude * np.cos(s * theta) * np.sin(s * phi) ** 2
