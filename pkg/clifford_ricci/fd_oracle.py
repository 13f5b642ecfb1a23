"""Finite-difference Christoffel / Ricci pipeline, independent of the closed-form Ricci law.

The metric is e^{2w(t)} J^T J with J the analytic Jacobian of the chart map, in
coordinates x = (t, theta, phi). Christoffel symbols and their derivatives are
both taken with Richardson-extrapolated central differences, so the result is
O(h^4) wherever zeta is smooth. The profile is only C^2 at t = 0, +-r, +-2r, so
samples closer than a few h to those points are not meaningful.
"""
import numpy as np

from .chart import embed_jacobian
from .conformal_profile import ConformalProfile


def metric(p: ConformalProfile, x: np.ndarray) -> np.ndarray:
    t, theta, phi = x
    jac = embed_jacobian(theta, phi, t)
    return np.exp(2.0 * p.w(t)) * (jac.T @ jac)


def _richardson(f, x: np.ndarray, k: int, h: float) -> np.ndarray:
    """d f / d x_k by central differences at h and h/2 combined to O(h^4)."""
    def central(step):
        dx = np.zeros_like(x)
        dx[k] = step
        return (f(x + dx) - f(x - dx)) / (2.0 * step)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def christoffel(p: ConformalProfile, x: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """Gamma[k, i, j] = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)."""
    x = np.asarray(x, dtype=float)
    g = metric(p, x)
    g_inv = np.linalg.inv(g)
    # dg[l, i, j] = d_l g_ij
    dg = np.stack([_richardson(lambda y: metric(p, y), x, l, h) for l in range(3)])
    lowered = 0.5 * (
        np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    )
    return np.einsum("kl,lij->kij", g_inv, lowered)


def ricci(p: ConformalProfile, x, h: float = 1e-3) -> np.ndarray:
    """Ricci tensor R_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik."""
    x = np.asarray(x, dtype=float)
    gamma = christoffel(p, x, h)
    # dgamma[m, k, i, j] = d_m Gamma^k_ij
    dgamma = np.stack([_richardson(lambda y: christoffel(p, y, h), x, m, h) for m in range(3)])
    term1 = np.einsum("kkij->ij", dgamma)
    term2 = np.einsum("jkik->ij", dgamma)
    term3 = np.einsum("kkl,lij->ij", gamma, gamma)
    term4 = np.einsum("kjl,lik->ij", gamma, gamma)
    return term1 - term2 + term3 - term4


def ricci_at(p: ConformalProfile, t: float, theta: float = 0.3, phi: float = 0.7, h: float = 1e-3) -> np.ndarray:
    """3x3 Ricci matrix in the (t, theta, phi) frame at one chart point."""
    return ricci(p, np.array([t, theta, phi]), h)


def kink_points(p: ConformalProfile) -> list[float]:
    """Points where zeta is only C^2."""
    if p.bump is None:
        return []
    r = p.bump.r
    return [-2.0 * r, -r, 0.0, r, 2.0 * r]


def safe_samples(p: ConformalProfile, count: int, rng: np.random.Generator, limit: float = 0.7, h: float = 1e-3) -> np.ndarray:
    """Random t in (-limit, limit) kept at least 5h away from every kink."""
    kinks = np.array(kink_points(p))
    out = []
    while len(out) < count:
        t = float(rng.uniform(-limit, limit))
        if kinks.size and np.min(np.abs(kinks - t)) < 5.0 * h:
            continue
        out.append(t)
    return np.array(out)
