"""Spectra on the flat Clifford torus (square, side sqrt(2) pi, area 2 pi^2).

Fourier modes exp(i sqrt2 (m theta + k phi)) have Laplace eigenvalue 2 (m^2 + k^2),
so lambda_1 = 2 with multiplicity 4. On the Clifford torus |sigma|^2 + Ric(N) is
constant in both metrics (4 for the round one, 2 after the conformal change), so
the Jacobi operator is Delta + c and its spectrum is the shifted Laplace spectrum.
"""
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from scipy import fft

from .chart import PERIOD, clifford_point
from .errors import GridError
from .settings import Tolerances

logger = logging.getLogger(__name__)

BACKENDS = ("fourier", "fd")
EULER_CHARACTERISTIC = 0


@dataclass(frozen=True)
class TorusGrid:
    """Uniform periodic n x n lattice on [0, sqrt2 pi)^2 with trapezoidal weights."""

    n: int
    period: float = PERIOD

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise GridError(f"grid size must be even and >= 8, got {self.n}")

    @property
    def h(self) -> float:
        return self.period / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n) * self.h

    @property
    def weights(self) -> np.ndarray:
        return np.full((self.n, self.n), self.h * self.h)

    @property
    def area(self) -> float:
        return float(np.sum(self.weights))

    def mesh(self) -> tuple:
        """(theta, phi) arrays with 'ij' indexing."""
        return np.meshgrid(self.nodes, self.nodes, indexing="ij")

    def function(self, f) -> np.ndarray:
        theta, phi = self.mesh()
        return f(theta, phi)

    def integrate(self, values) -> float:
        return float(np.sum(np.asarray(values) * self.weights))

    def mode_numbers(self) -> np.ndarray:
        """Integer Fourier mode numbers in FFT order."""
        return np.rint(fft.fftfreq(self.n, d=1.0 / self.n)).astype(int)

    def wavenumbers(self, derivative: bool = False) -> np.ndarray:
        """2 pi m / period; the Nyquist mode is zeroed for first derivatives."""
        k = 2.0 * math.pi / self.period * self.mode_numbers().astype(float)
        if derivative:
            k[self.n // 2] = 0.0
        return k


def laplacian_eigs_analytic(mmax: int) -> np.ndarray:
    """2 (m^2 + k^2) for |m|, |k| <= mmax, with multiplicity, ascending."""
    if mmax < 1:
        raise ValueError("mmax must be >= 1")
    m = np.arange(-mmax, mmax + 1)
    mm, kk = np.meshgrid(m, m, indexing="ij")
    scale = (2.0 * math.pi / PERIOD) ** 2
    return np.sort((scale * (mm**2 + kk**2)).ravel())


def _symbol(g: TorusGrid, backend: str) -> np.ndarray:
    m = g.mode_numbers()
    mm, kk = np.meshgrid(m, m, indexing="ij")
    if backend == "fourier":
        return (2.0 * math.pi / g.period) ** 2 * (mm**2 + kk**2)
    if backend == "fd":
        # five-point stencil symbol on the periodic lattice
        return 4.0 / g.h**2 * (np.sin(math.pi * mm / g.n) ** 2 + np.sin(math.pi * kk / g.n) ** 2)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def laplacian_eigs_discrete(g: TorusGrid, backend: str = "fourier") -> np.ndarray:
    return np.sort(_symbol(g, backend).ravel())


@dataclass(frozen=True)
class SpectrumReport:
    c: float
    backend: str
    tol_zero: float
    eigenvalues: np.ndarray = field(repr=False)
    index: int
    nullity: int
    cmc_stable: bool
    minimal_index: int
    euler_characteristic: int = EULER_CHARACTERISTIC

    def as_dict(self, nmax: int = 16) -> dict:
        out = asdict(self)
        out["eigenvalues"] = [float(v) for v in self.eigenvalues[:nmax]]
        return out


def zero_tolerance(backend: str, tolerances: Tolerances | None = None) -> float:
    tolerances = tolerances or Tolerances()
    return tolerances.zero_fourier if backend == "fourier" else tolerances.zero_fd


def jacobi_spectrum(
    c: float,
    g: TorusGrid,
    nmodes: int | None = None,
    backend: str = "fourier",
    tolerances: Tolerances | None = None,
) -> SpectrumReport:
    """Spectrum of -L = -Delta - c, with index, nullity and the CMC verdict.

    CMC stability only asks Q >= 0 on mean-zero functions; for a constant
    potential the constants span the first eigenspace, so the verdict is the
    sign of the second eigenvalue.
    """
    if not math.isfinite(c):
        raise ValueError("potential must be finite")
    lam = laplacian_eigs_discrete(g, backend)
    if nmodes is None:
        nmodes = lam.size
    if nmodes > lam.size or nmodes < 1:
        raise GridError(f"{nmodes} modes requested from a grid holding {lam.size}")
    mu = lam[:nmodes] - c
    tol = zero_tolerance(backend, tolerances)
    if mu[-1] < -tol:
        logger.warning("all %d computed modes are negative; index is truncated", nmodes)
    index = int(np.count_nonzero(mu < -tol))
    nullity = int(np.count_nonzero(np.abs(mu) <= tol))
    cmc_stable = bool(mu.size < 2 or mu[1] >= -tol)
    return SpectrumReport(
        c=float(c),
        backend=backend,
        tol_zero=tol,
        eigenvalues=mu,
        index=index,
        nullity=nullity,
        cmc_stable=cmc_stable,
        minimal_index=index,
    )


def gradient(u: np.ndarray, g: TorusGrid) -> tuple:
    """(du/dtheta, du/dphi) by Fourier differentiation."""
    k = g.wavenumbers(derivative=True)
    u_hat = fft.fft2(u)
    du_dtheta = fft.ifft2(1j * k[:, None] * u_hat).real
    du_dphi = fft.ifft2(1j * k[None, :] * u_hat).real
    return du_dtheta, du_dphi


def q_form(u: np.ndarray, c: float, g: TorusGrid) -> float:
    """Q(u, u) = int |grad u|^2 - c int u^2 over the Clifford torus."""
    du_dtheta, du_dphi = gradient(u, g)
    return g.integrate(du_dtheta**2 + du_dphi**2) - c * g.integrate(u**2)


def q_form_spectral(u: np.ndarray, c: float, g: TorusGrid) -> float:
    """The same form summed over Fourier modes (Parseval)."""
    k = g.wavenumbers(derivative=True)
    symbol = k[:, None] ** 2 + k[None, :] ** 2 - c
    u_hat = fft.fft2(u)
    return float(np.sum(symbol * np.abs(u_hat) ** 2)) * g.h**2 / g.n**2


def coordinate_functions(g: TorusGrid) -> np.ndarray:
    """Clifford embedding components on the grid, shape (n, n, 4)."""
    return g.function(clifford_point)


def stability_threshold() -> float:
    """First nonzero Laplace eigenvalue; Delta + c is CMC-stable iff c <= this."""
    return float(np.unique(laplacian_eigs_analytic(1))[1])


def stability_sweep(cs, g: TorusGrid, backend: str = "fourier") -> pd.DataFrame:
    rows = []
    for c in cs:
        rep = jacobi_spectrum(float(c), g, backend=backend)
        rows.append({"c": rep.c, "index": rep.index, "nullity": rep.nullity, "cmc_stable": rep.cmc_stable})
    return pd.DataFrame(rows)
