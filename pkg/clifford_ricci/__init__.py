"""Numerical verification of conformally perturbed 3-sphere metrics around the Clifford torus."""
from .conformal_profile import BumpSpec, ConformalProfile, make_bump, profile, verify_conditions
from .curvature import max_feasible_r, ricci_diag, scan_nonnegativity
from .errors import CliffordError
from .moebius_balance import MobiusParam, balance, mobius_apply
from .settings import Tolerances
from .spectral import TorusGrid, jacobi_spectrum
from .surface_geometry import torus_geometry, willmore
from .verifier import emit_report, verify_example

__all__ = [
    "BumpSpec",
    "CliffordError",
    "ConformalProfile",
    "MobiusParam",
    "Tolerances",
    "TorusGrid",
    "balance",
    "emit_report",
    "jacobi_spectrum",
    "make_bump",
    "max_feasible_r",
    "mobius_apply",
    "profile",
    "ricci_diag",
    "scan_nonnegativity",
    "torus_geometry",
    "verify_conditions",
    "verify_example",
    "willmore",
]
