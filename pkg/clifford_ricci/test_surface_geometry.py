import math

import numpy as np
import pytest

from clifford_ricci.spectral import TorusGrid
from clifford_ricci.surface_geometry import (
    conformal_density_residual,
    conformal_principal,
    gauss_bonnet_integral,
    gauss_residual,
    parallel_torus_round,
    torus_geometry,
    torus_table,
    willmore,
    willmore_pairs,
    willmore_round_closed_form,
)


def test_round_clifford_torus():
    geom = parallel_torus_round(0.0)
    assert geom.kappa1 == pytest.approx(1.0, abs=1e-15)
    assert geom.kappa2 == pytest.approx(-1.0, abs=1e-15)
    assert geom.H == pytest.approx(0.0, abs=1e-15)
    assert geom.sigma2 == pytest.approx(2.0, abs=1e-15)
    assert geom.Ks == 1.0


@pytest.mark.parametrize("t", [-0.5, -0.1, 0.2, 0.6])
def test_round_parallel_tori(t):
    geom = parallel_torus_round(t)
    assert geom.H == pytest.approx(-math.tan(2 * t), rel=1e-12)
    # Gauss equation in S^3: Ks = 1 = K - kappa1 kappa2 with K = 0
    assert geom.kappa1 * geom.kappa2 == pytest.approx(-1.0, rel=1e-12)


def test_perturbed_clifford_torus_stays_minimal(prof):
    geom = torus_geometry(prof, 0.0)
    assert geom.metric == "perturbed"
    assert abs(geom.H) <= 1e-12
    assert geom.sigma2 == pytest.approx(2.0, abs=1e-12)
    assert geom.area_density == 1.0


def test_perturbed_parallel_tori_are_not_minimal(bump, prof):
    geom = torus_geometry(prof, bump.r)
    assert geom.H != pytest.approx(parallel_torus_round(bump.r).H)


def test_base_geometry_must_match(prof):
    with pytest.raises(ValueError):
        conformal_principal(prof, 0.1, parallel_torus_round(0.2))


def test_gauss_equation_in_both_metrics(prof):
    for t in np.linspace(-0.7, 0.7, 29):
        for p in (None, prof):
            assert gauss_residual(torus_geometry(p, float(t))) <= 1e-12


def test_umbilic_free_density_is_conformally_invariant(prof):
    for t in np.linspace(-0.7, 0.7, 29):
        assert conformal_density_residual(prof, float(t)) <= 1e-12


def test_willmore_round_closed_form():
    assert willmore(None, 0.0) == pytest.approx(2.0 * math.pi**2, rel=1e-14)
    for t in (-0.3, 0.15, 0.5):
        assert willmore(None, t) == pytest.approx(willmore_round_closed_form(t), rel=1e-12)


def test_willmore_is_conformally_invariant(bump, prof):
    ts = [0.0, bump.r, -bump.r, 2 * bump.r, -2 * bump.r, 0.2, -0.2]
    for pair in willmore_pairs(prof, ts):
        assert pair["relative_gap"] <= 1e-8
        assert pair["closed_form_gap"] <= 1e-10


def test_gauss_bonnet_vanishes_on_tori(prof):
    grid = TorusGrid(32)
    for t in (0.0, 0.1):
        assert gauss_bonnet_integral(torus_geometry(prof, t), grid) == 0.0


def test_torus_table(prof):
    df = torus_table(prof, [0.0, 0.1], grid=32)
    assert list(df["metric"]) == ["round", "perturbed", "round", "perturbed"]
    assert set(df.columns) == {"t", "metric", "kappa1", "kappa2", "H", "sigma2", "W"}
