import math

import numpy as np
import pytest

from clifford_ricci.chart import round_metric_coeffs
from clifford_ricci.conformal_profile import R_LIMIT, R_MAX, constant_profile, make_bump, profile, zero_profile
from clifford_ricci.curvature import (
    hessian_diag,
    laplacian_w,
    max_feasible_r,
    ricci_diag,
    ricci_table,
    scan_nonnegativity,
    vanishing_directions,
)
from clifford_ricci.errors import ChartDomainError
from clifford_ricci.fd_oracle import kink_points, ricci_at, safe_samples


@pytest.mark.parametrize("t", [-0.7, -0.3, 0.0, 0.25, 0.78])
def test_round_metric_is_einstein(t):
    ric = ricci_diag(zero_profile(), t)
    coeffs = round_metric_coeffs(t)
    assert np.allclose(ric.eigenvalues, (2.0, 2.0, 2.0), atol=1e-12)
    assert ric.R_thth == pytest.approx(2.0 * coeffs.a2, abs=1e-12)
    assert ric.R_phph == pytest.approx(2.0 * coeffs.b2, abs=1e-12)


def test_constant_scaling_keeps_ricci_tensor():
    scaled = constant_profile(0.3)
    for t in (-0.4, 0.1, 0.6):
        a = ricci_diag(scaled, t)
        b = ricci_diag(zero_profile(), t)
        assert np.allclose(a.components, b.components, atol=1e-12)
        assert np.allclose(a.eigenvalues, np.full(3, 2.0 * math.exp(-0.6)), atol=1e-12)


def test_ricci_on_the_clifford_torus(prof):
    ric = ricci_diag(prof, 0.0)
    assert ric.R_tt == 0.0
    assert ric.lam_t == 0.0
    assert ric.lam_th == pytest.approx(1.0, abs=1e-15)
    assert ric.lam_ph == pytest.approx(1.0, abs=1e-15)


def test_laplacian_is_trace_of_hessian(prof):
    for t in (-0.08, 0.03, 0.07, 0.2):
        h_tt, h_thth, h_phph = hessian_diag(prof, t)
        c = round_metric_coeffs(t)
        assert laplacian_w(prof, t) == pytest.approx(h_tt + h_thth / c.a2 + h_phph / c.b2, abs=1e-12)


def test_ricci_rejects_points_off_the_chart(prof):
    with pytest.raises(ChartDomainError):
        ricci_diag(prof, math.pi / 4)


def test_fd_oracle_agrees_with_closed_form(prof):
    rng = np.random.default_rng(7)
    for t in safe_samples(prof, 8, rng):
        fd = ricci_at(prof, float(t))
        exact = ricci_diag(prof, float(t))
        assert np.allclose(np.diag(fd), exact.components, atol=1e-4)
        assert np.max(np.abs(fd - np.diag(np.diag(fd)))) < 1e-5


def test_safe_samples_avoid_kinks(prof):
    samples = safe_samples(prof, 200, np.random.default_rng(0))
    kinks = np.array(kink_points(prof))
    assert samples.shape == (200,)
    assert np.min(np.abs(samples[:, None] - kinks[None, :])) >= 5e-3


@pytest.mark.parametrize("r", [0.01, 0.05, 0.2])
def test_scan_is_nonnegative(r):
    res = scan_nonnegativity(profile(make_bump(r)), n=4096)
    assert res.feasible()
    assert res.min_eigenvalue >= -1e-9
    assert res.direction == "t"
    assert abs(res.argmin_t) < 4 * r / 4095 + 1e-15
    assert res.tail_min_eigenvalue == pytest.approx(2.0 / res.tail_constant)


def test_scan_near_the_domain_bound():
    res = scan_nonnegativity(profile(make_bump(0.39)), n=4096)
    assert res.feasible()
    assert res.direction == "t"
    assert res.min_eigenvalue < 1e-3


def test_scan_rejects_coarse_grid(prof):
    with pytest.raises(ValueError):
        scan_nonnegativity(prof, n=32)


def test_ricci_vanishes_only_along_the_normal(prof):
    assert vanishing_directions(prof) == [(0.0, "t")]


def test_max_feasible_r_reaches_the_domain_bound():
    res = max_feasible_r(n=1024)
    assert res.hit_domain_bound
    assert res.upper == R_MAX
    assert res.lower == res.r
    assert 0.99 * R_MAX < res.r < R_MAX
    assert res.half_feasible
    assert res.min_eigenvalue >= -1e-9


def test_max_feasible_r_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        max_feasible_r(tol=0.0)


def test_ricci_table(prof):
    df = ricci_table(prof, n=201)
    assert list(df.columns) == ["t", "lam_t", "lam_th", "lam_ph"]
    assert df["t"].iloc[0] == pytest.approx(-0.1)
    assert (df[["lam_t", "lam_th", "lam_ph"]].to_numpy() >= -1e-9).all()


def test_hessian_and_laplacian_landmarks(bump, prof):
    assert hessian_diag(prof, 0.0) == (1.0, 0.0, 0.0)
    assert np.allclose(hessian_diag(prof, 2 * bump.r), 0.0, atol=1e-14)
    assert np.allclose(hessian_diag(zero_profile(), 0.3), 0.0)
    assert laplacian_w(prof, 0.0) == 1.0
    assert laplacian_w(prof, 0.3) == pytest.approx(0.0, abs=1e-14)
    assert laplacian_w(zero_profile(), -0.3) == 0.0


def test_widest_accepted_bump_scans_inside_the_chart():
    r = float(np.nextafter(R_LIMIT, 0.0))
    res = scan_nonnegativity(profile(make_bump(r)), 257)
    assert np.isfinite(res.min_eigenvalue)
    assert abs(res.argmin_t) <= 2.0 * r


def test_zero_profile_scan_is_strictly_positive():
    res = scan_nonnegativity(zero_profile(), 1025)
    # round metric: Ric = 2g across the whole scanned chart
    assert res.min_eigenvalue == pytest.approx(2.0, abs=1e-9)
    assert res.tail_min_eigenvalue == 2.0
    assert res.feasible(0.0)
