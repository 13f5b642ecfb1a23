import math

import numpy as np
import pytest
from scipy import integrate

from clifford_ricci.conformal_profile import (
    R_LIMIT,
    R_MAX,
    BumpSpec,
    constant_profile,
    make_bump,
    profile,
    profile_table,
    tail_constant,
    verify_conditions,
    zero_profile,
)
from clifford_ricci.errors import BumpParameterError


def test_bump_values_at_landmarks(bump, prof):
    r = bump.r
    assert prof.zeta(0.0) == pytest.approx(1.0, abs=1e-15)
    assert prof.zeta(r) == pytest.approx(0.0, abs=1e-14)
    assert prof.zeta(2 * r) == pytest.approx(0.0, abs=1e-14)
    assert prof.zeta(1.5 * r) == pytest.approx(-35.0 / 32.0, abs=1e-13)
    assert prof.w1(r) == pytest.approx(r / 2, abs=1e-15)
    assert prof.w1(2 * r) == pytest.approx(0.0, abs=1e-15)
    assert prof.w(0.0) == 0.0


def test_negative_lobe_minimum_is_at_its_center(prof):
    t = np.linspace(0.05, 0.1, 2001)
    z = prof.zeta(t)
    assert t[np.argmin(z)] == pytest.approx(0.075, abs=1e-4)
    assert z.min() == pytest.approx(-35.0 / 32.0, abs=1e-9)


@pytest.mark.parametrize("t", [0.01, 0.05, 0.07, 0.1, 0.3])
def test_antiderivatives_match_quadrature(prof, t):
    w1, _ = integrate.quad(prof.zeta, 0.0, t, epsabs=1e-14, limit=200)
    w0, _ = integrate.quad(prof.w1, 0.0, t, epsabs=1e-14, limit=200)
    assert prof.w1(t) == pytest.approx(w1, abs=1e-11)
    assert prof.w(t) == pytest.approx(w0, abs=1e-11)


def test_parity(prof):
    t = np.linspace(0.0, 0.7, 301)
    assert np.array_equal(prof.zeta(-t), prof.zeta(t))
    assert np.array_equal(prof.w(-t), prof.w(t))
    assert np.array_equal(prof.w1(-t), -prof.w1(t))


def test_zeta_is_c1_across_the_joins(bump, prof):
    eps = 1e-9
    for knot in (bump.r, 2 * bump.r):
        assert prof.zeta(knot - eps) == pytest.approx(prof.zeta(knot + eps), abs=1e-7)
        assert prof.zeta_prime(knot - eps) == pytest.approx(prof.zeta_prime(knot + eps), abs=1e-5)


def test_scalar_and_array_inputs(prof):
    assert isinstance(prof.w(0.02), float)
    out = prof.w(np.zeros((2, 3)))
    assert out.shape == (2, 3)


def test_w_is_affine_beyond_the_support(bump, prof):
    t = np.linspace(2 * bump.r, 0.7, 50)
    assert np.max(np.abs(prof.zeta(t))) == 0.0
    assert np.max(np.abs(np.diff(prof.w(t), 2))) < 1e-15
    assert tail_constant(prof) == pytest.approx(math.exp(2 * prof.w(0.5)), rel=1e-13)


@pytest.mark.parametrize("r", [0.01, 0.05, 0.2, 0.39])
def test_conditions_hold_for_standard_bump(r):
    report = verify_conditions(make_bump(r))
    assert report.passed, report.as_dict()
    assert report["iv_zero_mean"].residual <= 1e-12
    assert set(report.as_dict()) >= {"i_zeta_at_0", "ii_negative_lobe", "iii_zero_tail", "iv_zero_mean"}


def test_wrong_amplitude_breaks_zero_mean():
    report = verify_conditions(BumpSpec(r=0.05, amplitude=0.4))
    assert not report.passed
    assert not report["iv_zero_mean"].passed
    assert report["iv_zero_mean"].residual == pytest.approx(0.1 * 0.05, rel=1e-9)


@pytest.mark.parametrize("r", [0.0, -0.1, R_MAX, R_LIMIT, R_MAX - 1e-13, 1.0])
def test_bump_rejects_bad_half_width(r):
    with pytest.raises(BumpParameterError):
        make_bump(r)


def test_bump_rejects_unknown_shape():
    with pytest.raises(ValueError):
        BumpSpec(r=0.05, negative_shape="gaussian")


def test_degenerate_profiles():
    t = np.linspace(-0.7, 0.7, 11)
    zero = zero_profile()
    assert np.array_equal(zero.w(t), np.zeros_like(t))
    assert np.array_equal(zero.w1(t), np.zeros_like(t))
    assert tail_constant(zero) == 1.0
    const = constant_profile(0.3)
    assert np.allclose(const.w(t), 0.3)
    assert np.array_equal(const.w2(t), np.zeros_like(t))


def test_profile_table_columns(prof):
    df = profile_table(prof, n=101)
    assert list(df.columns) == ["t", "zeta", "w", "w1", "w2"]
    assert len(df) == 101
    assert df["t"].abs().max() < math.pi / 4
