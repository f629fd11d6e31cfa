import cmath

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barewire import specfun

mp.mp.dps = 40


def j_oracle(n, z):
    return complex(mp.besselj(n, mp.mpc(z.real, z.imag)))


def h_oracle(n, z):
    # H1_n(z) = 2 / (pi i^(n+1)) K_n(-i z); stays accurate for large Im z
    # where J + iY cancels. Valid for -pi/2 < arg z <= pi.
    w = mp.mpc(z.real, z.imag)
    return complex(2 / (mp.pi * mp.mpc(0, 1) ** (n + 1)) * mp.besselk(n, -1j * w))


def rel(a, b):
    return abs(a - b) / abs(b)


def upper_half_points(rmin, rmax, count, seed, th_min=-0.45 * np.pi):
    rng = np.random.default_rng(seed)
    r = np.exp(rng.uniform(np.log(rmin), np.log(rmax), count))
    th = rng.uniform(th_min, np.pi, count)
    return r * np.exp(1j * th)


def test_small_argument_constants():
    assert specfun.bessel_j(0, 0) == 1.0
    assert specfun.bessel_j(1, 0) == 0.0
    assert abs(specfun.bessel_j(0, 1 + 0j) - 0.765197686557967) < 1e-15


def test_hankel_at_one():
    h = specfun.hankel1(0, 1 + 0j)
    assert abs(h - (0.765197686557967 + 0.088256964215677j)) < 1e-14


def test_hankel_rejects_origin():
    with pytest.raises(ValueError):
        specfun.hankel1(0, 0j)


@pytest.mark.parametrize("n", [0, 1])
def test_bessel_j_matches_mpmath(n):
    for z in upper_half_points(1e-3, 200.0, 150, 1 + n):
        assert rel(specfun.bessel_j(n, z), j_oracle(n, z)) < 1e-10, z


@pytest.mark.parametrize("n", [0, 1])
def test_hankel_matches_mpmath(n):
    for z in upper_half_points(1e-3, 200.0, 150, 3 + n):
        assert rel(specfun.hankel1(n, z), h_oracle(n, z)) < 1e-10, z


def test_scaled_values_far_off_axis():
    z = 40 + 300j
    jv = specfun.bessel_j(0, z, scaled=True)
    assert rel(jv, j_oracle(0, z) * cmath.exp(-abs(z.imag))) < 1e-10
    hv = specfun.hankel1(1, z, scaled=True)
    assert rel(hv, h_oracle(1, z) * cmath.exp(-1j * z)) < 1e-10


def test_unscaled_overflow_is_reported():
    with pytest.raises(OverflowError):
        specfun.bessel_j(0, 1000j)


def test_hankel_modulus_decay():
    z = 100 + 10j
    lead = np.exp(-10.0) * np.sqrt(2 / (np.pi * abs(z)))
    # the leading form carries an O(1/8z) correction of about 1.2e-4
    assert rel(abs(specfun.hankel1(0, z)), lead) < 1e-3
    assert rel(specfun.hankel1(0, z), h_oracle(0, z)) < 1e-10


def test_wronskian_hankel_form():
    # J0 H1 - J1 H0 = -2i / (pi z), the same identity as J0 Y1 - J1 Y0 = -2/(pi z)
    # and well conditioned in the physical half-plane Im z >= 0
    for z in upper_half_points(1e-3, specfun.THRESHOLD, 300, 7, th_min=0.0):
        w = specfun.bessel_j(0, z) * specfun.hankel1(1, z) - specfun.bessel_j(1, z) * specfun.hankel1(0, z)
        assert rel(w, -2j / (np.pi * z)) < 1e-8, z


def test_wronskian_neumann_form():
    rng = np.random.default_rng(11)
    x = rng.uniform(-specfun.THRESHOLD, specfun.THRESHOLD, 200)
    y = rng.uniform(-2.0, 2.0, 200)
    for z in x + 1j * y:
        if abs(z) < 1e-3:
            continue
        j0, j1 = specfun.bessel_j(0, z), specfun.bessel_j(1, z)
        y0 = -1j * (specfun.hankel1(0, z) - j0)
        y1 = -1j * (specfun.hankel1(1, z) - j1)
        assert rel(j0 * y1 - j1 * y0, -2 / (np.pi * z)) < 1e-8, z


@pytest.mark.parametrize("n", [0, 1])
def test_regimes_agree_in_overlap(n):
    rng = np.random.default_rng(5)
    r = rng.uniform(0.5 * specfun.THRESHOLD, 2 * specfun.THRESHOLD, 200)
    th = rng.uniform(-0.45 * np.pi, np.pi, 200)
    for z in r * np.exp(1j * th):
        for fn in (specfun.bessel_j, specfun.hankel1):
            a = fn(n, z, scaled=True, regime="series")
            b = fn(n, z, scaled=True, regime="asymptotic")
            assert rel(a, b) < 1e-6, (fn.__name__, z)


def test_select_regime_threshold():
    assert specfun.select_regime(24.9).tag == "series"
    assert specfun.select_regime(25.1).tag == "asymptotic"


@given(st.floats(0.01, 60.0), st.floats(-1.4, 3.1))
@settings(max_examples=100, deadline=None)
def test_derivative_identity(r, th):
    z = r * cmath.exp(1j * th)
    step = 1e-6 * abs(z)
    d = (specfun.bessel_j(0, z + step) - specfun.bessel_j(0, z - step)) / (2 * step)
    j1 = specfun.bessel_j(1, z)
    # the central difference carries ~1e-10 * |J0| / step of rounding noise
    assert abs(d + j1) <= 1e-5 * abs(j1) + 1e-9 * abs(specfun.bessel_j(0, z)) / 1e-6


def test_ratio_j_small_argument():
    assert rel(specfun.ratio_j1_j0(1e-6 + 0j), 5e-7) < 1e-9


def test_ratio_j_across_threshold():
    for th in np.linspace(-0.4 * np.pi, 0.9 * np.pi, 9):
        below = specfun.ratio_j1_j0((specfun.THRESHOLD - 1e-9) * cmath.exp(1j * th))
        above = specfun.ratio_j1_j0((specfun.THRESHOLD + 1e-9) * cmath.exp(1j * th))
        assert rel(above, below) < 1e-6


def test_ratio_j_deep_skin_argument():
    z = (1 - 1j) * 1e4
    got = specfun.ratio_j1_j0(z)
    w = mp.mpc(z.real, z.imag)
    want = complex(mp.besselj(1, w) / mp.besselj(0, w))
    assert np.isfinite(got) and rel(got, want) < 1e-6


def test_ratio_h_against_oracle():
    for z in (1 + 0j, 100 + 0j, 3 + 4j, 0.01 + 0.02j, 60 + 200j):
        assert rel(specfun.ratio_h1_h0(z), h_oracle(1, z) / h_oracle(0, z)) < 1e-10, z
    assert abs(specfun.ratio_h1_h0(100 + 0j) + 1j) < 1e-2


def test_ratio_h_logarithmic_small_argument():
    # H1/H0 ~ 2 / (z (ln(z/2) + gamma)) as z -> 0... checked against the series oracle
    z = 1e-8 + 1e-8j
    assert rel(specfun.ratio_h1_h0(z), h_oracle(1, z) / h_oracle(0, z)) < 1e-10


def test_ratios_finite_at_large_argument():
    for th in np.linspace(-np.pi / 4, np.pi / 4, 9):
        z = 1e9 * cmath.exp(1j * th)
        assert np.isfinite(specfun.ratio_j1_j0(z))
        assert np.isfinite(specfun.ratio_h1_h0(z))


def test_ratio_j_pole():
    zero = 2.404825557695773
    with pytest.raises(specfun.PoleError):
        specfun.ratio_j1_j0(zero + 0j)


def test_array_input():
    z = np.array([0.5 + 0.1j, 30 + 2j, 1e3 - 1e3j])
    v = specfun.ratio_j1_j0(z)
    assert v.shape == (3,)
    for zi, vi in zip(z, v):
        assert rel(vi, specfun.ratio_j1_j0(zi)) < 1e-14
