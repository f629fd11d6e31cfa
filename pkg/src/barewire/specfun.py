"""Cylinder functions of complex argument for orders 0 and 1.

Two evaluation regimes are used. Below ``THRESHOLD`` the functions are taken
from the AMOS routines wrapped by :mod:`scipy.special`. Above it the Hankel
asymptotic expansion is summed with optimal truncation. The ratio forms
``J1/J0`` and ``H1/H0`` never form the raw functions in the asymptotic regime,
so they stay finite where ``J0`` itself would overflow (``|Im z|`` > ~700).

All public functions accept a scalar or an array and return the same shape.
"""

from dataclasses import dataclass

import numpy as np
import scipy.special as sc

THRESHOLD = 25.0

_KMAX = 64


class PoleError(ZeroDivisionError):
    """Raised when a ratio is requested at (or numerically at) a zero of its denominator."""


@dataclass(frozen=True)
class EvalRegime:
    tag: str
    threshold: float = THRESHOLD

    def __post_init__(self):
        if self.tag not in ("series", "asymptotic"):
            raise ValueError(f"unknown regime {self.tag!r}")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")


def select_regime(z, threshold=THRESHOLD):
    """Return the :class:`EvalRegime` used for a scalar argument ``z``."""
    tag = "series" if abs(complex(z)) <= threshold else "asymptotic"
    return EvalRegime(tag, threshold)


def _coefficients(n, kmax=_KMAX):
    # a_k(n) = prod_{j<=k} (4n^2 - (2j-1)^2) / (k! 8^k)
    a = np.empty(kmax + 1)
    a[0] = 1.0
    mu = 4.0 * n * n
    for k in range(1, kmax + 1):
        a[k] = a[k - 1] * (mu - (2 * k - 1) ** 2) / (8.0 * k)
    return a


_COEF = {0: _coefficients(0), 1: _coefficients(1)}


def _pq(n, z):
    """Hankel P, Q series for order ``n`` truncated before the smallest term."""
    z = np.asarray(z, dtype=complex)
    k = np.arange(_KMAX + 1).reshape((-1,) + (1,) * z.ndim)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        terms = _COEF[n].reshape(k.shape) * (1.0 / z[np.newaxis]) ** k
    mags = np.abs(terms)
    finite = np.isfinite(mags)
    kstop = np.argmin(np.where(finite, mags, np.inf), axis=0)
    kstop = np.minimum(kstop, np.where(finite.all(axis=0), _KMAX + 1, np.argmin(finite, axis=0)))
    terms = np.where(k < np.maximum(kstop, 1), terms, 0.0)
    # (-1)^(k//2): signs + + - - + + ...
    sign = np.where((k // 2) % 2 == 0, 1.0, -1.0)
    even = (k % 2) == 0
    p = np.sum(np.where(even, sign * terms, 0.0), axis=0)
    q = np.sum(np.where(even, 0.0, sign * terms), axis=0)
    return p, q


def _prepare(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("cylinder-function argument must be finite")
    return arr


def _finish(out, z):
    if np.ndim(z) == 0:
        return complex(out)
    return out


def _check_order(n):
    if n not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {n!r}")


def _large(arr, regime, threshold):
    if regime is None:
        return np.abs(arr) > threshold
    if regime not in ("series", "asymptotic"):
        raise ValueError(f"unknown regime {regime!r}")
    return np.full(arr.shape, regime == "asymptotic")


def _stable_tan(z):
    """tan(z) without overflow for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    upper = z.imag >= 0
    e = np.exp(np.where(upper, 2j * z, -2j * z))
    return np.where(upper, -1j * (e - 1.0) / (e + 1.0), -1j * (1.0 - e) / (1.0 + e))


def _asym_j_scaled(n, z):
    """exp(-|Im z|) * J_n(z) from the asymptotic expansion."""
    flip = z.real < 0
    w = np.where(flip, -z, z)
    p, q = _pq(n, w)
    chi = w - (0.5 * n + 0.25) * np.pi
    y = np.abs(w.imag)
    ep = np.exp(1j * chi - y)
    em = np.exp(-1j * chi - y)
    cos_s = 0.5 * (ep + em)
    sin_s = (ep - em) / 2j
    val = np.sqrt(2.0 / (np.pi * w)) * (p * cos_s - q * sin_s)
    return np.where(flip & (n == 1), -val, val)


def _asym_h_scaled(n, z):
    """exp(-iz) * H^(1)_n(z) from the asymptotic expansion."""
    p, q = _pq(n, z)
    return np.sqrt(2.0 / (np.pi * z)) * np.exp(-1j * (0.5 * n + 0.25) * np.pi) * (p + 1j * q)


def bessel_j(n, z, scaled=False, regime=None, threshold=THRESHOLD):
    """Bessel function of the first kind J_n(z), n in {0, 1}.

    Args:
        n: order, 0 or 1.
        z: complex argument (scalar or array).
        scaled: if True return ``J_n(z) * exp(-|Im z|)``, which never overflows.
        regime: force ``"series"`` or ``"asymptotic"``; default picks by ``|z|``.
        threshold: regime switch on ``|z|``.

    Raises:
        OverflowError: unscaled result not representable; use a ratio form.
    """
    _check_order(n)
    arr = _prepare(z)
    big = _large(arr, regime, threshold)
    out = np.empty(arr.shape, dtype=complex)
    small = ~big
    if np.any(small):
        out[small] = sc.jve(n, arr[small])
    if np.any(big):
        out[big] = _asym_j_scaled(n, arr[big])
    if not scaled:
        with np.errstate(over="ignore", invalid="ignore"):
            out = out * np.exp(np.abs(arr.imag))
        if not np.all(np.isfinite(out)):
            raise OverflowError("J_n(z) overflows; use ratio_j1_j0 or scaled=True")
    return _finish(out, z)


def hankel1(n, z, scaled=False, regime=None, threshold=THRESHOLD):
    """Hankel function of the first kind H^(1)_n(z) = J_n(z) + i Y_n(z).

    ``scaled=True`` returns ``H^(1)_n(z) * exp(-iz)``.
    """
    _check_order(n)
    arr = _prepare(z)
    if np.any(arr == 0):
        raise ValueError("H^(1)_n is singular at z = 0")
    big = _large(arr, regime, threshold)
    out = np.empty(arr.shape, dtype=complex)
    small = ~big
    if np.any(small):
        out[small] = sc.hankel1e(n, arr[small])
    if np.any(big):
        out[big] = _asym_h_scaled(n, arr[big])
    if not scaled:
        with np.errstate(over="ignore", invalid="ignore"):
            out = out * np.exp(1j * arr)
        if not np.all(np.isfinite(out)):
            raise OverflowError("H^(1)_n(z) overflows for large negative Im z")
    return _finish(out, z)


def _ratio_j1_j0(arr, big):
    # NaN marks points too close to a zero of J0.
    out = np.empty(arr.shape, dtype=complex)
    small = ~big
    if np.any(small):
        zs = arr[small]
        j0 = sc.jve(0, zs)
        j1 = sc.jve(1, zs)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = j1 / j0
        r[np.abs(j0) < 1e-8 * np.abs(j1)] = np.nan
        out[small] = r
    if np.any(big):
        zb = arr[big]
        flip = zb.real < 0
        w = np.where(flip, -zb, zb)
        p0, q0 = _pq(0, w)
        p1, q1 = _pq(1, w)
        t = _stable_tan(w - 0.25 * np.pi)
        r = (p1 * t + q1) / (p0 - q0 * t)
        out[big] = np.where(flip, -r, r)
    return out


def ratio_j1_j0(z, regime=None, threshold=THRESHOLD):
    """J1(z)/J0(z), finite for arbitrarily large |z|.

    Raises:
        PoleError: ``z`` lies within ~1e-8 of a zero of J0.
    """
    arr = _prepare(z)
    out = _ratio_j1_j0(arr, _large(arr, regime, threshold))
    if np.any(np.isnan(out)):
        raise PoleError("argument is at a zero of J0")
    return _finish(out, z)


def _ratio_h1_h0(arr, big):
    out = np.empty(arr.shape, dtype=complex)
    small = ~big
    if np.any(small):
        zs = arr[small]
        out[small] = sc.hankel1e(1, zs) / sc.hankel1e(0, zs)
    if np.any(big):
        zb = arr[big]
        p0, q0 = _pq(0, zb)
        p1, q1 = _pq(1, zb)
        out[big] = -1j * (p1 + 1j * q1) / (p0 + 1j * q0)
    return out


def ratio_h1_h0(z, regime=None, threshold=THRESHOLD):
    """H^(1)_1(z)/H^(1)_0(z). Tends to -i(1 + i/(2z) + ...) for large |z|."""
    arr = _prepare(z)
    if np.any(arr == 0):
        raise ValueError("H^(1) ratio is undefined at z = 0")
    return _finish(_ratio_h1_h0(arr, _large(arr, regime, threshold)), z)
