"""Quantities derived from solved propagation constants.

Attenuation in dB/m, phase and group velocity, the radius that encloses a
given fraction of the guided power, and field profiles across the conductor
surface. Fields follow the ``exp(j(wt - hz))`` convention of the solver and
are normalised to ``E_z(a) = 1`` V/m.
"""

from dataclasses import dataclass

import numpy as np
from scipy.constants import mu_0, speed_of_light

from barewire import specfun
from barewire.dispersion import NEPER_TO_DB


class DegenerateModeError(ArithmeticError):
    pass


class BracketError(RuntimeError):
    pass


def attenuation_db_per_m(sol):
    """Attenuation ``20 log10(e) * alpha`` in dB/m."""
    alpha = sol.alpha if hasattr(sol, "alpha") else float(sol)
    return NEPER_TO_DB * alpha


@dataclass
class VelocityProfile:
    freqs: np.ndarray
    v_phase: np.ndarray
    v_group: np.ndarray

    @property
    def v_group_over_c(self):
        return self.v_group / speed_of_light

    @property
    def v_phase_over_c(self):
        return self.v_phase / speed_of_light


def phase_velocity(sweep):
    return 2.0 * np.pi * sweep.freqs / sweep.beta


def group_velocity(sweep):
    """Group velocity d(omega)/d(beta) by finite differences over the sweep.

    Interior points use second-order central differences on the (possibly
    non-uniform) beta grid; the two end points are one-sided.

    Raises:
        ValueError: fewer than three points, or beta not strictly increasing
            with frequency (a branch fault in the solution).
    """
    if len(sweep) < 3:
        raise ValueError("group velocity needs at least three frequency points")
    beta = sweep.beta
    if np.any(np.diff(beta) <= 0):
        raise ValueError("phase constant is not monotone over the grid")
    omega = 2.0 * np.pi * sweep.freqs
    v_group = np.gradient(omega, beta)
    return VelocityProfile(freqs=sweep.freqs.copy(), v_phase=omega / beta, v_group=v_group)


def _flux_term(r, lam):
    # Im[r lam H0(lam r) conj(H1(lam r))], evaluated with exp(-iz)-scaled
    # Hankel functions; the product carries exp(-2 Im(lam) r).
    z = lam * r
    h0 = specfun.hankel1(0, z, scaled=True)
    h1 = specfun.hankel1(1, z, scaled=True)
    decay = np.exp(-2.0 * z.imag)
    return np.imag(r * lam * h0 * np.conj(h1)) * decay


def power_fraction(r, sol, radius_a):
    """Fraction of the axial power flowing within radius ``r`` of the axis.

    ``1 - F(r)/F(a)`` with ``F(r) = Im[r lam H0(lam r) conj(H1(lam r))]``,
    which is the closed form of the outward power integral of
    ``r |H1(lam r)|^2``. Accepts scalar or array ``r``.
    """
    lam = complex(sol.lambda_a)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < radius_a * (1 - 1e-12)):
        raise ValueError("r must not be inside the conductor")
    denom = _flux_term(radius_a, lam)
    if abs(denom) < 1e-300:
        raise DegenerateModeError("power normalisation vanishes")
    raw = 1.0 - _flux_term(r_arr, lam) / denom
    if np.any(raw < -1e-9) or np.any(raw > 1 + 1e-9):
        raise DegenerateModeError(f"power fraction out of range: {raw}")
    out = np.clip(raw, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def field_extension_radius(fraction, sol, radius_a, tol=1e-10):
    """Radius (m) enclosing ``fraction`` of the guided power.

    The bracket is grown by doubling from ``radius_a`` and then bisected
    until the power fraction matches to ``tol``.
    """
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    lo, hi = radius_a, 2.0 * radius_a
    for _ in range(64):
        if power_fraction(hi, sol, radius_a) >= fraction:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise BracketError("mode is effectively unbound; no bracket within a * 2**64")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p = power_fraction(mid, sol, radius_a)
        if abs(p - fraction) < tol or hi - lo <= 4 * np.finfo(float).eps * hi:
            return mid
        if p < fraction:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class FieldSample:
    r: float
    E_r: complex
    E_z: complex
    H_phi: complex


def field_profile(r_grid, sol, media):
    """E_r, E_z and H_phi at z = 0, t = 0 for each radius in ``r_grid``.

    Interior fields use J-functions of ``lambda_c``, exterior fields Hankel
    functions of ``lambda_a``; each side is scaled so that ``E_z(a) = 1``.
    H_phi continuity at ``r = a`` then holds only if ``lambda_a`` satisfies
    the characteristic equation.
    """
    a = media.radius_a
    omega = 2.0 * np.pi * sol.freq
    h = complex(sol.h)
    lc = complex(sol.lambda_c)
    la = complex(sol.lambda_a)
    kc2 = lc**2 + h**2
    ka2 = la**2 + h**2
    mu_c = mu_0 * media.mu_r_cond
    mu_a = mu_0 * media.mu_r_air

    out = []
    za = lc * a
    j0a = specfun.bessel_j(0, za, scaled=True)
    h0a = specfun.hankel1(0, la * a, scaled=True)
    for r in np.asarray(r_grid, dtype=float):
        if r < 0:
            raise ValueError("radius must be non-negative")
        if r <= a:
            z = lc * r
            # scaled J carry exp(-|Im z|); restore the ratio to J(a)
            shift = np.exp(abs(z.imag) - abs(za.imag))
            ez = specfun.bessel_j(0, z, scaled=True) / j0a * shift
            if r == 0:
                z1 = 0j
            else:
                z1 = specfun.bessel_j(1, z, scaled=True) / j0a * shift
            e_r = 1j * h / lc * z1
            h_phi = 1j * kc2 / (omega * mu_c * lc) * z1
        else:
            z = la * r
            shift = np.exp(1j * (z - la * a))
            ez = specfun.hankel1(0, z, scaled=True) / h0a * shift
            z1 = specfun.hankel1(1, z, scaled=True) / h0a * shift
            e_r = 1j * h / la * z1
            h_phi = 1j * ka2 / (omega * mu_a * la) * z1
        out.append(FieldSample(r=float(r), E_r=complex(e_r), E_z=complex(ez), H_phi=complex(h_phi)))
    return out


def boundary_mismatch(sol, media):
    """Relative jump of H_phi across ``r = a`` with ``E_z(a) = 1`` on both sides."""
    a = media.radius_a
    la, lc, h = complex(sol.lambda_a), complex(sol.lambda_c), complex(sol.h)
    omega = 2.0 * np.pi * sol.freq
    inside = 1j * (lc**2 + h**2) / (omega * mu_0 * media.mu_r_cond * lc) * specfun.ratio_j1_j0(lc * a)
    outside = 1j * (la**2 + h**2) / (omega * mu_0 * media.mu_r_air * la) * specfun.ratio_h1_h0(la * a)
    return abs(inside - outside) / abs(outside)


def propagation_table(sweep, fraction=0.9):
    """Rows (freq_hz, alpha_db_m, v_ph_over_c, v_gr_over_c, r90_m) for a sweep."""
    vel = group_velocity(sweep)
    rows = []
    for i in range(len(sweep)):
        sol = sweep[i]
        rows.append({
            "freq_hz": sol.freq,
            "alpha_db_m": sol.alpha_db,
            "v_ph_over_c": float(vel.v_phase_over_c[i]),
            "v_gr_over_c": float(vel.v_group_over_c[i]),
            "r90_m": field_extension_radius(fraction, sol, sweep.media.radius_a),
        })
    return rows
