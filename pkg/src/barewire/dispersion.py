"""Principal TM mode of a bare round conductor in air.

The radial constant in air, ``lambda_a``, is found by fixed-point iteration of
the implicit characteristic equation

    lambda_a = (eps_a/eps_c) * H1/H0(lambda_a a) * J0/J1(lambda_c a) * lambda_c

starting from ``0.1 k0``. The axial constant follows from
``h^2 = k0^2 eps_a mu_a - lambda_a^2``. Time dependence is ``exp(j(wt - hz))``
so ``alpha = -Im h >= 0`` and ``beta = Re h``.

The solver is vectorised over frequency: every point of a grid iterates in
lock-step with its own relaxation state and convergence flag.
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import epsilon_0, speed_of_light

from barewire import specfun

log = logging.getLogger(__name__)

COPPER_SIGMA = 5.96e7
NEPER_TO_DB = 20.0 * np.log10(np.e)
F_MIN = 1.0
F_MAX = 1e16


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not converge.

    Attributes:
        last: last iterate of lambda_a.
        residual: relative residual of the characteristic equation at ``last``.
        iterations: iterations performed.
    """

    def __init__(self, message, last=None, residual=None, iterations=None):
        super().__init__(message)
        self.last = last
        self.residual = residual
        self.iterations = iterations


class DivergenceError(ConvergenceError):
    pass


class SweepError(RuntimeError):
    """More than the tolerated fraction of sweep points failed."""


@dataclass(frozen=True)
class MediumParams:
    """Conductor and surrounding air.

    ``strict`` keeps the relative constants of air and conductor permeability
    within [0.99, 1.01]; pass ``strict=False`` to model other media.
    """

    radius_a: float
    sigma_cond: float = COPPER_SIGMA
    eps_r_air: float = 1.0
    mu_r_air: float = 1.0
    mu_r_cond: float = 1.0
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.sigma_cond > 0:
            raise ValueError("sigma_cond must be positive")
        if not self.radius_a > 0:
            raise ValueError("radius_a must be positive")
        if self.strict:
            for name in ("eps_r_air", "mu_r_air", "mu_r_cond"):
                v = getattr(self, name)
                if not 0.99 <= v <= 1.01:
                    raise ValueError(f"{name}={v} outside [0.99, 1.01]; use strict=False to override")

    @classmethod
    def copper(cls, radius_a):
        return cls(radius_a=radius_a)


@dataclass(frozen=True)
class SolverOptions:
    """Fixed-point solver settings.

    ``lambda_c_form`` selects the constant under the square root that yields
    ``lambda_c``: ``"consistent"`` uses ``eps_c mu_c - eps_a mu_a`` (which is
    what makes the fixed point a root of the boundary-matching equation),
    ``"conductor-mu"`` uses ``eps_c mu_c - eps_a mu_c``. They coincide when
    ``mu_r_cond == mu_r_air``.
    """

    rel_tol: float = 1e-12
    residual_tol: float = 1e-8
    max_iter: int = 200
    relaxation: float = 0.5
    stall_window: int = 5
    stall_ratio: float = 0.5
    start_factor: float = 0.1
    lambda_c_form: str = "consistent"

    def __post_init__(self):
        if self.lambda_c_form not in ("consistent", "conductor-mu"):
            raise ValueError(f"unknown lambda_c_form {self.lambda_c_form!r}")
        if not 0 < self.relaxation <= 1:
            raise ValueError("relaxation must lie in (0, 1]")

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_OPTIONS = SolverOptions()


@dataclass(frozen=True)
class Wavenumbers:
    k0: np.ndarray
    ka: np.ndarray
    kc: np.ndarray
    eps_r_cond: np.ndarray


def _check_freq(freq):
    f = np.asarray(freq, dtype=float)
    if np.any(~np.isfinite(f)) or np.any(f <= 0):
        raise ValueError("frequency must be positive")
    return f


def conductor_permittivity(freq, sigma):
    """Relative permittivity ``1 - j sigma/(2 pi f eps0)`` of a good conductor."""
    f = _check_freq(freq)
    if np.any(np.asarray(sigma) < 0):
        raise ValueError("conductivity must be non-negative")
    out = 1.0 - 1j * np.asarray(sigma) / (2.0 * np.pi * f * epsilon_0)
    return complex(out) if out.ndim == 0 else out


def free_space_wavenumber(freq):
    return 2.0 * np.pi * np.asarray(freq, dtype=float) / speed_of_light


def wavenumbers(freq, media):
    f = _check_freq(freq)
    k0 = free_space_wavenumber(f)
    eps_c = np.asarray(conductor_permittivity(f, media.sigma_cond))
    ka = k0 * np.sqrt(media.eps_r_air * media.mu_r_air + 0j)
    kc = k0 * np.sqrt(eps_c * media.mu_r_cond)
    return Wavenumbers(k0=k0, ka=ka, kc=kc, eps_r_cond=eps_c)


def _lambda_c_sq_offset(k0, eps_c, media, form):
    mu_second = media.mu_r_cond if form == "conductor-mu" else media.mu_r_air
    return k0**2 * (eps_c * media.mu_r_cond - media.eps_r_air * mu_second)


def _rhs(lam, k0, eps_c, media, form):
    lc = np.sqrt(_lambda_c_sq_offset(k0, eps_c, media, form) + lam**2)
    a = media.radius_a
    rh = specfun._ratio_h1_h0(lam * a, np.abs(lam * a) > specfun.THRESHOLD)
    rj = specfun._ratio_j1_j0(lc * a, np.abs(lc * a) > specfun.THRESHOLD)
    return (media.eps_r_air / eps_c) * rh / rj * lc


def _axial(lam, k0, media):
    h = np.sqrt(k0**2 * media.eps_r_air * media.mu_r_air - lam**2)
    # Re h > 0 picks the forward wave; the principal root already has it.
    return np.where(h.real < 0, -h, h)


def _residual(lam, k0, eps_c, media):
    a = media.radius_a
    h = _axial(lam, k0, media)
    kc2 = k0**2 * eps_c * media.mu_r_cond
    lc = np.sqrt(kc2 - h**2)
    with np.errstate(all="ignore"):
        lhs = (lc**2 + h**2) / (media.mu_r_cond * lc) * specfun._ratio_j1_j0(
            lc * a, np.abs(lc * a) > specfun.THRESHOLD)
        rhs = (lam**2 + h**2) / (media.mu_r_air * lam) * specfun._ratio_h1_h0(
            lam * a, np.abs(lam * a) > specfun.THRESHOLD)
        res = np.abs(lhs - rhs) / (np.abs(lhs) + np.abs(rhs))
    return np.where(np.isfinite(res), res, np.inf)


def fixed_point_rhs(lambda_a, freq, media, form="consistent"):
    """Right-hand side of the implicit equation for ``lambda_a`` (rad/m)."""
    wn = wavenumbers(freq, media)
    lam = np.asarray(lambda_a, dtype=complex)
    with np.errstate(all="ignore"):
        out = _rhs(lam, wn.k0, wn.eps_r_cond, media, form)
    if not np.all(np.isfinite(out)):
        raise specfun.PoleError("cylinder-function ratio is singular at this lambda_a")
    return complex(out) if out.ndim == 0 else out


def residual(lambda_a, freq, media):
    """Relative mismatch ``|L - R| / (|L| + |R|)`` of the boundary-matching equation.

    Both sides are evaluated directly from ``lambda_a`` (h and lambda_c are
    re-derived), independently of how ``lambda_a`` was obtained.
    """
    wn = wavenumbers(freq, media)
    lam = np.asarray(lambda_a, dtype=complex)
    out = _residual(lam, wn.k0, wn.eps_r_cond, media)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DispersionSolution:
    freq: float
    lambda_a: complex
    lambda_c: complex
    h: complex
    iterations: int
    residual: float
    converged: bool = True
    media: MediumParams = None

    @property
    def alpha(self):
        """Attenuation in Np/m."""
        return -self.h.imag

    @property
    def beta(self):
        """Phase constant in rad/m."""
        return self.h.real

    @property
    def alpha_db(self):
        return NEPER_TO_DB * self.alpha

    @property
    def k0(self):
        return float(free_space_wavenumber(self.freq))


CSV_COLUMNS = ("freq_hz", "re_lambda_a", "im_lambda_a", "re_h", "im_h",
               "alpha_np_m", "alpha_db_m", "beta_rad_m", "iterations", "residual")


@dataclass
class DispersionSweep:
    """Solutions over a frequency grid for one conductor."""

    freqs: np.ndarray
    lambda_a: np.ndarray
    lambda_c: np.ndarray
    h: np.ndarray
    iterations: np.ndarray
    residual: np.ndarray
    converged: np.ndarray
    media: MediumParams
    options: SolverOptions = DEFAULT_OPTIONS

    def __len__(self):
        return len(self.freqs)

    def __getitem__(self, i):
        return DispersionSolution(
            freq=float(self.freqs[i]), lambda_a=complex(self.lambda_a[i]),
            lambda_c=complex(self.lambda_c[i]), h=complex(self.h[i]),
            iterations=int(self.iterations[i]), residual=float(self.residual[i]),
            converged=bool(self.converged[i]), media=self.media)

    @property
    def alpha(self):
        return -self.h.imag

    @property
    def beta(self):
        return self.h.real

    @property
    def alpha_db(self):
        return NEPER_TO_DB * self.alpha

    @property
    def k0(self):
        return free_space_wavenumber(self.freqs)

    def records(self):
        for i in range(len(self)):
            yield {
                "freq_hz": float(self.freqs[i]),
                "re_lambda_a": float(self.lambda_a[i].real),
                "im_lambda_a": float(self.lambda_a[i].imag),
                "re_h": float(self.h[i].real),
                "im_h": float(self.h[i].imag),
                "alpha_np_m": float(self.alpha[i]),
                "alpha_db_m": float(self.alpha_db[i]),
                "beta_rad_m": float(self.beta[i]),
                "iterations": int(self.iterations[i]),
                "residual": float(self.residual[i]),
            }

    def to_json(self):
        return json.dumps(list(self.records()))


def _iterate(freqs, media, lam0, opts):
    """Run the fixed-point iteration for every frequency in ``freqs``.

    Returns (lambda_a, iterations, status) where status is 0 converged,
    1 exhausted ``max_iter``, 2 diverged, 3 hit a singular ratio.
    """
    wn = wavenumbers(freqs, media)
    k0 = np.atleast_1d(wn.k0)
    eps_c = np.atleast_1d(wn.eps_r_cond)
    lam = np.array(np.broadcast_to(lam0, k0.shape), dtype=complex)
    start = np.abs(lam).copy()
    n = lam.size
    relax = np.ones(n)
    stall = np.zeros(n, dtype=int)
    prev_step = np.full(n, np.inf)
    iters = np.zeros(n, dtype=int)
    status = np.full(n, 1)
    active = np.ones(n, dtype=bool)

    for _ in range(opts.max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        with np.errstate(all="ignore"):
            g = _rhs(lam[idx], k0[idx], eps_c[idx], media, opts.lambda_c_form)
        iters[idx] += 1
        bad = ~np.isfinite(g)
        step = g - lam[idx]
        size = np.abs(step)
        done = ~bad & (size < opts.rel_tol * np.abs(lam[idx]))
        # plain iteration oscillates slowly when |g'| ~ 1; damp once the
        # step stops shrinking quickly
        slow = size > opts.stall_ratio * prev_step[idx]
        stall[idx] = np.where(slow, stall[idx] + 1, 0)
        relax[idx] = np.where(stall[idx] >= opts.stall_window, opts.relaxation, relax[idx])
        prev_step[idx] = size
        new = np.where(done, g, lam[idx] + relax[idx] * step)
        new = np.where(bad, lam[idx], new)
        lam[idx] = new
        diverged = ~bad & (np.abs(new) > 1e6 * start[idx])
        status[idx[done]] = 0
        status[idx[diverged]] = 2
        status[idx[bad]] = 3
        active[idx[done | diverged | bad]] = False

    return lam, iters, status


def _assemble(freqs, lam, iters, status, media, opts):
    wn = wavenumbers(freqs, media)
    k0 = np.atleast_1d(wn.k0)
    eps_c = np.atleast_1d(wn.eps_r_cond)
    h = _axial(lam, k0, media)
    lc = np.sqrt(k0**2 * eps_c * media.mu_r_cond - h**2)
    res = _residual(lam, k0, eps_c, media)
    ok = (status == 0) & (res < opts.residual_tol) & (lam.imag >= 0)
    return h, lc, res, ok


def _start(freqs, opts):
    return opts.start_factor * free_space_wavenumber(freqs) + 0j


def solve_dispersion(freq, media, opts=DEFAULT_OPTIONS, initial=None):
    """Solve for the principal TM mode at one frequency.

    Args:
        freq: frequency in Hz, within [1 Hz, 1e16 Hz].
        media: conductor and air parameters.
        opts: solver settings.
        initial: starting lambda_a; defaults to ``0.1 k0``.

    Returns:
        DispersionSolution

    Raises:
        ConvergenceError: no convergence within ``opts.max_iter`` or the
            converged point fails the residual or branch check.
        DivergenceError: iterate grew a millionfold over the start value.
    """
    f = float(freq)
    if not F_MIN <= f <= F_MAX:
        raise ValueError(f"frequency {f} Hz outside [{F_MIN}, {F_MAX}] Hz")
    freqs = np.array([f])
    lam0 = _start(freqs, opts) if initial is None else np.array([complex(initial)])
    lam, iters, status = _iterate(freqs, media, lam0, opts)
    h, lc, res, ok = _assemble(freqs, lam, iters, status, media, opts)
    if status[0] == 2:
        raise DivergenceError(f"iteration diverged at {f} Hz", lam[0], res[0], iters[0])
    if not ok[0]:
        raise ConvergenceError(
            f"no converged root at {f} Hz (status {status[0]}, residual {res[0]:.3g})",
            complex(lam[0]), float(res[0]), int(iters[0]))
    return DispersionSolution(freq=f, lambda_a=complex(lam[0]), lambda_c=complex(lc[0]),
                              h=complex(h[0]), iterations=int(iters[0]),
                              residual=float(res[0]), converged=True, media=media)


def sweep(f_grid, media, opts=DEFAULT_OPTIONS, warm_start=False, max_fail_fraction=0.01):
    """Solve over a strictly increasing frequency grid.

    By default every point is cold-started from ``0.1 k0`` and the whole grid
    iterates at once. With ``warm_start=True`` points are solved in order,
    each starting from the previous root. Failed points are flagged in
    ``converged``; the sweep raises only when more than ``max_fail_fraction``
    of the grid fails.
    """
    freqs = np.asarray(f_grid, dtype=float).ravel()
    if freqs.size == 0:
        raise ValueError("empty frequency grid")
    if np.any(np.diff(freqs) <= 0):
        raise ValueError("frequency grid must be strictly increasing")
    if freqs[0] < F_MIN or freqs[-1] > F_MAX:
        raise ValueError(f"frequency grid must lie within [{F_MIN}, {F_MAX}] Hz")

    if warm_start:
        lam = np.empty(freqs.size, dtype=complex)
        iters = np.empty(freqs.size, dtype=int)
        status = np.empty(freqs.size, dtype=int)
        guess = _start(freqs[:1], opts)
        for i in range(freqs.size):
            l, it, st = _iterate(freqs[i:i + 1], media, guess, opts)
            if st[0] != 0:
                # fall back to the cold start before giving up on the point
                l, it2, st = _iterate(freqs[i:i + 1], media, _start(freqs[i:i + 1], opts), opts)
                it = it + it2
            lam[i], iters[i], status[i] = l[0], it[0], st[0]
            if st[0] == 0:
                guess = l
    else:
        lam, iters, status = _iterate(freqs, media, _start(freqs, opts), opts)

    h, lc, res, ok = _assemble(freqs, lam, iters, status, media, opts)
    nfail = int(np.count_nonzero(~ok))
    if nfail:
        log.warning("%d of %d sweep points did not converge", nfail, freqs.size)
    if nfail > max_fail_fraction * freqs.size:
        raise SweepError(f"{nfail} of {freqs.size} points failed to converge")
    return DispersionSweep(freqs=freqs, lambda_a=lam, lambda_c=lc, h=h, iterations=iters,
                           residual=res, converged=ok, media=media, options=opts)
