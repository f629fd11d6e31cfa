"""Channel transfer function, power-law attenuation fit, impulse response.

A line of length ``d`` has ``H(f) = exp(-j h(f) d)``; its gain in dB is
``20 log10(e) Im[h] d`` (negative). Over a band the dB loss per metre is well
described by the power law ``-H_dB = 10**(-q) * f**(-m) * d``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.constants import speed_of_light
from scipy.optimize import least_squares

from barewire.dispersion import NEPER_TO_DB


@dataclass(frozen=True)
class BandGrid:
    f_lo: float
    f_hi: float
    n_points: int
    spacing: str = "linear"

    def __post_init__(self):
        if not self.f_lo > 0:
            raise ValueError("f_lo must be positive")
        if not self.f_hi > self.f_lo:
            raise ValueError("f_hi must exceed f_lo")
        if self.n_points < 2:
            raise ValueError("need at least two grid points")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def frequencies(self):
        if self.spacing == "log":
            return np.geomspace(self.f_lo, self.f_hi, self.n_points)
        return np.linspace(self.f_lo, self.f_hi, self.n_points)

    @property
    def width(self):
        return self.f_hi - self.f_lo

    @classmethod
    def with_step(cls, f_lo, f_hi, step):
        n = int(round((f_hi - f_lo) / step)) + 1
        return cls(f_lo, f_hi, n, "linear")


def _uniform_step(freqs, rtol=1e-9):
    d = np.diff(freqs)
    if d.size == 0 or np.any(np.abs(d - d.mean()) > rtol * d.mean() + 1e-6):
        return None
    return float((freqs[-1] - freqs[0]) / (freqs.size - 1))


@dataclass
class ChannelResponse:
    freqs: np.ndarray
    H: np.ndarray
    distance_d: float
    radius_a: float

    @property
    def gain_db(self):
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.H))

    @property
    def phase(self):
        return np.angle(self.H)

    @property
    def df(self):
        return _uniform_step(self.freqs)

    def records(self):
        for f, g, p in zip(self.freqs, self.gain_db, self.phase):
            yield {"freq_hz": float(f), "gain_db": float(g), "phase_rad": float(p)}


def transfer_function(sweep, d):
    """``H(f) = exp(-j h(f) d)`` over the sweep grid for a line of ``d`` metres."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    H = np.exp(-1j * sweep.h * d)
    return ChannelResponse(freqs=sweep.freqs.copy(), H=H, distance_d=float(d),
                           radius_a=sweep.media.radius_a)


def gain_db(sweep, d):
    """``20 log10(e) Im[h] d`` directly from the propagation constants."""
    return NEPER_TO_DB * sweep.h.imag * d


@dataclass
class FitParams:
    m: float
    q: float
    radius_a: float
    f_lo: float
    f_hi: float
    r_squared: float
    method: str

    def loss_db(self, f, d=1.0):
        """Model loss ``10**(-q) f**(-m) d`` in dB (positive number)."""
        return 10.0 ** (-self.q) * np.asarray(f, dtype=float) ** (-self.m) * d

    def gain_db(self, f, d=1.0):
        return -self.loss_db(f, d)


def fit_power_law(freqs, loss_db_per_m, method="db", radius_a=float("nan")):
    """Fit ``loss = 10**(-q) f**(-m)`` to per-metre dB losses.

    ``method="loglog"`` is the ordinary regression of ``-log10(loss)`` on
    ``log10(f)``. ``method="db"`` (default) starts from that regression and
    refines (m, q) by least squares on the dB loss itself, which weights the
    band by the error in the quantity the model predicts.
    ``r_squared`` always refers to the log-log line.
    """
    f = np.asarray(freqs, dtype=float)
    y_lin = np.asarray(loss_db_per_m, dtype=float)
    if np.any(y_lin <= 0):
        raise ValueError("loss must be strictly positive (gain strictly negative) over the band")
    x = np.log10(f)
    y = -np.log10(y_lin)
    if np.ptp(y) == 0 or np.ptp(x) == 0:
        raise ValueError("degenerate fit: constant gain or single frequency")
    m, q = np.polyfit(x, y, 1)
    if method == "db":
        scale = y_lin.max()
        sol = least_squares(lambda p: (10.0 ** (-p[1] - p[0] * x) - y_lin) / scale,
                            x0=[m, q], xtol=1e-15, ftol=1e-15, gtol=1e-15)
        m, q = sol.x
    elif method != "loglog":
        raise ValueError(f"unknown fit method {method!r}")
    pred = m * x + q
    ss_res = np.sum((y - pred) ** 2)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return FitParams(m=float(m), q=float(q), radius_a=radius_a, f_lo=float(f[0]),
                     f_hi=float(f[-1]), r_squared=float(r2), method=method)


def fit_loglog(sweep, d_ref=1.0, method="db"):
    """Power-law fit of the line loss over the sweep's band at ``d_ref`` metres.

    The loss is divided by ``d_ref`` before fitting, so (m, q) describe the
    per-metre law and do not depend on the reference length.
    """
    loss = -gain_db(sweep, d_ref) / d_ref
    return fit_power_law(sweep.freqs, loss, method=method, radius_a=sweep.media.radius_a)


@dataclass
class ImpulseResponse:
    t: np.ndarray
    h_t: np.ndarray
    distance_d: float
    dt: float
    n_fft: int
    window: str
    reference_delay: float
    rms_ds: float = float("nan")
    mean_delay: float = float("nan")
    noise_floor_db: float = float("nan")

    def energy(self):
        return float(np.sum(self.h_t**2) * self.dt)

    def peak(self):
        i = int(np.argmax(np.abs(self.h_t)))
        return float(self.t[i]), float(abs(self.h_t[i]))

    def records(self):
        for t, v in zip(self.t, self.h_t):
            yield {"t_s": float(t), "amplitude": float(v)}


def band_taper(n, fraction=0.05):
    """Raised-cosine ramps over ``fraction`` of the band at each edge."""
    w = np.ones(n)
    k = max(int(round(fraction * n)), 1)
    ramp = 0.5 * (1.0 - np.cos(np.pi * (np.arange(k) + 0.5) / k))
    w[:k] = ramp
    w[n - k:] = ramp[::-1]
    return w


def _spectrum_slot(resp):
    df = resp.df
    if df is None:
        raise ValueError("impulse response needs a uniform linear frequency grid; resample first")
    k0 = resp.freqs[0] / df
    if abs(k0 - round(k0)) > 1e-6:
        raise ValueError("grid must be aligned to multiples of its step (f_lo = k * df)")
    return df, int(round(k0))


def impulse_response(resp, n_fft=None, window="none", reference_delay=None, noise_floor_db=40.0):
    """Real passband impulse response of a band-limited channel.

    The band is treated as a real passband signal: the spectrum is zero
    outside [f_lo, f_hi], extended Hermitian-symmetrically, and inverted with
    a real FFT of length ``n_fft``. Amplitudes approximate the continuous
    response (units 1/s), so ``sum(h**2) * dt`` equals the two-sided
    spectral energy ``2 df sum |H|^2``.

    The bulk delay ``reference_delay`` (default ``d / c``) is removed before
    the inverse transform and added back to the time axis, so the window only
    has to hold the excess delay. A quarter of the window is kept before the
    reference for precursor sidelobes.

    Args:
        resp: response on a uniform grid with ``f_lo`` a multiple of the step.
        n_fft: transform length; default 16 x the next power of two above the
            number of bins from 0 to ``f_hi``.
        window: ``"none"`` or ``"raised-cosine-edge"`` (5% ramps at each band edge).
        reference_delay: seconds; ``0`` keeps absolute time from the origin.
        noise_floor_db: floor used for the attached delay-spread figures.
    """
    df, k0 = _spectrum_slot(resp)
    nbins = k0 + resp.freqs.size
    if n_fft is None:
        n_fft = 16 * (1 << int(np.ceil(np.log2(nbins))))
    if n_fft < 2 * nbins:
        raise ValueError(f"n_fft must be at least {2 * nbins}")
    if reference_delay is None:
        reference_delay = resp.distance_d / speed_of_light

    H = resp.H * np.exp(2j * np.pi * resp.freqs * reference_delay)
    if window == "raised-cosine-edge":
        H = H * band_taper(H.size)
    elif window != "none":
        raise ValueError(f"unknown window {window!r}")

    X = np.zeros(n_fft // 2 + 1, dtype=complex)
    X[k0:nbins] = H
    h = np.fft.irfft(X, n_fft) * n_fft * df
    dt = 1.0 / (n_fft * df)
    lead = n_fft // 4
    h = np.roll(h, lead)
    t = reference_delay + (np.arange(n_fft) - lead) * dt
    ir = ImpulseResponse(t=t, h_t=h, distance_d=resp.distance_d, dt=dt, n_fft=n_fft,
                         window=window, reference_delay=float(reference_delay))
    ir.mean_delay, ir.rms_ds = delay_moments(ir, noise_floor_db)
    ir.noise_floor_db = noise_floor_db
    return ir


def spectral_energy(resp, window="none"):
    """Two-sided energy ``2 df sum |H|^2`` of the band-limited response."""
    H = resp.H if window == "none" else resp.H * band_taper(resp.H.size)
    return float(2.0 * resp.df * np.sum(np.abs(H) ** 2))


def delay_moments(ir, noise_floor_db=40.0):
    """Mean delay and RMS delay spread of the power-delay profile.

    Only samples whose power is within ``noise_floor_db`` of the peak take
    part; band-limitation sidelobes below the floor would otherwise make the
    second moment grow with the window length.
    """
    t = np.asarray(ir.t if hasattr(ir, "t") else ir[0], dtype=float)
    h = np.asarray(ir.h_t if hasattr(ir, "h_t") else ir[1])
    p = np.abs(h) ** 2
    peak = p.max()
    if not peak > 0:
        raise ValueError("impulse response is identically zero")
    keep = p >= peak * 10.0 ** (-noise_floor_db / 10.0)
    if not np.any(keep):
        raise ValueError("no samples above the noise floor")
    # measure from the first retained sample to keep the moments well conditioned
    t0 = t[keep][0]
    tk = t[keep] - t0
    w = p[keep] / p[keep].sum()
    mean = np.sum(tk * w)
    var = max(np.sum(tk**2 * w) - mean**2, 0.0)
    return float(mean + t0), float(np.sqrt(var))


def rms_delay_spread(ir, noise_floor_db=40.0):
    """Square root of the second central moment of the power-delay profile (s)."""
    return delay_moments(ir, noise_floor_db)[1]


def average_gain_db(resp):
    """``10 log10(mean |H(f_i)|^2)`` over the response grid."""
    H = np.asarray(resp.H if hasattr(resp, "H") else resp)
    if H.size == 0:
        raise ValueError("empty response")
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(np.mean(np.abs(H) ** 2)))
