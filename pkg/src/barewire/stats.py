"""Regression and normality testing for channel ensembles."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

AD_CRITICAL_5PCT = 0.752
MIN_SAMPLES = 8


@dataclass(frozen=True)
class EnsembleRecord:
    radius_a: float
    distance_d: float
    avg_gain_db: float
    rms_ds_s: float


class Ensemble:
    """(radius, distance, average gain, RMS delay spread) records."""

    def __init__(self, records):
        self.records = list(records)
        if any(not r.rms_ds_s > 0 for r in self.records):
            raise ValueError("RMS delay spreads must be positive")

    def __len__(self):
        return len(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def log_rms_ds(self):
        return np.log10(self.column("rms_ds_s"))

    @property
    def avg_gain_db(self):
        return self.column("avg_gain_db")


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    correlation: float

    def __iter__(self):
        return iter((self.slope, self.intercept, self.correlation))


def linreg(x, y):
    """Ordinary least squares ``y = slope * x + intercept`` with Pearson r."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("x and y need equal lengths of at least 2")
    dx = x - x.mean()
    sxx = np.dot(dx, dx)
    if sxx == 0:
        raise ValueError("x is constant")
    dy = y - y.mean()
    syy = np.dot(dy, dy)
    sxy = np.dot(dx, dy)
    slope = sxy / sxx
    intercept = y.mean() - slope * x.mean()
    r = sxy / math.sqrt(sxx * syy) if syy > 0 else 0.0
    return LinearFit(float(slope), float(intercept), float(np.clip(r, -1.0, 1.0)))


@dataclass(frozen=True)
class ADResult:
    statistic: float
    corrected: float
    critical: float
    reject: bool
    n: int

    def as_dict(self):
        return {"statistic": self.statistic, "corrected_statistic": self.corrected,
                "critical_value": self.critical, "reject": self.reject, "n": self.n}


def anderson_darling_normal(samples, alpha=0.05):
    """Anderson-Darling test of normality with mean and variance estimated.

    The statistic is multiplied by ``1 + 0.75/n + 2.25/n**2`` and compared to
    0.752, the 5% point for this case. Only ``alpha=0.05`` is tabulated.
    """
    if alpha != 0.05:
        raise ValueError("only the 5% critical value is tabulated")
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    s = x.std(ddof=1)
    if s == 0:
        raise ValueError("samples are constant")
    z = (x - x.mean()) / s
    cdf = ndtr(z)
    sf = ndtr(-z)  # 1 - cdf without cancellation in the upper tail
    i = np.arange(1, n + 1)
    a2 = -n - np.sum((2 * i - 1) * (np.log(cdf) + np.log(sf[::-1]))) / n
    corrected = a2 * (1.0 + 0.75 / n + 2.25 / n**2)
    return ADResult(float(a2), float(corrected), AD_CRITICAL_5PCT,
                    bool(corrected > AD_CRITICAL_5PCT), int(n))


def build_ensemble(radii, distances, freqs, sigma=None, noise_floor_db=40.0, window="none"):
    """Average gain and RMS delay spread for every (radius, distance) pair.

    One dispersion sweep per radius over the uniform grid ``freqs`` is reused
    for all distances. Records are ordered radius-major.
    """
    from barewire import channel, dispersion

    kw = {} if sigma is None else {"sigma_cond": sigma}
    records = []
    for a in radii:
        sw = dispersion.sweep(np.asarray(freqs, dtype=float), dispersion.MediumParams(radius_a=a, **kw))
        for d in distances:
            resp = channel.transfer_function(sw, d)
            ir = channel.impulse_response(resp, window=window, noise_floor_db=noise_floor_db)
            records.append(EnsembleRecord(float(a), float(d), channel.average_gain_db(resp), ir.rms_ds))
    return Ensemble(records)
