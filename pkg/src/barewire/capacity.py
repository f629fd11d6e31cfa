"""Gap-adjusted Shannon capacity of a line under a flat noise floor."""

from dataclasses import asdict, dataclass

import numpy as np

from barewire.channel import BandGrid

SHANNON_GAP_DB = 9.8


def dbm_per_hz_to_w(value_dbm):
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def snr_gap_db(gamma_m, gamma_c):
    """Gap in dB: 9.8 + margin - coding gain."""
    return SHANNON_GAP_DB + gamma_m - gamma_c


def snr_gap_linear(gamma_m, gamma_c):
    return 10.0 ** (snr_gap_db(gamma_m, gamma_c) / 10.0)


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power, noise and coding assumptions for one link.

    Defaults: 1 W over 1-100 GHz, -120 dBm/Hz white noise, 6 dB margin,
    8.8 dB coding gain, 12 b/s/Hz cap, 9900 subchannels (10 MHz each).
    """

    total_power: float = 1.0
    noise_psd: float = dbm_per_hz_to_w(-120.0)
    gamma_m: float = 6.0
    gamma_c: float = 8.8
    se_cap: float = 12.0
    band: BandGrid = BandGrid(1e9, 100e9, 9901)
    n_subchannels: int = 9900

    def __post_init__(self):
        if not self.total_power > 0:
            raise ValueError("total_power must be positive")
        if not self.noise_psd > 0:
            raise ValueError("noise_psd must be positive")
        if not self.se_cap > 0:
            raise ValueError("se_cap must be positive")
        if self.n_subchannels < 1:
            raise ValueError("need at least one subchannel")

    @property
    def gap_db(self):
        return snr_gap_db(self.gamma_m, self.gamma_c)

    @property
    def gap(self):
        return snr_gap_linear(self.gamma_m, self.gamma_c)

    @property
    def subchannel_width(self):
        return self.band.width / self.n_subchannels

    def subchannel_centers(self):
        return self.band.f_lo + (np.arange(self.n_subchannels) + 0.5) * self.subchannel_width

    def as_dict(self):
        d = asdict(self)
        d["band"] = asdict(self.band)
        d["gap_db"] = self.gap_db
        d["subchannel_width_hz"] = self.subchannel_width
        return d


@dataclass
class CapacityReport:
    capacity_bps: float
    f_center: np.ndarray
    snr_db: np.ndarray
    efficiency: np.ndarray
    capped: np.ndarray
    budget: LinkBudget

    def records(self):
        for f, s, e, c in zip(self.f_center, self.snr_db, self.efficiency, self.capped):
            yield {"f_center_hz": float(f), "snr_db": float(s),
                   "bits_per_s_per_hz": float(e), "capped": bool(c)}

    def summary(self):
        return {"capacity_bps": self.capacity_bps, "budget": self.budget.as_dict()}


def _gain_at(resp, centers):
    freqs = np.asarray(resp.freqs)
    g2 = np.abs(resp.H) ** 2
    if freqs.size == centers.size and np.allclose(freqs, centers, rtol=1e-12, atol=0):
        return g2
    # interpolate the dB gain, which is smooth in frequency
    with np.errstate(divide="ignore"):
        gdb = 10.0 * np.log10(g2)
    return 10.0 ** (np.interp(centers, freqs, gdb) / 10.0)


def capacity(resp, budget=LinkBudget()):
    """Capacity ``df * sum_k min(log2(1 + SNR_k / gap), cap)`` in bit/s.

    Power is spread uniformly over the band (PSD ``P / W``) and the
    per-subchannel SNR is ``(P / W) |H(f_k)|^2 / N0`` at each subchannel
    centre. The response is used directly when its grid is the set of
    subchannel centres, otherwise its dB gain is interpolated.
    """
    band = budget.band
    freqs = np.asarray(resp.freqs)
    if freqs[0] > band.f_lo + 0.5 * budget.subchannel_width or freqs[-1] < band.f_hi - 0.5 * budget.subchannel_width:
        raise ValueError("channel response does not cover the budget band")
    centers = budget.subchannel_centers()
    gain = _gain_at(resp, centers)
    snr = budget.total_power / band.width * gain / budget.noise_psd
    raw = np.log2(1.0 + snr / budget.gap)
    eff = np.minimum(raw, budget.se_cap)
    capped = raw > budget.se_cap
    with np.errstate(divide="ignore"):
        snr_db = 10.0 * np.log10(snr)
    c = float(budget.subchannel_width * np.sum(eff))
    return CapacityReport(capacity_bps=c, f_center=centers, snr_db=snr_db,
                          efficiency=eff, capped=capped, budget=budget)


def awgn_capacity(budget=LinkBudget(), gain=1.0):
    """Closed form for a flat channel: ``W min(log2(1 + P g / (W N0 gap)), cap)``."""
    w = budget.band.width
    se = np.log2(1.0 + budget.total_power * gain / (w * budget.noise_psd * budget.gap))
    return float(w * min(se, budget.se_cap))
