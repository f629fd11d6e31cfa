import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barewire import channel as C
from barewire import dispersion as D


@pytest.fixture(scope="module")
def grid_sweep():
    f = np.linspace(1e9, 100e9, 991)
    return D.sweep(f, D.MediumParams.copper(1e-3))


def synthetic_response(freqs, H, d=0.0):
    return C.ChannelResponse(freqs=np.asarray(freqs, float), H=np.asarray(H, complex), distance_d=d,
                             radius_a=float("nan"))


def test_zero_length_is_identity(grid_sweep):
    resp = C.transfer_function(grid_sweep, 0.0)
    assert np.all(resp.H == 1)


def test_gain_matches_modulus(grid_sweep):
    resp = C.transfer_function(grid_sweep, 250.0)
    assert np.allclose(resp.gain_db, C.gain_db(grid_sweep, 250.0), rtol=1e-12, atol=1e-12)


@given(st.floats(0.0, 500.0), st.floats(0.0, 500.0))
@settings(max_examples=30, deadline=None)
def test_cascade_additivity(d1, d2):
    sw = D.sweep(np.linspace(1e9, 100e9, 11), D.MediumParams.copper(2e-3))
    total = C.gain_db(sw, d1 + d2)
    assert np.allclose(total, C.gain_db(sw, d1) + C.gain_db(sw, d2), rtol=1e-13, atol=0)
    h = C.transfer_function(sw, d1).H * C.transfer_function(sw, d2).H
    ref = C.transfer_function(sw, d1 + d2).H
    # phases reach ~1e6 rad, so rounding in the exponent limits agreement to ~1e-10
    assert np.all(np.abs(h - ref) <= 1e-9 * np.abs(ref))


def test_negative_distance_rejected(grid_sweep):
    with pytest.raises(ValueError):
        C.transfer_function(grid_sweep, -1.0)


def test_power_law_fit_recovers_exact_model():
    f = np.linspace(1e9, 100e9, 200)
    m0, q0 = -0.66, 7.66
    loss = 10.0 ** (-q0) * f ** (-m0)
    for method in ("db", "loglog"):
        fp = C.fit_power_law(f, loss, method=method)
        assert abs(fp.m - m0) < 1e-9 and abs(fp.q - q0) < 1e-9
        assert fp.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_on_thin_wire(band_sweep_thin):
    fp = C.fit_loglog(band_sweep_thin)
    assert abs(fp.m + 0.66) < 0.05 and abs(fp.q - 7.66) < 0.2


def test_fit_model_tracks_true_gain(band_sweep_thin):
    fp = C.fit_loglog(band_sweep_thin)
    f = band_sweep_thin.freqs
    assert np.max(np.abs(fp.gain_db(f, 100.0) - C.gain_db(band_sweep_thin, 100.0))) < 1.0


def test_fit_independent_of_reference_length(band_sweep_thin):
    a = C.fit_loglog(band_sweep_thin, d_ref=1.0)
    b = C.fit_loglog(band_sweep_thin, d_ref=100.0)
    assert abs(a.m - b.m) < 1e-8 and abs(a.q - b.q) < 1e-8


def test_fit_rejects_degenerate_input():
    f = np.linspace(1e9, 2e9, 5)
    with pytest.raises(ValueError):
        C.fit_power_law(f, np.full(5, 0.3))
    with pytest.raises(ValueError):
        C.fit_power_law(f, np.zeros(5))
    with pytest.raises(ValueError):
        C.fit_power_law(f, f * 1e-10, method="spline")


def test_parseval(grid_sweep):
    for d, window in ((100.0, "none"), (400.0, "raised-cosine-edge")):
        resp = C.transfer_function(grid_sweep, d)
        ir = C.impulse_response(resp, window=window)
        assert ir.energy() == pytest.approx(C.spectral_energy(resp, window), rel=1e-6)


def test_impulse_response_is_real_and_sampled(grid_sweep):
    ir = C.impulse_response(C.transfer_function(grid_sweep, 100.0))
    assert ir.h_t.dtype == float
    assert np.allclose(np.diff(ir.t), ir.dt)
    assert ir.window == "none" and ir.noise_floor_db == 40.0


def test_pure_delay():
    f = np.linspace(1e9, 100e9, 991)
    tau = 3.2e-9
    resp = synthetic_response(f, np.exp(-2j * np.pi * f * tau))
    ir = C.impulse_response(resp, reference_delay=0.0)
    t_peak, amp = ir.peak()
    assert abs(t_peak - tau) <= ir.dt
    # only the band-limitation sidelobes within the 40 dB floor contribute
    assert ir.rms_ds < 2.0 / (f[-1] - f[0])


def test_bulk_delay_removal_preserves_shape(grid_sweep):
    resp = C.transfer_function(grid_sweep, 50.0)
    shifted = C.impulse_response(resp)
    assert shifted.peak()[0] == pytest.approx(50.0 / 299792458.0, abs=1e-9)


def test_pulse_ordering_with_distance():
    f = np.linspace(1e9, 100e9, 991)
    sw = D.sweep(f, D.MediumParams.copper(0.5e-3))
    peaks, spreads = [], []
    for d in range(50, 501, 50):
        ir = C.impulse_response(C.transfer_function(sw, float(d)))
        peaks.append(ir.peak()[1])
        spreads.append(ir.rms_ds)
    assert np.all(np.diff(peaks) < 0)
    assert np.all(np.diff(spreads) > 0)


def test_impulse_response_needs_uniform_grid():
    f = np.geomspace(1e9, 100e9, 50)
    with pytest.raises(ValueError, match="uniform"):
        C.impulse_response(synthetic_response(f, np.ones(50)))


def test_impulse_response_rejects_short_transform(grid_sweep):
    with pytest.raises(ValueError):
        C.impulse_response(C.transfer_function(grid_sweep, 1.0), n_fft=64)


def test_delay_spread_examples():
    t = np.arange(8) * 1e-9
    single = np.zeros(8)
    single[3] = 1.0
    assert C.rms_delay_spread((t, single)) == 0.0
    pair = np.zeros(8)
    pair[0] = pair[4] = 1.0
    assert C.rms_delay_spread((t, pair)) == pytest.approx(2e-9, rel=1e-12)


def test_delay_spread_needs_signal():
    with pytest.raises(ValueError):
        C.rms_delay_spread((np.arange(4.0), np.zeros(4)))


def test_average_gain_examples():
    assert C.average_gain_db(np.ones(10)) == 0.0
    assert C.average_gain_db(np.full(10, 0.1)) == pytest.approx(-20.0, abs=1e-12)
    with pytest.raises(ValueError):
        C.average_gain_db(np.array([]))


def test_band_grid():
    g = C.BandGrid.with_step(1e9, 100e9, 1e8)
    assert g.n_points == 991 and g.width == 99e9
    assert np.allclose(np.diff(g.frequencies()), 1e8)
    with pytest.raises(ValueError):
        C.BandGrid(2e9, 1e9, 10)
    with pytest.raises(ValueError):
        C.BandGrid(1e9, 2e9, 10, "cubic")
