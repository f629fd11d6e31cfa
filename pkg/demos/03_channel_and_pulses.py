# Transfer function, power-law loss and impulse response of a 1-100 GHz link

import numpy as np

from barewire import channel, dispersion

f = np.linspace(1e9, 100e9, 991)
sw = dispersion.sweep(f, dispersion.MediumParams.copper(0.5e-3))

# Loss per metre follows a power law in frequency closely. The fit below is
# least squares on the dB loss; "loglog" gives the plain log-log regression.

for method in ("db", "loglog"):
    fp = channel.fit_loglog(sw, method=method)
    print(f"{method:7s} m = {fp.m:.4f}  q = {fp.q:.4f}  R^2(log-log) = {fp.r_squared:.5f}")

# Pulses broaden and shrink as they travel. The bulk delay d/c is taken out
# before the inverse FFT and put back on the time axis.

for d in (50.0, 100.0, 250.0, 500.0):
    resp = channel.transfer_function(sw, d)
    ir = channel.impulse_response(resp)
    t_pk, amp = ir.peak()
    print(f"d = {d:5.0f} m  peak {amp:.3e} at {t_pk * 1e9:.3f} ns  "
          f"RMS-DS {ir.rms_ds * 1e12:.2f} ps  mean gain {channel.average_gain_db(resp):.1f} dB")

# Energy is conserved between the two domains.

resp = channel.transfer_function(sw, 100.0)
ir = channel.impulse_response(resp)
print(f"time energy {ir.energy():.6e}  spectral energy {channel.spectral_energy(resp):.6e}")
