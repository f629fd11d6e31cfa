# Delay spread against mean gain over a grid of radii and distances

import numpy as np

from barewire import stats

f = np.linspace(1e9, 100e9, 991)
radii = (0.5e-3, 1e-3, 2e-3, 5e-3, 10e-3, 20e-3)
distances = [float(d) for d in range(50, 501, 50)]
ens = stats.build_ensemble(radii, distances, f)

fit = stats.linreg(ens.avg_gain_db, ens.log_rms_ds)
print(f"log10(RMS-DS) = {fit.slope:.4f} * G_dB + {fit.intercept:.3f}   r = {fit.correlation:.4f}")

# The relation is close to a straight line. Whether the grid values look
# normally distributed is a separate question.

for name, x in (("log10 RMS-DS", ens.log_rms_ds), ("G_dB", ens.avg_gain_db)):
    ad = stats.anderson_darling_normal(x)
    print(f"{name:13s} A2* = {ad.corrected:.3f}  critical {ad.critical}  reject = {ad.reject}")

# A regular grid of distances gives nearly uniform gains, so the test
# rejects normality here.
