# Surface wave on a bare copper wire, from 1 Hz to 1 PHz
#
# The radial constant outside the wire is found by fixed-point iteration at
# every frequency. From it we get the axial constant h = beta - j alpha.

import numpy as np

from barewire import dispersion

f = np.geomspace(1.0, 1e15, 25)

# Attenuation in dB/m for three radii. Thicker wires lose less at every
# frequency.

for a in (0.5e-3, 2e-3, 20e-3):
    sw = dispersion.sweep(f, dispersion.MediumParams.copper(a))
    print(f"a = {a * 1e3:g} mm: all converged = {sw.converged.all()}, "
          f"worst residual = {sw.residual.max():.1e}")
    for fi, adb, b, k0 in zip(sw.freqs[::4], sw.alpha_db[::4], sw.beta[::4], sw.k0[::4]):
        print(f"  {fi:9.2e} Hz  {adb:10.3e} dB/m  beta/k0 - 1 = {b / k0 - 1:+.2e}")

# Below the optical range the wave is slow (beta > k0), only barely so at
# mmW frequencies. Near 1 PHz beta dips just under k0.

# With a near-perfect conductor the mode detaches from the wire: lambda_a
# shrinks toward zero and h approaches k0.

sol = dispersion.solve_dispersion(30e9, dispersion.MediumParams(1e-3, sigma_cond=1e12))
print(f"sigma = 1e12 S/m, 30 GHz: |lambda_a|/k0 = {abs(sol.lambda_a) / sol.k0:.2e}")
