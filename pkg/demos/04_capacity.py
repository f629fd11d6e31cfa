# Gap-adjusted capacity with 1 W spread over 1-100 GHz

from barewire import channel, dispersion
from barewire.capacity import LinkBudget, awgn_capacity, capacity

budget = LinkBudget()
print(f"gap {budget.gap_db:.1f} dB, {budget.n_subchannels} subchannels of "
      f"{budget.subchannel_width / 1e6:g} MHz, noise {budget.noise_psd:g} W/Hz")
print(f"upper bound with a lossless line: {awgn_capacity(budget) / 1e12:.3f} Tbps")

# One dispersion sweep at the subchannel centres serves every distance.

for a in (0.5e-3, 10e-3):
    sw = dispersion.sweep(budget.subchannel_centers(), dispersion.MediumParams.copper(a))
    caps = [capacity(channel.transfer_function(sw, d), budget).capacity_bps for d in (100, 200, 300, 400, 500)]
    print(f"a = {a * 1e3:g} mm: " + "  ".join(f"{c / 1e12:.3f}" for c in caps) + " Tbps at 100..500 m")

# The thick wire stays near 1 Tbps. The thin one loses roughly 0.1 dB/m
# more at the top of the band, which costs most of its capacity beyond 200 m.
