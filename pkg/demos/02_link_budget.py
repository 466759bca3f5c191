"""Link budget of the aerial downlink: received power, SINR against
co-channel interference, and the line-of-sight footprint per altitude."""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from uavhetnet.channel import (ChannelParams, link_geometry, los_available,
                               rx_power, sinr, spectral_efficiency,
                               watts_to_dbm)
from uavhetnet.scenario import FT_TO_M, Scenario

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

params = ChannelParams.for_uav(Scenario())
print(f"tx power {params.tx_power_w:.3f} W, noise floor {watts_to_dbm(params.noise_power_w):.1f} dBm")

# received power vs slant range
ranges = np.linspace(50, 5000, 200)
rx_dbm = [watts_to_dbm(rx_power(link_geometry([0, 0, r], [0, 0]), params)) for r in ranges]

# SINR of a user moving away from its serving node, one interferer at 3 km
positions = [[0.0, 0.0, 120.0], [3000.0, 0.0, 120.0]]
offsets = np.linspace(0, 1500, 150)
sinr_db = [10 * math.log10(sinr([d, 0.0], 0, positions, params)) for d in offsets]

# LOS footprint radius per altitude at the 10-degree elevation gate
alts_ft = np.linspace(200, 500, 60)
footprint = alts_ft * FT_TO_M / math.tan(params.los_min_elevation_rad)
for ft in (200, 350, 500):
    link = link_geometry([0, 0, ft * FT_TO_M], [ft * FT_TO_M / math.tan(params.los_min_elevation_rad), 0])
    print(f"  {ft:3d} ft: footprint {ft * FT_TO_M / math.tan(params.los_min_elevation_rad):6.0f} m, "
          f"LOS holds at the rim: {los_available(link, params)}")

rate, se = spectral_efficiency(40.19, params, 400)
print(f"round-robin rate at 16 dB SINR shared by 400 users: {rate / 1e3:.1f} kbit/s ({se:.5f} bits/s/Hz)")

fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
axes[0].plot(ranges, rx_dbm)
axes[0].set(xlabel="slant range (m)", ylabel="rx power (dBm)", title="path gain")
axes[1].plot(offsets, sinr_db)
axes[1].set(xlabel="offset from serving node (m)", ylabel="SINR (dB)",
            title="one interferer at 3 km")
axes[2].plot(alts_ft, footprint)
axes[2].set(xlabel="altitude (ft)", ylabel="footprint radius (m)",
            title="LOS footprint at 10 deg")
for ax in axes:
    ax.grid(alpha=0.3)
fig.tight_layout()
path = os.path.join(OUT, "link_budget.svg")
fig.savefig(path)
print("wrote", path)
