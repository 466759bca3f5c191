"""Hexagonal cell geometry and demand-driven zone partitioning.

Builds the macro cell, splits it along guider rays for three demand
patterns, places users, and draws the result.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from uavhetnet.scenario import (build_hex_cell, hex_area, hex_center,
                                min_uav_count, partition_zones, place_users,
                                zone_index_of)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cell = build_hex_cell((0.0, 0.0), 5000.0)
print(f"hexagonal cell, radius 5000 m, area {hex_area(5000.0) / 1e6:.2f} km^2")
print(f"minimum UAVs for 450 requests at 200 each: {min_uav_count(450, 200)}")

patterns = {
    "uniform demand": np.ones(6),
    "hot north-east sector": np.array([0.5, 4.0, 0.5, 0.5, 0.5, 0.5]),
    "two hot sectors": np.array([3.0, 0.3, 0.3, 2.0, 0.3, 0.3]),
}

fig, axes = plt.subplots(1, 3, figsize=(13, 4.2))
rng = np.random.default_rng(7)
for ax, (label, weights) in zip(axes, patterns.items()):
    zones = partition_zones(cell, weights, 6)
    users = place_users(cell, zones, 400, weights / weights.sum() + 0.02, rng)
    xy = np.array([u.position for u in users])
    idx = zone_index_of(zones, xy, hex_center(cell))
    for z in zones:
        poly = np.vstack([z.polygon, z.polygon[0]])
        ax.plot(poly[:, 0], poly[:, 1], color="#444444", linewidth=0.8)
        members = xy[idx == z.zone_id]
        ax.scatter(members[:, 0], members[:, 1], s=4)
        print(f"  {label}: zone {z.zone_id} spans "
              f"{np.degrees(z.guider_angles[0]):6.1f}..{np.degrees(z.guider_angles[1]):6.1f} deg, "
              f"{len(members)} users")
    ax.set_title(label, fontsize=9)
    ax.set_aspect("equal")
    ax.axis("off")

fig.tight_layout()
path = os.path.join(OUT, "cell_partitioning.svg")
fig.savefig(path)
print("wrote", path)
