"""Demand density functions and the deployment cost they induce.

Shows how the zone density reacts to the request count and active-user
ratio, the converged verification ceiling, and the admission check.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from uavhetnet.cost import (admission_constraint, cost_area, density_area,
                            density_area_average, density_uav)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

requests = np.arange(0, 61)
fig, axes = plt.subplots(1, 2, figsize=(10, 3.8))

for ratio in (0.33, 0.66, 1.0):
    dens = [density_area(ratio * 1200, 1200, int(k)) for k in requests]
    axes[0].semilogy(requests, np.maximum(dens, 1e-120), label=f"x/Tr = {ratio:.2f}")
ceiling = [density_area_average(int(k)) for k in requests]
axes[0].semilogy(requests, np.maximum(ceiling, 1e-120), "k--", label="converged ceiling")
axes[0].set(xlabel="service requests per zone", ylabel="zone density",
            title="zone demand density")
axes[0].legend(fontsize=8)

for la in (50, 200, 400):
    dens = [density_uav(la, 6, int(k)) for k in requests * 2]
    axes[1].semilogy(requests * 2, np.maximum(dens, 1e-120), label=f"area load {la}")
axes[1].set(xlabel="per-node request book", ylabel="fleet density",
            title="fleet demand density")
axes[1].legend(fontsize=8)
for ax in axes:
    ax.grid(alpha=0.3)
fig.tight_layout()
path = os.path.join(OUT, "demand_costs.svg")
fig.savefig(path)
print("wrote", path)

print("\nzone cost scales with load and request pressure:")
for la in (0.5, 1.0, 2.0):
    c = cost_area(0.1, la, 30, 1200, 1.0, 1.0)
    print(f"  load {la:.1f} -> cost {c:.1f}")

print("\nadmission check (handled vs dropped requests):")
full = admission_constraint(np.ones(40), np.zeros(40), 1200, 1200)
parted = admission_constraint(np.r_[np.ones(20), np.zeros(20)], np.zeros(40), 960, 1200)
failed = admission_constraint(np.zeros(8), np.ones(8), 1200, 1200)
print(f"  all handled:   ok={full.ok}  deviation={full.deviation:.3f}")
print(f"  half handled:  ok={parted.ok}  deviation={parted.deviation:.3f}")
print(f"  all dropped:   ok={failed.ok}  infeasible={failed.infeasible}")
