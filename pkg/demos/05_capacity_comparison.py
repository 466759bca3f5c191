"""Baseline vs UAV-overlaid network on common random numbers.

Runs the paired experiment at the desk-scale reference defaults and
reports the capacity and delay metrics side by side.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from uavhetnet.metrics import SERVED_UAV
from uavhetnet.runner import RunPlan, run
from uavhetnet.scenario import Scenario

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

scn = Scenario(seed=2)
plan = RunPlan(horizon_steps=1000, epoch_length=100)

with_uavs = run(scn, plan).replications[0]
baseline = run(scn.replace(uavs_enabled=False), plan).replications[0]
mu, mb = with_uavs.metrics, baseline.metrics

offloaded = float(np.mean(with_uavs.table.served_by == SERVED_UAV))
print(f"user-steps offloaded to aerial nodes: {offloaded:.1%}\n")
print(f"{'metric':34s} {'baseline':>12s} {'with UAVs':>12s} {'change':>9s}")
rows = [
    ("mean delay (s)", mb.mean_delay_s, mu.mean_delay_s),
    ("delay violations", mb.delay_violation_fraction, mu.delay_violation_fraction),
    ("5th percentile SE (bits/s/Hz)", mb.p5_spectral_efficiency, mu.p5_spectral_efficiency),
    ("throughput coverage", mb.throughput_coverage, mu.throughput_coverage),
    ("P(SINR >= 0.55)", mb.guaranteed_sinr_probability, mu.guaranteed_sinr_probability),
]
for label, b, u in rows:
    change = (u - b) / b * 100 if b else float("nan")
    print(f"{label:34s} {b:12.5g} {u:12.5g} {change:+8.1f}%")

# distribution views: delay and spectral efficiency CDFs
fig, axes = plt.subplots(1, 2, figsize=(10, 3.8))
for label, rep in (("no UAVs", baseline), ("with UAVs", with_uavs)):
    delays = np.sort(rep.table.delay_total_s[np.isfinite(rep.table.delay_total_s)])
    axes[0].plot(delays, np.linspace(0, 1, len(delays)), label=label)
    se = np.sort(rep.table.se)
    axes[1].semilogx(np.maximum(se, 1e-7), np.linspace(0, 1, len(se)), label=label)
axes[0].axvline(scn.delay_threshold_s, color="r", linestyle=":", linewidth=1)
axes[0].set(xlabel="per-user delay (s)", ylabel="CDF", title="delay distribution")
axes[1].set(xlabel="spectral efficiency (bits/s/Hz)", ylabel="CDF",
            title="spectral efficiency distribution")
for ax in axes:
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
fig.tight_layout()
path = os.path.join(OUT, "capacity_comparison.svg")
fig.savefig(path)
print("\nwrote", path)
