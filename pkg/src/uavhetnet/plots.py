"""Self-contained SVG line plots of run and sweep results."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "uavhetnet"

_METRIC_LABELS = {
    "mean_delay_s": "mean delay (s)",
    "delay_violation_fraction": "delay violation fraction",
    "p5_spectral_efficiency": "5th percentile SE (bits/s/Hz)",
    "throughput_coverage": "throughput coverage",
    "guaranteed_sinr_probability": "P(SINR >= threshold)",
}


def line_plot(series: dict, xlabel: str, ylabel: str, title: str, path) -> None:
    """Plot named (x, y) series onto one SVG figure."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for label, (xs, ys) in series.items():
        ax.plot(xs, ys, marker="o", markersize=3.5, linewidth=1.3, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.35)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cost_trace_plot(traces: list, path) -> None:
    """Per-epoch overall cost of each replication's accepted mappings."""
    series = {f"replication {i}": (list(range(len(t))), list(t))
              for i, t in enumerate(traces) if len(t)}
    line_plot(series, "epoch", "overall cost", "Mapping cost per epoch", path)


def _series_from_rows(rows, x_key, y_key, label, group_key=None, group_fmt=None):
    """Collect (x, y) series from sweep rows, one per group value."""
    groups: dict = {}
    for row in rows:
        if row.get("error") or row.get(y_key) is None:
            continue
        name = group_fmt(row[group_key]) if group_key else label
        groups.setdefault(name, []).append((row[x_key], row[y_key]))
    return {name: tuple(zip(*sorted(pts))) for name, pts in groups.items() if pts}


def sweep_figures(rows: list[dict], outdir) -> list[str]:
    """Render the standard evaluation figures from sweep rows.

    Expects rows produced by the CLI sweep: extra-user sweeps per altitude
    with and without UAVs, and a path-loss-exponent sweep for both modes.
    """
    import os
    paths = []

    def uav_rows(rs):
        return [r for r in rs if r.get("uavs_enabled")]

    def base_rows(rs):
        return [r for r in rs if r.get("uavs_enabled") is False]

    extra = [r for r in rows if "extra_users" in r]
    alpha = [r for r in rows if "pathloss_exp" in r]

    per_extra = [
        ("fig4_delay_vs_extra_users.svg", "mean_delay_s", "Network delay vs extra users"),
        ("fig6_coverage_vs_extra_users.svg", "throughput_coverage",
         "Throughput coverage vs extra users"),
        ("fig7_p5se_vs_extra_users.svg", "p5_spectral_efficiency",
         "5th percentile SE vs extra users"),
        ("fig9_sinr_prob_vs_extra_users.svg", "guaranteed_sinr_probability",
         "Guaranteed-SINR probability vs extra users"),
    ]
    for fname, metric, title in per_extra:
        series = _series_from_rows(uav_rows(extra), "extra_users", metric, "UAV",
                                   "altitude_ft", lambda v: f"UAV, {v:g} ft")
        series.update(_series_from_rows(base_rows(extra), "extra_users", metric,
                                        "no UAVs"))
        path = os.path.join(outdir, fname)
        line_plot(series, "extra users", _METRIC_LABELS[metric], title, path)
        paths.append(path)

    per_alpha = [
        ("fig5_coverage_vs_pathloss.svg", "throughput_coverage",
         "Throughput coverage vs path loss exponent"),
        ("fig8_p5se_vs_pathloss.svg", "p5_spectral_efficiency",
         "5th percentile SE vs path loss exponent"),
    ]
    for fname, metric, title in per_alpha:
        series = _series_from_rows(uav_rows(alpha), "pathloss_exp", metric, "UAV")
        series.update(_series_from_rows(base_rows(alpha), "pathloss_exp", metric,
                                        "no UAVs"))
        path = os.path.join(outdir, fname)
        line_plot(series, "path loss exponent", _METRIC_LABELS[metric], title, path)
        paths.append(path)

    return paths


def compare_plot(baseline: dict, treated: dict, path) -> None:
    """Side-by-side metric bars for a paired baseline/UAV comparison."""
    keys = list(_METRIC_LABELS)
    fig, axes = plt.subplots(1, len(keys), figsize=(2.4 * len(keys), 3.2))
    for ax, key in zip(axes, keys):
        vals = [baseline.get(key), treated.get(key)]
        vals = [v if v is not None else float("nan") for v in vals]
        ax.bar(["no UAVs", "UAV"], vals, color=["#888888", "#2b7bba"])
        ax.set_title(_METRIC_LABELS[key], fontsize=8)
        ax.tick_params(labelsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
