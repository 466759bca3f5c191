"""Command-line interface: run, sweep, compare and report."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import plots
from .metrics import StepTable, report_from_table
from .runner import RunPlan, run, sweep, write_outputs
from .scenario import Scenario

_SWEEP_AXIS_ORDER = ("extra_users", "altitude_ft", "pathloss_exp", "uavs_enabled")
_METRIC_KEYS = ("mean_delay_s", "delay_violation_fraction", "p5_spectral_efficiency",
                "throughput_coverage", "guaranteed_sinr_probability")


def _load_scenario(args) -> Scenario:
    scn = Scenario.from_config(args.config) if args.config else Scenario()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "uavs", None) is not None:
        overrides["uavs_enabled"] = args.uavs == "on"
    return scn.replace(**overrides) if overrides else scn


def _plan(args) -> RunPlan:
    return RunPlan(horizon_steps=args.horizon, epoch_length=args.epoch_length,
                   replications=args.replications)


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_run(args) -> int:
    scenario = _load_scenario(args)
    result = run(scenario, _plan(args))
    paths = write_outputs(result, args.out)
    plots.cost_trace_plot([r.metrics.cost_trace for r in result.replications],
                          os.path.join(args.out, "cost_trace.svg"))
    print(json.dumps({"out": args.out, "files": sorted(paths.values()),
                      "summary": result.summary()}, indent=2, sort_keys=True))
    return 0


def cmd_compare(args) -> int:
    scenario = _load_scenario(args)
    plan = _plan(args)
    results = {}
    for label, enabled in (("baseline", False), ("uav", True)):
        res = run(scenario.replace(uavs_enabled=enabled), plan)
        write_outputs(res, os.path.join(args.out, label))
        results[label] = res

    base = results["baseline"].summary()
    uav = results["uav"].summary()

    def gain(key, sign):
        b, u = base[key]["mean"], uav[key]["mean"]
        if b in (None, 0) or u is None:
            return None
        return sign * (b - u) / b * 100.0

    payload = {
        "baseline": base,
        "uav": uav,
        "improvement_pct": {
            "mean_delay_reduction": gain("mean_delay_s", 1),
            "p5_spectral_efficiency_gain": gain("p5_spectral_efficiency", -1),
            "throughput_coverage_gain": gain("throughput_coverage", -1),
        },
    }
    _write_json(os.path.join(args.out, "compare.json"), payload)
    flat_base = {k: base[k]["mean"] for k in _METRIC_KEYS}
    flat_uav = {k: uav[k]["mean"] for k in _METRIC_KEYS}
    plots.compare_plot(flat_base, flat_uav, os.path.join(args.out, "compare_metrics.svg"))
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _csv_list(text, cast):
    return [cast(v) for v in text.split(",") if v.strip() != ""]


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    plan = RunPlan(horizon_steps=args.horizon, epoch_length=args.epoch_length,
                   replications=args.replications, record_steps=False)
    extra = _csv_list(args.extra_users, int)
    altitudes = _csv_list(args.altitudes, float)
    alphas = _csv_list(args.alphas, float)

    rows = []
    rows += sweep(scenario, {"extra_users": extra, "altitude_ft": altitudes,
                             "uavs_enabled": [True]}, plan)
    rows += sweep(scenario, {"extra_users": extra, "uavs_enabled": [False]}, plan)
    rows += sweep(scenario, {"pathloss_exp": alphas,
                             "uavs_enabled": [True, False]}, plan)

    os.makedirs(args.out, exist_ok=True)
    columns = [a for a in _SWEEP_AXIS_ORDER if any(a in r for r in rows)]
    columns += [k for key in _METRIC_KEYS for k in (key, key + "_std")] + ["error"]
    path = os.path.join(args.out, "sweep.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])
    figures = plots.sweep_figures(rows, args.out)
    print(json.dumps({"out": args.out, "points": len(rows),
                      "files": sorted([path] + figures)}, indent=2, sort_keys=True))
    return 0


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def cmd_report(args) -> int:
    scenario = _load_scenario(args)
    steps_path = args.steps or os.path.join(args.out, "steps.csv")
    table = StepTable.read_csv(steps_path)
    traces = _read_cost_traces(args.costs or os.path.join(os.path.dirname(steps_path), "costs.csv"))

    reports = []
    for rep in np.unique(table.replication):
        mask = table.replication == rep
        sub = StepTable()
        for name in sub.__dataclass_fields__:
            setattr(sub, name, getattr(table, name)[mask])
        metrics = report_from_table(sub, scenario.delay_threshold_s,
                                    scenario.sinr_threshold,
                                    scenario.se_coverage_threshold,
                                    traces.get(int(rep), ()))
        reports.append({"replication": int(rep), "metrics": metrics.to_dict()})

    payload = {"source": steps_path, "replications": reports}
    out_path = os.path.join(args.out, "metrics.json") if args.out else None
    if out_path:
        os.makedirs(args.out, exist_ok=True)
        _write_json(out_path, payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _read_cost_traces(path) -> dict:
    traces: dict[int, list] = {}
    if not path or not os.path.exists(path):
        return {}
    seen = set()
    with open(path, "r", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (int(row["replication"]), int(row["epoch"]))
            if key in seen:
                continue
            seen.add(key)
            traces.setdefault(key[0], []).append(float(row["total_cost"]))
    return traces


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavhetnet",
        description="UAV-assisted heterogeneous network capacity simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_uavs=True):
        p.add_argument("--config", help="flat JSON scenario config")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        if with_uavs:
            p.add_argument("--uavs", choices=("on", "off"),
                           help="override the UAV overlay toggle")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--replications", type=int, default=1)
        p.add_argument("--horizon", type=int, default=1000, help="steps per run")
        p.add_argument("--epoch-length", type=int, default=100, dest="epoch_length",
                       help="steps between re-mapping epochs")

    p_run = sub.add_parser("run", help="one experiment, with outputs")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="paired baseline vs UAV runs")
    common(p_cmp, with_uavs=False)
    p_cmp.set_defaults(func=cmd_compare)

    p_swp = sub.add_parser("sweep", help="parameter sweeps and figures")
    common(p_swp, with_uavs=False)
    p_swp.add_argument("--extra-users", default="0,100,200,300,400", dest="extra_users")
    p_swp.add_argument("--altitudes", default="200,350,500", help="altitude values (ft)")
    p_swp.add_argument("--alphas", default="2,3,4", help="path loss exponents")
    p_swp.set_defaults(func=cmd_sweep)

    p_rep = sub.add_parser("report", help="re-aggregate persisted step records")
    p_rep.add_argument("--config", help="flat JSON scenario config (for thresholds)")
    p_rep.add_argument("--steps", help="steps.csv path")
    p_rep.add_argument("--costs", help="costs.csv path (cost trace source)")
    p_rep.add_argument("--out", help="directory for the recomputed metrics.json")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2
    except Exception as exc:  # runtime faults
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
