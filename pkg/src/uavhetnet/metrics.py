"""Evaluation metrics and the per-user-step record table.

Percentiles use the deterministic nearest-rank rule.  The step table writes
one CSV row per user-step with full-precision floats, so a report recomputed
from the persisted CSV is bit-identical to the online one.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

SERVED_NONE = "none"
SERVED_MBS = "mbs"
SERVED_UAV = "uav"

STEP_COLUMNS = (
    "replication", "step", "user", "zone", "served_by",
    "sinr", "se", "rate_bps",
    "delay_transmission_s", "delay_propagation_s", "delay_queue_s",
    "delay_processing_s", "delay_total_s", "dropped",
)


def percentile(values, p: float) -> float:
    """Nearest-rank percentile: the value at index ceil(p/100 * N) of the
    ascending sort."""
    vals = np.sort(np.asarray(values, dtype=float))
    if vals.size == 0:
        raise ValueError("percentile of empty values")
    if not (0.0 < p < 100.0):
        raise ValueError(f"p must lie in (0, 100), got {p}")
    rank = math.ceil(p / 100.0 * vals.size)
    return float(vals[rank - 1])


def throughput_coverage(se_values, threshold: float = 0.03) -> float:
    """Fraction of users whose spectral efficiency reaches the threshold.

    A zero threshold degenerates to full coverage.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    se = np.asarray(se_values, dtype=float)
    if se.size == 0:
        return math.nan
    return float(np.count_nonzero(se >= threshold) / se.size)


def guaranteed_sinr_probability(sinr_values, threshold: float = 0.55) -> float:
    """Fraction of user-steps at or above the linear SINR threshold."""
    if threshold <= 0:
        raise ValueError("threshold must be > 0")
    vals = np.asarray(sinr_values, dtype=float)
    if vals.size == 0:
        return math.nan
    return float(np.count_nonzero(vals >= threshold) / vals.size)


def delay_statistics(delays, threshold: float = 0.2, served=None) -> tuple[float, float]:
    """Mean delay over served users and the violation fraction.

    A violation is a delay above the threshold or the +inf overload
    sentinel, counted over all records.  ``served`` masks which records
    enter the mean (default: the non-violating ones).
    """
    vals = np.asarray(delays, dtype=float)
    if vals.size == 0:
        raise ValueError("delay statistics of empty records")
    violating = (vals > threshold) | np.isinf(vals)
    if served is None:
        served = np.isfinite(vals)
    else:
        served = np.asarray(served, dtype=bool)
    mean = float(vals[served].mean()) if np.count_nonzero(served) else math.nan
    return mean, float(np.count_nonzero(violating) / vals.size)


@dataclass(frozen=True)
class MetricsReport:
    """Aggregate evaluation quantities of one run."""

    mean_delay_s: float
    delay_violation_fraction: float
    p5_spectral_efficiency: float
    throughput_coverage: float
    guaranteed_sinr_probability: float
    cost_trace: tuple[float, ...] = ()

    def __post_init__(self):
        for name in ("delay_violation_fraction", "throughput_coverage",
                     "guaranteed_sinr_probability"):
            v = getattr(self, name)
            if not math.isnan(v) and not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    def to_dict(self) -> dict:
        def scrub(v):
            if isinstance(v, float) and not math.isfinite(v):
                return None
            return v
        return {
            "mean_delay_s": scrub(self.mean_delay_s),
            "delay_violation_fraction": scrub(self.delay_violation_fraction),
            "p5_spectral_efficiency": scrub(self.p5_spectral_efficiency),
            "throughput_coverage": scrub(self.throughput_coverage),
            "guaranteed_sinr_probability": scrub(self.guaranteed_sinr_probability),
            "cost_trace": [scrub(c) for c in self.cost_trace],
        }

    @classmethod
    def empty(cls) -> "MetricsReport":
        return cls(math.nan, math.nan, math.nan, math.nan, math.nan, ())


@dataclass
class StepTable:
    """Column-oriented per-user-step records (one row per active user per step)."""

    replication: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))
    step: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))
    user: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))
    zone: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))
    served_by: np.ndarray = field(default_factory=lambda: np.array([], dtype=object))
    sinr: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    se: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    rate_bps: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    delay_transmission_s: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    delay_propagation_s: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    delay_queue_s: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    delay_processing_s: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    delay_total_s: np.ndarray = field(default_factory=lambda: np.array([], dtype=float))
    dropped: np.ndarray = field(default_factory=lambda: np.array([], dtype=bool))

    def __len__(self) -> int:
        return len(self.step)

    @classmethod
    def concat(cls, tables: list["StepTable"]) -> "StepTable":
        if not tables:
            return cls()
        out = cls()
        for name in out.__dataclass_fields__:
            setattr(out, name, np.concatenate([getattr(t, name) for t in tables]))
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(STEP_COLUMNS)
            for i in range(len(self)):
                writer.writerow([
                    int(self.replication[i]), int(self.step[i]), int(self.user[i]),
                    int(self.zone[i]), self.served_by[i],
                    repr(float(self.sinr[i])), repr(float(self.se[i])),
                    repr(float(self.rate_bps[i])),
                    repr(float(self.delay_transmission_s[i])),
                    repr(float(self.delay_propagation_s[i])),
                    repr(float(self.delay_queue_s[i])),
                    repr(float(self.delay_processing_s[i])),
                    repr(float(self.delay_total_s[i])),
                    int(self.dropped[i]),
                ])

    @classmethod
    def read_csv(cls, path) -> "StepTable":
        cols: dict[str, list] = {name: [] for name in STEP_COLUMNS}
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != STEP_COLUMNS:
                raise ValueError(f"unexpected step CSV header: {header}")
            for row in reader:
                for name, value in zip(STEP_COLUMNS, row):
                    cols[name].append(value)
        table = cls()
        for name in ("replication", "step", "user", "zone"):
            setattr(table, name, np.array([int(v) for v in cols[name]], dtype=np.int64))
        table.served_by = np.array(cols["served_by"], dtype=object)
        for name in ("sinr", "se", "rate_bps", "delay_transmission_s",
                     "delay_propagation_s", "delay_queue_s",
                     "delay_processing_s", "delay_total_s"):
            setattr(table, name, np.array([float(v) for v in cols[name]], dtype=float))
        table.dropped = np.array([bool(int(v)) for v in cols["dropped"]], dtype=bool)
        return table


def report_from_table(table: StepTable, delay_threshold: float, sinr_threshold: float,
                      se_threshold: float, cost_trace=()) -> MetricsReport:
    """Build the metrics report from step records.

    Used for both the online report and the re-aggregation of a persisted
    CSV, so the two are bit-identical by construction.
    """
    attached = table.served_by != SERVED_NONE
    if not np.count_nonzero(attached):
        return MetricsReport(math.nan, math.nan, math.nan, math.nan, math.nan,
                             tuple(float(c) for c in cost_trace))
    served = attached & ~table.dropped
    mean_delay, violations = delay_statistics(
        table.delay_total_s[attached], delay_threshold,
        served=served[attached])
    return MetricsReport(
        mean_delay_s=mean_delay,
        delay_violation_fraction=violations,
        p5_spectral_efficiency=percentile(table.se[attached], 5.0),
        throughput_coverage=throughput_coverage(table.se[attached], se_threshold),
        guaranteed_sinr_probability=guaranteed_sinr_probability(table.sinr[attached], sinr_threshold),
        cost_trace=tuple(float(c) for c in cost_trace),
    )
