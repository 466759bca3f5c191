"""Request arrivals, per-user load and the four-component node delay."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QUEUE_MODELS = ("mm1",)


@dataclass(frozen=True)
class TrafficParams:
    arrival_rate_pps: float        # packet arrivals per user per second
    mean_packet_bits: float
    processing_delay_s: float
    propagation_speed_mps: float
    queue_model: str = "mm1"

    def __post_init__(self):
        if self.arrival_rate_pps <= 0 or self.mean_packet_bits <= 0:
            raise ValueError("arrival rate and packet size must be > 0")
        if self.queue_model not in QUEUE_MODELS:
            raise ValueError(f"unsupported queue model {self.queue_model!r}")

    @property
    def offered_traffic_bps(self) -> float:
        return self.arrival_rate_pps * self.mean_packet_bits

    @classmethod
    def from_scenario(cls, scenario) -> "TrafficParams":
        return cls(
            arrival_rate_pps=scenario.packet_rate_pps,
            mean_packet_bits=scenario.packet_bits,
            processing_delay_s=scenario.processing_delay_s,
            propagation_speed_mps=scenario.propagation_speed_mps,
        )


@dataclass(frozen=True)
class DelayBreakdown:
    transmission_s: float
    propagation_s: float
    queue_s: float
    processing_s: float
    total_s: float

    @classmethod
    def build(cls, transmission, propagation, queue, processing) -> "DelayBreakdown":
        # total is stored as the exact float sum of the four components
        return cls(transmission, propagation, queue, processing,
                   transmission + propagation + queue + processing)


def user_load(sinr_linear, offered_traffic_bps: float, bandwidth_hz: float):
    """Utilization of a full-band link by one user's offered traffic.

    Dimensionless; also read directly as the transmission delay in seconds.
    Values at or above 1 mark the user overloaded (its link cannot carry the
    offered traffic) — flagged downstream, never raised.
    """
    sinr_linear = np.asarray(sinr_linear, dtype=float)
    capacity = bandwidth_hz * np.log2(1.0 + sinr_linear)
    with np.errstate(divide="ignore"):
        load = np.where(capacity > 0, offered_traffic_bps / capacity, np.inf)
    return float(load) if load.ndim == 0 else load


def is_overloaded(load) -> np.ndarray:
    return np.asarray(load) >= 1.0


def area_load(per_user_loads) -> float:
    """Zone load: sum of the users' loads (users are the point masses of the
    area integral)."""
    loads = np.asarray(per_user_loads, dtype=float)
    return float(loads.sum()) if loads.size else 0.0


def queue_delay(utilization, service_rate_pps):
    """M/M/1 waiting time rho/(mu*(1-rho)); +inf sentinel at rho >= 1."""
    rho = np.asarray(utilization, dtype=float)
    mu = np.asarray(service_rate_pps, dtype=float)
    if np.any(rho < 0):
        raise ValueError("utilization must be >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        wait = np.where(rho < 1.0, rho / (mu * (1.0 - rho)), np.inf)
    wait = np.where(rho == 0.0, 0.0, wait)
    return float(wait) if wait.ndim == 0 else wait


def total_delay(load, distance_m, service_rate_pps, params: TrafficParams,
                extra_queue_s: float = 0.0) -> DelayBreakdown:
    """Node delay: transmission (the load read in seconds), propagation,
    M/M/1 queueing at the user's own utilization, and a processing constant.

    ``extra_queue_s`` folds in upstream queueing such as a backhaul stage.
    An overloaded user propagates the +inf sentinel through the total.
    """
    transmission = float(load)
    propagation = float(distance_m) / params.propagation_speed_mps
    queue = float(queue_delay(load, service_rate_pps)) + extra_queue_s
    return DelayBreakdown.build(transmission, propagation, queue, params.processing_delay_s)


def generate_requests(rates_per_user, step_duration_s: float, rng) -> np.ndarray:
    """Per-user Poisson request counts for one step (mean rate*duration)."""
    if step_duration_s <= 0:
        raise ValueError("step duration must be > 0")
    rates = np.asarray(rates_per_user, dtype=float)
    if np.any(rates < 0):
        raise ValueError("request rates must be >= 0")
    return rng.poisson(rates * step_duration_s)
