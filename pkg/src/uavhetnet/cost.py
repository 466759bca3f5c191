"""Demand density functions, the admission constraint and the deployment
cost functions that drive UAV-to-zone assignment.

The density functions are Poisson likelihoods evaluated in the log domain
(request counts up to 50 overflow a naive factorial) and the cost functions
are demand-weighted deployment prices used ordinally by the mapper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INELIGIBLE = math.inf  # cost sentinel for a node that may not serve a zone


def poisson_pmf(rate: float, count: int) -> float:
    """Poisson pmf via log-gamma; exact limits at rate 0."""
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if count < 0:
        raise ValueError("count must be >= 0")
    if rate == 0.0:
        return 1.0 if count == 0 else 0.0
    return math.exp(count * math.log(rate) - rate - math.lgamma(count + 1))


def density_area(active_users: float, cell_capacity: float, requests: int) -> float:
    """Likelihood that a zone sees ``requests`` service requests when the
    cell runs at an active-user ratio of active_users/cell_capacity."""
    if cell_capacity <= 0:
        raise ValueError("cell capacity must be > 0")
    return poisson_pmf(active_users / cell_capacity, requests)


def density_uav(area_load: float, uav_count: int, uav_capacity: int) -> float:
    """Likelihood that a fleet of ``uav_count`` nodes sees a full per-node
    request book of ``uav_capacity`` under the given area load."""
    if uav_count < 1:
        raise ValueError("uav count must be >= 1")
    return poisson_pmf(area_load / uav_count, uav_capacity)


def density_area_average(requests: int) -> float:
    """Verification ceiling for a converged zone: 1/(e * requests!).

    Equals ``density_area`` at an active-user ratio of exactly 1.
    """
    if requests < 0:
        raise ValueError("request count must be >= 0")
    return math.exp(-1.0 - math.lgamma(requests + 1))


@dataclass(frozen=True)
class AdmissionResult:
    ok: bool
    infeasible: bool      # more drops than handled requests: radicand < 0
    deviation: float      # sqrt of the mean handled-minus-dropped indicator


def admission_constraint(handled, dropped, active_users: float, cell_capacity: float,
                         squared: bool = False) -> AdmissionResult:
    """Per-request admission check for one zone.

    ``handled[i]`` is 1 when request i was served within capacity and
    ``dropped[i]`` is 1 when it was lost; the rms-style deviation of the
    difference must not exceed the active-user ratio.  ``squared`` switches
    to squaring the differences before averaging (sensitivity variant).
    """
    handled = np.asarray(handled, dtype=float)
    dropped = np.asarray(dropped, dtype=float)
    if handled.shape != dropped.shape or handled.size < 1:
        raise ValueError("need one (handled, dropped) indicator pair per request")
    if cell_capacity <= 0:
        raise ValueError("cell capacity must be > 0")
    diff = handled - dropped
    radicand = float(np.mean(diff * diff) if squared else np.mean(diff))
    if radicand < 0:
        return AdmissionResult(ok=False, infeasible=True, deviation=math.nan)
    deviation = math.sqrt(radicand)
    return AdmissionResult(ok=deviation <= active_users / cell_capacity,
                           infeasible=False, deviation=deviation)


def cost_area(area_density: float, zone_load: float, requests: int,
              cell_capacity: float, eta1: float, eta2: float) -> float:
    """Deployment price of a zone: density * load * (eta1*requests + eta2*capacity)."""
    return area_density * zone_load * (eta1 * requests + eta2 * cell_capacity)


def cost_uav(uav_density: float, distance_m: float, cell_radius_m: float,
             pathloss_exp: float, requests: int, active_users: float,
             eta1: float, eta2: float, los: bool) -> float:
    """Deployment price of one aerial node for a zone.

    Distance is normalised by the cell radius (the mapper uses costs only
    ordinally, and raw metre distances to the fourth power dwarf everything
    else).  Without line of sight the node is ineligible: +inf sentinel.
    """
    if not los:
        return INELIGIBLE
    if cell_radius_m <= 0:
        raise ValueError("cell radius must be > 0")
    reach = (distance_m / cell_radius_m) ** pathloss_exp
    return uav_density * reach * (eta1 * requests + eta2 * active_users)


def overall_cost(uav_costs, area_costs, uavs_per_area) -> float:
    """Network-wide price: mean per-node cost plus each zone's cost split
    across the nodes allocated to it (floor of one for unserved zones)."""
    uav_costs = np.asarray(uav_costs, dtype=float)
    area_costs = np.asarray(area_costs, dtype=float)
    counts = np.asarray(uavs_per_area, dtype=float)
    if area_costs.shape != counts.shape:
        raise ValueError("need one UAV count per area")
    total = 0.0
    if uav_costs.size:
        total += uav_costs.sum() / uav_costs.size
    if area_costs.size:
        total += (area_costs / np.maximum(counts, 1.0)).sum()
    return float(total)


@dataclass(frozen=True)
class CostReport:
    """Evaluated density and cost values for one zone configuration."""

    area_density: float
    uav_density: float
    area_cost: float
    uav_cost: float
    total_cost: float
    constraint_ok: bool
    constraint_infeasible: bool = False

    def __post_init__(self):
        for name in ("area_density", "uav_density"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be a probability, got {v}")
        for name in ("area_cost", "uav_cost", "total_cost"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    def to_dict(self) -> dict:
        return {
            "area_density": self.area_density,
            "uav_density": self.uav_density,
            "area_cost": self.area_cost,
            "uav_cost": self.uav_cost,
            "total_cost": self.total_cost,
            "constraint_ok": self.constraint_ok,
            "constraint_infeasible": self.constraint_infeasible,
        }
