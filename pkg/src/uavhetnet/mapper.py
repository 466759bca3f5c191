"""Iterative greedy mapping of aerial nodes to demand zones.

Each pass ranks zones by descending zone cost, pairs them with nodes in
ascending node cost ("cheapest node takes the hottest zone", wrapping
surplus nodes back onto the ranked zones), then polishes the pairing with
strictly-improving pairwise swaps.  A new mapping is accepted only when the
overall cost strictly decreases; one re-randomisation of node positions is
attempted before the loop settles.

Cost models plug in through a small duck-typed interface::

    model.uav_ids            -> sequence of node ids
    model.zone_ids           -> sequence of zone ids
    model.evaluate(mapping)  -> MappingCosts   (mapping None = launch state)
    model.perturb(rng)       -> None           (re-randomise node positions)

``StaticCostInstance`` provides the feedback-free variant used for small
exhaustible instances and brute-force comparisons.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cost import overall_cost
from .metrics import percentile

DESCENT_TOL = 1e-9
MAX_ITERS = 100
_MAX_SWAP_SCANS = 24


@dataclass(frozen=True)
class MappingCosts:
    """One evaluation of a mapping state."""

    per_uav: dict      # node id -> cost (inf = ineligible)
    per_zone: dict     # zone id -> zone cost
    overall: float


@dataclass(frozen=True)
class Assignment:
    """Result of the mapping loop."""

    pairs: tuple[tuple[int, int], ...]   # (uav id, zone id)
    iterations: int                      # accepted improvement steps
    converged: bool
    final_cost: float
    history: tuple[float, ...]           # overall cost of each accepted state

    def as_mapping(self) -> dict:
        return dict(self.pairs)

    def zone_counts(self) -> dict:
        counts: dict[int, int] = {}
        for _, zid in self.pairs:
            counts[zid] = counts.get(zid, 0) + 1
        return counts

    def to_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "iterations": self.iterations,
            "converged": self.converged,
            "final_cost": None if not math.isfinite(self.final_cost) else self.final_cost,
            "history": list(self.history),
        }


def rank_zones(zone_ids, zone_costs: dict) -> list:
    """Zones in strictly descending cost order, ties broken by ascending id."""
    return sorted(zone_ids, key=lambda z: (-zone_costs[z], z))


def greedy_assign(uav_costs: dict, ranked_zones) -> dict:
    """Pair ascending-cost nodes with the descending-cost zone ranking.

    Surplus nodes wrap onto the ranked zones again (zones gain extra nodes);
    surplus zones at the cheap end go unserved.  Nodes with an infinite cost
    are ineligible and skipped entirely.
    """
    eligible = sorted((u for u, c in uav_costs.items() if math.isfinite(c)),
                      key=lambda u: (uav_costs[u], u))
    ranked = list(ranked_zones)
    if not eligible or not ranked:
        return {}
    return {u: ranked[i % len(ranked)] for i, u in enumerate(eligible)}


def _swap_refine(mapping: dict, model, tol: float) -> tuple[dict, float]:
    """Polish a mapping with strictly-improving pairwise zone swaps."""
    current = dict(mapping)
    cost = model.evaluate(current).overall
    uavs = sorted(current)
    for _ in range(_MAX_SWAP_SCANS):
        improved = False
        for a, b in itertools.combinations(uavs, 2):
            if current[a] == current[b]:
                continue
            trial = dict(current)
            trial[a], trial[b] = current[b], current[a]
            trial_cost = model.evaluate(trial).overall
            if trial_cost < cost - tol:
                current, cost = trial, trial_cost
                improved = True
        if not improved:
            break
    return current, cost


def iterate_mapping(model, rng=None, tol: float = DESCENT_TOL,
                    max_iters: int = MAX_ITERS) -> Assignment:
    """Run the full mapping loop against a cost model.

    Repeats evaluate -> rank -> greedy pair -> swap polish, accepting a new
    mapping only on a strict overall-cost descent; on stagnation one position
    reset is tried before terminating.  ``converged`` is False when the
    iteration cap is hit or no node is eligible for any zone.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    zone_ids = list(model.zone_ids)
    uav_ids = list(model.uav_ids)
    if not zone_ids or not uav_ids:
        return Assignment((), 0, False, math.inf, ())

    best_cost = math.inf
    best_mapping: dict = {}
    history: list[float] = []
    improvements = 0
    current: dict | None = None
    reset_used = False
    converged = False

    for _ in range(max_iters):
        costs = model.evaluate(current)
        ranked = rank_zones(zone_ids, costs.per_zone)
        candidate = greedy_assign(costs.per_uav, ranked)
        if candidate:
            candidate, cand_cost = _swap_refine(candidate, model, tol)
        else:
            cand_cost = math.inf
        if cand_cost < best_cost - tol:
            best_cost, best_mapping = cand_cost, candidate
            history.append(cand_cost)
            improvements += 1
            current = candidate
        elif reset_used:
            converged = True
            break
        else:
            model.perturb(rng)
            reset_used = True

    if not best_mapping:
        # no node was ever eligible for any zone
        return Assignment((), improvements, False, math.inf, tuple(history))
    pairs = tuple(sorted(best_mapping.items()))
    return Assignment(pairs, improvements, converged, best_cost, tuple(history))


def uav_position_for_zone(zone, user_positions, altitude_range_m,
                          los_min_elevation_rad: float,
                          coverage_fraction: float = 0.95,
                          zone_centroid=None) -> np.ndarray:
    """Deployment position of a node serving a zone.

    Horizontally the node hovers over the user-weighted centroid (the zone
    polygon centroid when empty); the altitude is the lowest value in range
    that keeps line of sight to at least ``coverage_fraction`` of the zone's
    users, or the ceiling when none suffices.
    """
    users = np.atleast_2d(np.asarray(user_positions, dtype=float))
    if users.size:
        anchor = users.mean(axis=0)
    elif zone_centroid is not None:
        anchor = np.asarray(zone_centroid, dtype=float)
    else:
        from .scenario import polygon_centroid
        anchor = polygon_centroid(zone.polygon)
    h_lo, h_hi = altitude_range_m
    altitude = h_lo
    if users.size and los_min_elevation_rad > 0.0:
        dists = np.hypot(users[:, 0] - anchor[0], users[:, 1] - anchor[1])
        required = dists * math.tan(los_min_elevation_rad)
        needed = percentile(required, min(coverage_fraction * 100.0, 99.999))
        altitude = min(max(needed, h_lo), h_hi)
    return np.array([anchor[0], anchor[1], altitude])


@dataclass
class StaticCostInstance:
    """Feedback-free cost model over a fixed node-by-zone cost matrix.

    ``matrix[i, j]`` is node i's cost when mapped to zone j; a node's
    advertised cost is the one for its currently mapped zone (its home zone
    before any mapping exists).  Zone costs are fixed.  ``perturb`` is a
    no-op: there are no positions to re-randomise.
    """

    matrix: np.ndarray
    zone_costs: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.zone_costs = np.asarray(self.zone_costs, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.shape[1] != len(self.zone_costs):
            raise ValueError("matrix must be (uavs, zones) with one zone cost per column")

    @classmethod
    def from_scalar_costs(cls, uav_costs, zone_costs) -> "StaticCostInstance":
        uav_costs = np.asarray(uav_costs, dtype=float)
        return cls(np.tile(uav_costs[:, None], (1, len(zone_costs))), zone_costs)

    @property
    def uav_ids(self) -> range:
        return range(self.matrix.shape[0])

    @property
    def zone_ids(self) -> range:
        return range(self.matrix.shape[1])

    def _zone_of(self, mapping, uav: int) -> int:
        if mapping is None:
            return uav % self.matrix.shape[1]
        return mapping.get(uav, uav % self.matrix.shape[1])

    def evaluate(self, mapping=None) -> MappingCosts:
        per_uav = {u: float(self.matrix[u, self._zone_of(mapping, u)]) for u in self.uav_ids}
        per_zone = {z: float(self.zone_costs[z]) for z in self.zone_ids}
        counts = np.zeros(self.matrix.shape[1])
        assigned = []
        if mapping:
            for u, z in mapping.items():
                counts[z] += 1
                assigned.append(self.matrix[u, z])
        total = overall_cost(assigned, self.zone_costs, counts)
        return MappingCosts(per_uav, per_zone, total)

    def perturb(self, rng) -> None:
        pass
