"""Experiment orchestration: scenario build, per-epoch UAV mapping, traffic
stepping and metric aggregation, for both the UAV overlay and the no-UAV
baseline.

Baseline and UAV runs with the same seed share every random draw that
affects user placement, demand drift and request arrivals (common random
numbers); the mapper consumes its own spawned stream so enabling UAVs never
shifts the shared draws.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import channel, cost, traffic
from .channel import ChannelParams
from .mapper import Assignment, MappingCosts, iterate_mapping, uav_position_for_zone
from .metrics import (SERVED_MBS, SERVED_UAV, MetricsReport, StepTable,
                      report_from_table)
from .scenario import (Scenario, Zone, build_hex_cell, hex_boundary_radius,
                       hex_center, hex_circumradius, partition_zones,
                       place_users, polygon_centroid, sector_index_of,
                       zone_index_of)
from .traffic import generate_requests

COST_COLUMNS = ("replication", "epoch", "zone", "requests", "area_load",
                "area_density", "uav_density", "area_cost", "uav_cost",
                "total_cost", "constraint_ok", "constraint_infeasible")

# mild per-epoch drift of the per-sector demand weights
_DEMAND_DIRICHLET_ALPHA = 4.0


@dataclass(frozen=True)
class RunPlan:
    horizon_steps: int = 1000
    epoch_length: int = 100          # steps between re-mapping epochs
    step_duration_s: float = 1.0
    replications: int = 1
    record_steps: bool = True

    def __post_init__(self):
        if not (self.horizon_steps >= self.epoch_length >= 1):
            raise ValueError("need horizon >= epoch length >= 1")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.step_duration_s <= 0:
            raise ValueError("step duration must be > 0")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class UavState:
    """One aerial node: position, radio power, service capacity, assignment."""

    uav_id: int
    position: np.ndarray           # (x, y, altitude) metres
    power_dbm: float
    capacity: int
    assigned_zone: int | None = None


@dataclass
class PhySnapshot:
    """Physical-layer state of one cell under a given mapping, constant
    within an epoch."""

    served_by: np.ndarray          # per user: SERVED_* label
    serving_node: np.ndarray       # per user: uav id, -1 for MBS, -2 detached
    sinr: np.ndarray
    se: np.ndarray
    rate_bps: np.ndarray
    load: np.ndarray
    distance_m: np.ndarray
    service_rate_pps: np.ndarray
    zone_loads: np.ndarray
    per_uav_cost: dict
    per_zone_cost: dict
    overall: float
    uav_positions: dict
    backhaul_queue_s: float
    per_zone_density_area: np.ndarray
    per_zone_density_uav: np.ndarray


class DeploymentCostModel:
    """Physics-backed cost model driving the mapping loop for one cell.

    Node positions are a pure function of the mapping (hover over the target
    zone's user centroid at the lowest line-of-sight altitude), except right
    after a reset, when one evaluation prices the re-randomised positions.
    """

    def __init__(self, scenario: Scenario, cell: np.ndarray, zones: list[Zone],
                 users_xy: np.ndarray, user_zone: np.ndarray,
                 requests_per_zone: np.ndarray, cell_users: int):
        self.scenario = scenario
        self.cell = cell
        self.center = hex_center(cell)
        self.radius = hex_circumradius(cell)
        self.zones = zones
        self.users_xy = users_xy
        self.user_zone = user_zone
        self.requests_per_zone = requests_per_zone
        self.cell_users = cell_users
        self.uav_params = ChannelParams.for_uav(scenario)
        self.mbs_params = ChannelParams.for_mbs(scenario)
        self.mbs_position = np.array([self.center[0], self.center[1], scenario.mbs_height_m])
        self.n_uavs = scenario.uav_count
        self.k = len(zones)
        self._home = {u: u % self.k for u in range(self.n_uavs)}
        self._pending_positions: dict | None = None
        self._last_mapping: dict = {}
        self._zone_users = [np.flatnonzero(user_zone == z) for z in range(self.k)]
        self._zone_centroids = [polygon_centroid(z.polygon) for z in zones]
        self._deploy_cache: dict[int, np.ndarray] = {}

    @property
    def uav_ids(self):
        return range(self.n_uavs)

    @property
    def zone_ids(self):
        return range(self.k)

    # -- geometry ----------------------------------------------------------

    def _deployed_position(self, zone_id: int) -> np.ndarray:
        cached = self._deploy_cache.get(zone_id)
        if cached is None:
            zone = self.zones[zone_id]
            members = self._zone_users[zone_id]
            cached = uav_position_for_zone(
                zone, self.users_xy[members], self.scenario.altitude_range_m,
                self.uav_params.los_min_elevation_rad,
                self.scenario.los_coverage_fraction,
                zone_centroid=self._zone_centroids[zone_id])
            self._deploy_cache[zone_id] = cached
        return cached

    def _positions_for(self, mapping: dict | None, use_pending: bool) -> dict:
        if use_pending and self._pending_positions is not None:
            positions = dict(self._pending_positions)
            self._pending_positions = None
            return positions
        out = {}
        for u in self.uav_ids:
            target = self._target_zone(mapping, u)
            out[u] = self._deployed_position(target)
        return out

    def _target_zone(self, mapping: dict | None, u: int) -> int:
        if mapping and u in mapping:
            return mapping[u]
        return self._home[u]

    def _random_point_in_zone(self, zone_id: int, rng) -> np.ndarray:
        lo, hi = self.zones[zone_id].guider_angles
        while True:
            theta = rng.uniform(lo, hi) % (2.0 * math.pi)
            rho = self.radius * math.sqrt(rng.uniform(0.0, 1.0))
            if rho <= hex_boundary_radius(self.cell, theta):
                break
        h_lo, h_hi = self.scenario.altitude_range_m
        return np.array([self.center[0] + rho * math.cos(theta),
                         self.center[1] + rho * math.sin(theta),
                         rng.uniform(h_lo, h_hi)])

    # -- mapping-loop interface ---------------------------------------------

    def evaluate(self, mapping: dict | None = None) -> MappingCosts:
        snap = self.snapshot(mapping, use_pending=True)
        self._last_mapping = dict(mapping) if mapping else {}
        return MappingCosts(snap.per_uav_cost, snap.per_zone_cost, snap.overall)

    def perturb(self, rng) -> None:
        pending = {}
        for u in self.uav_ids:
            zone = self._target_zone(self._last_mapping, u)
            pending[u] = self._random_point_in_zone(zone, rng)
        self._pending_positions = pending

    # -- full physical evaluation --------------------------------------------

    def snapshot(self, mapping: dict | None = None, use_pending: bool = False) -> PhySnapshot:
        scn = self.scenario
        m = len(self.users_xy)
        positions = self._positions_for(mapping, use_pending)
        active = sorted(mapping) if mapping else []

        served_by = np.full(m, SERVED_MBS, dtype=object)
        serving_node = np.full(m, -1, dtype=np.int64)

        if active and m:
            pos_matrix = np.array([positions[u] for u in active])
            rx = channel.rx_power_matrix(pos_matrix, self.users_xy, self.uav_params)
            dx = pos_matrix[:, 0, None] - self.users_xy[None, :, 0]
            dy = pos_matrix[:, 1, None] - self.users_xy[None, :, 1]
            horiz = np.hypot(dx, dy)
            elev = np.arctan2(pos_matrix[:, 2, None], horiz)
            los = elev >= self.uav_params.los_min_elevation_rad
            same_zone = np.array([mapping[u] for u in active])[:, None] == self.user_zone[None, :]
            eligible = los & same_zone
            rx_eligible = np.where(eligible, rx, -np.inf)
            best = np.argmax(rx_eligible, axis=0)
            has_uav = np.isfinite(rx_eligible[best, np.arange(m)])
            served_by[has_uav] = SERVED_UAV
            serving_node[has_uav] = np.array(active)[best[has_uav]]
        else:
            rx = np.zeros((0, m))
            best = np.zeros(m, dtype=int)
            has_uav = np.zeros(m, dtype=bool)

        # round-robin share per serving node
        sinr = np.zeros(m)
        distance = np.zeros(m)
        if m:
            mbs_rx = channel.rx_power_matrix(self.mbs_position[None, :], self.users_xy,
                                             self.mbs_params)[0]
            mbs_dist = np.sqrt(np.sum((self.users_xy - self.center) ** 2, axis=1)
                               + scn.mbs_height_m ** 2)
            is_mbs = ~has_uav
            sinr[is_mbs] = mbs_rx[is_mbs] / self.mbs_params.noise_power_w
            distance[is_mbs] = mbs_dist[is_mbs]
            if np.count_nonzero(has_uav):
                idx = np.flatnonzero(has_uav)
                serving_rx = rx[best[idx], idx]
                interference = rx[:, idx].sum(axis=0) - serving_rx
                sinr[idx] = serving_rx / (interference + self.uav_params.noise_power_w)
                pos_serving = np.array([positions[u] for u in serving_node[idx]])
                distance[idx] = np.sqrt(np.sum((pos_serving[:, :2] - self.users_xy[idx]) ** 2, axis=1)
                                        + pos_serving[:, 2] ** 2)

        share = np.ones(m)
        for node in np.unique(serving_node) if m else []:
            mask = serving_node == node
            share[mask] = np.count_nonzero(mask)
        log_term = np.log2(1.0 + sinr) if m else np.zeros(0)
        rate = scn.bandwidth_hz * log_term / np.maximum(share, 1.0)
        se = rate / scn.bandwidth_hz
        with np.errstate(divide="ignore"):
            load = np.where(log_term > 0, scn.offered_traffic_bps / (scn.bandwidth_hz * log_term), np.inf)
        service_rate = scn.bandwidth_hz * log_term / scn.packet_bits

        uav_rate_total = float(rate[has_uav].sum()) if m else 0.0
        backhaul_rho = uav_rate_total / scn.backhaul_cap_bps
        if backhaul_rho >= 1.0:
            backhaul_queue = math.inf
        elif backhaul_rho == 0.0:
            backhaul_queue = 0.0
        else:
            mu_bh = scn.backhaul_cap_bps / scn.packet_bits
            backhaul_queue = backhaul_rho / (mu_bh * (1.0 - backhaul_rho))

        zone_loads = np.zeros(self.k)
        for z in range(self.k):
            members = self._zone_users[z]
            if members.size:
                zone_loads[z] = traffic.area_load(load[members])

        df_area = np.array([cost.density_area(self.cell_users, scn.users_per_cell_max,
                                              int(self.requests_per_zone[z]))
                            for z in range(self.k)])
        df_uav = np.array([cost.density_uav(float(zone_loads[z]), self.n_uavs, scn.uav_capacity)
                           for z in range(self.k)])
        per_zone = {z: cost.cost_area(float(df_area[z]), float(zone_loads[z]),
                                      int(self.requests_per_zone[z]),
                                      scn.users_per_cell_max, scn.eta1, scn.eta2)
                    for z in range(self.k)}

        per_uav = {}
        for u in self.uav_ids:
            target = self._target_zone(mapping, u)
            pos = positions[u]
            members = self._zone_users[target]
            if members.size:
                d3 = np.sqrt(np.sum((self.users_xy[members] - pos[:2]) ** 2, axis=1) + pos[2] ** 2)
                reach = float(d3.mean())
            else:
                c = self._zone_centroids[target]
                reach = math.hypot(math.hypot(c[0] - pos[0], c[1] - pos[1]), pos[2])
            anchor = (self.users_xy[members].mean(axis=0) if members.size
                      else self._zone_centroids[target])
            # eligibility is a property of the deployable state: the node can
            # always climb back to its canonical hover point, so line of sight
            # is judged there even when pricing a perturbed probe position
            link = channel.link_geometry(self._deployed_position(target), anchor)
            per_uav[u] = cost.cost_uav(float(df_uav[target]), reach, self.radius,
                                       scn.pathloss_exp, int(self.requests_per_zone[target]),
                                       self.cell_users, scn.eta1, scn.eta2,
                                       channel.los_available(link, self.uav_params))

        counts = np.zeros(self.k)
        assigned_costs = []
        if mapping:
            for u, z in mapping.items():
                counts[z] += 1
                assigned_costs.append(per_uav[u])
        overall = cost.overall_cost(assigned_costs, [per_zone[z] for z in range(self.k)], counts)

        return PhySnapshot(
            served_by=served_by, serving_node=serving_node, sinr=sinr, se=se,
            rate_bps=rate, load=load, distance_m=distance,
            service_rate_pps=service_rate, zone_loads=zone_loads,
            per_uav_cost=per_uav, per_zone_cost=per_zone, overall=overall,
            uav_positions=positions, backhaul_queue_s=backhaul_queue,
            per_zone_density_area=df_area, per_zone_density_uav=df_uav)


@dataclass
class ReplicationResult:
    seed: int
    metrics: MetricsReport
    assignments: list[Assignment]
    fleet_states: list[list[UavState]]     # per epoch, UAV runs only
    cost_rows: list[dict]
    table: StepTable | None
    users_xy: np.ndarray


@dataclass
class RunResult:
    scenario: Scenario
    plan: RunPlan
    replications: list[ReplicationResult]

    def summary(self) -> dict:
        metrics = [r.metrics for r in self.replications]
        fields = ("mean_delay_s", "delay_violation_fraction", "p5_spectral_efficiency",
                  "throughput_coverage", "guaranteed_sinr_probability")
        out = {}
        for name in fields:
            # sorting makes the reduction exactly permutation-invariant
            vals = np.sort(np.array([getattr(m, name) for m in metrics], dtype=float))
            out[name] = {"mean": _scrub(float(np.mean(vals))),
                         "std": _scrub(float(np.std(vals)))}
        return out

    def to_dict(self) -> dict:
        return {
            "config": self.scenario.to_dict(),
            "plan": self.plan.to_dict(),
            "replications": [
                {"seed": r.seed, "metrics": r.metrics.to_dict()} for r in self.replications
            ],
            "summary": self.summary(),
        }


def _scrub(v: float):
    return None if isinstance(v, float) and not math.isfinite(v) else v


def _cell_centers(scenario: Scenario) -> list[np.ndarray]:
    """Centres of the per-MBS square tiles inside the simulation area."""
    g = math.ceil(math.sqrt(scenario.mbs_count))
    tile = scenario.area_side_m / g
    centers = []
    for i in range(scenario.mbs_count):
        row, col = divmod(i, g)
        centers.append(np.array([(col + 0.5) * tile, (row + 0.5) * tile]))
    return centers


def _epoch_bounds(plan: RunPlan) -> list[tuple[int, int]]:
    bounds = []
    start = 0
    while start < plan.horizon_steps:
        bounds.append((start, min(start + plan.epoch_length, plan.horizon_steps)))
        start += plan.epoch_length
    return bounds


def _simulate_cell(scenario: Scenario, plan: RunPlan, rep_index: int, cell_index: int,
                   cell_center: np.ndarray, cell_users: int, user_offset: int,
                   streams) -> dict:
    demand_rng, placement_rng, arrivals_rng, mapper_rng = streams
    cell = build_hex_cell(cell_center, scenario.cell_radius_m)
    center = hex_center(cell)
    k = scenario.uav_count
    zone_offset = cell_index * k
    dt = plan.step_duration_s

    epoch_weights = [demand_rng.dirichlet([_DEMAND_DIRICHLET_ALPHA] * 6)
                     for _ in _epoch_bounds(plan)]

    zones0 = partition_zones(cell, epoch_weights[0], k, scenario.max_zones)
    masses0 = np.array([_zone_mass(epoch_weights[0], z) for z in zones0])
    if masses0.sum() <= 0:
        masses0 = np.ones(k)
    users = place_users(cell, zones0, cell_users, masses0, placement_rng)
    users_xy = (np.array([u.position for u in users]) if users
                else np.zeros((0, 2)))
    sectors = sector_index_of(users_xy, center) if cell_users else np.zeros(0, dtype=int)

    tables = []
    assignments: list[Assignment] = []
    cost_rows: list[dict] = []
    cost_trace: list[float] = []
    fleets: list[list[UavState]] = []

    for epoch, (s0, s1) in enumerate(_epoch_bounds(plan)):
        weights = epoch_weights[epoch]
        zones = partition_zones(cell, weights, k, scenario.max_zones)
        user_zone = (zone_index_of(zones, users_xy, center) if cell_users
                     else np.zeros(0, dtype=int))
        rates = (scenario.request_rate_per_user * 6.0 * weights[sectors]
                 if cell_users else np.zeros(0))
        steps = s1 - s0
        requests = np.vstack([generate_requests(rates, dt, arrivals_rng)
                              for _ in range(steps)]) if cell_users else np.zeros((steps, 0), dtype=int)
        sr_zone = np.array([int(requests[0, user_zone == z].sum()) if cell_users else 0
                            for z in range(k)])
        for u, ue in enumerate(users):
            ue.pending_requests = int(requests[0, u]) if cell_users else 0

        model = DeploymentCostModel(scenario, cell, zones, users_xy, user_zone,
                                    sr_zone, cell_users)
        if scenario.uavs_enabled:
            assignment = iterate_mapping(model, mapper_rng)
            mapping = assignment.as_mapping()
            # store with globally offset node/zone ids (one id space per run)
            assignments.append(dataclasses.replace(
                assignment,
                pairs=tuple((u + zone_offset, z + zone_offset) for u, z in assignment.pairs)))
        else:
            mapping = {}
        snap = model.snapshot(mapping)
        if scenario.uavs_enabled:
            cost_trace.append(snap.overall)
            fleets.append([
                UavState(uav_id=zone_offset + u, position=snap.uav_positions[u],
                         power_dbm=scenario.uav_power_dbm,
                         capacity=scenario.uav_capacity,
                         assigned_zone=(zone_offset + mapping[u]) if u in mapping else None)
                for u in model.uav_ids
            ])

        # delay components, constant within the epoch
        if cell_users:
            queue = traffic.queue_delay(snap.load, snap.service_rate_pps)
            queue = queue + np.where(snap.served_by == SERVED_UAV, snap.backhaul_queue_s, 0.0)
            trans = snap.load
            prop = snap.distance_m / scenario.propagation_speed_mps
            proc = np.full(cell_users, scenario.processing_delay_s)
            total = trans + prop + queue + proc
            violating = (total > scenario.delay_threshold_s) | ~np.isfinite(total)
        else:
            trans = prop = queue = proc = total = np.zeros(0)
            violating = np.zeros(0, dtype=bool)

        handled_req, dropped_req = _apply_capacity(scenario, requests, snap, violating)
        dropped_steps = violating[None, :] | (dropped_req > 0)

        # admission bookkeeping per zone over the epoch
        for z in range(k):
            members = np.flatnonzero(user_zone == z) if cell_users else np.zeros(0, dtype=int)
            handled_total = int(handled_req[:, members].sum()) if members.size else 0
            dropped_total = int(dropped_req[:, members].sum()) if members.size else 0
            n_req = handled_total + dropped_total
            if n_req:
                adm = cost.admission_constraint(
                    np.concatenate([np.ones(handled_total), np.zeros(dropped_total)]),
                    np.concatenate([np.zeros(handled_total), np.ones(dropped_total)]),
                    cell_users, scenario.users_per_cell_max,
                    squared=scenario.admission_squared)
                ok, infeasible = adm.ok, adm.infeasible
            else:
                ok, infeasible = True, False
            assigned = [u for u, zz in mapping.items() if zz == z]
            uav_cost_z = (float(np.mean([snap.per_uav_cost[u] for u in assigned]))
                          if assigned else 0.0)
            cost_rows.append({
                "replication": rep_index, "epoch": epoch, "zone": zone_offset + z,
                "requests": int(sr_zone[z]), "area_load": float(snap.zone_loads[z]),
                "area_density": float(snap.per_zone_density_area[z]),
                "uav_density": float(snap.per_zone_density_uav[z]),
                "area_cost": float(snap.per_zone_cost[z]),
                "uav_cost": uav_cost_z, "total_cost": float(snap.overall),
                "constraint_ok": bool(ok), "constraint_infeasible": bool(infeasible),
            })

        if cell_users:
            tables.append(_epoch_table(rep_index, user_offset, s0, steps, cell_users,
                                       zone_offset, user_zone, snap,
                                       trans, prop, queue, proc, total, dropped_steps))

    return {
        "tables": tables,
        "assignments": assignments,
        "cost_rows": cost_rows,
        "cost_trace": cost_trace,
        "fleets": fleets,
        "users_xy": users_xy,
    }


def _zone_mass(weights: np.ndarray, zone: Zone) -> float:
    from .scenario import _demand_mass
    lo, hi = zone.guider_angles
    return _demand_mass(weights, lo, hi)


def _apply_capacity(scenario: Scenario, requests: np.ndarray, snap: PhySnapshot,
                    violating: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split each step's requests into handled/dropped.

    A server admits requests in ascending user-id order up to its per-step
    capacity; requests of delay-violating users are dropped outright.
    """
    steps, m = requests.shape
    handled = np.zeros_like(requests)
    if m == 0:
        return handled, requests.copy()
    servers = {}
    for u in range(m):
        servers.setdefault((snap.served_by[u], snap.serving_node[u]), []).append(u)
    for (kind, _node), members in servers.items():
        cap = scenario.uav_capacity if kind == SERVED_UAV else scenario.mbs_request_cap
        idx = np.array(members)
        req = requests[:, idx]
        cum = np.cumsum(req, axis=1)
        room = np.clip(cap - (cum - req), 0, None)
        handled[:, idx] = np.minimum(req, room)
    handled[:, violating] = 0
    dropped = requests - handled
    return handled, dropped


def _epoch_table(rep_index, user_offset, step0, steps, m, zone_offset, user_zone, snap,
                 trans, prop, queue, proc, total, dropped_steps) -> StepTable:
    rows = steps * m
    table = StepTable()
    table.replication = np.full(rows, rep_index, dtype=np.int64)
    table.step = np.repeat(np.arange(step0, step0 + steps, dtype=np.int64), m)
    table.user = np.tile(np.arange(m, dtype=np.int64) + user_offset, steps)
    table.zone = np.tile(user_zone.astype(np.int64) + zone_offset, steps)
    table.served_by = np.tile(snap.served_by, steps)
    table.sinr = np.tile(snap.sinr, steps)
    table.se = np.tile(snap.se, steps)
    table.rate_bps = np.tile(snap.rate_bps, steps)
    table.delay_transmission_s = np.tile(trans, steps)
    table.delay_propagation_s = np.tile(prop, steps)
    table.delay_queue_s = np.tile(queue, steps)
    table.delay_processing_s = np.tile(proc, steps)
    table.delay_total_s = np.tile(total, steps)
    table.dropped = dropped_steps.reshape(-1)
    return table


def _simulate_replication(scenario: Scenario, plan: RunPlan, rep_index: int) -> ReplicationResult:
    seed = scenario.seed + rep_index
    root = np.random.SeedSequence(seed)
    cell_seeds = root.spawn(scenario.mbs_count)
    centers = _cell_centers(scenario)

    base, extra = divmod(scenario.active_users, scenario.mbs_count)
    tables, assignments, cost_rows, traces, users_chunks = [], [], [], [], []
    fleets: list[list[UavState]] = []
    user_offset = 0
    for c, center in enumerate(centers):
        cell_users = base + (1 if c < extra else 0)
        streams = [np.random.default_rng(s) for s in cell_seeds[c].spawn(4)]
        out = _simulate_cell(scenario, plan, rep_index, c, center, cell_users,
                             user_offset, streams)
        user_offset += cell_users
        tables.extend(out["tables"])
        assignments.extend(out["assignments"])
        cost_rows.extend(out["cost_rows"])
        traces.extend(out["cost_trace"])
        users_chunks.append(out["users_xy"])
        fleets.extend(out["fleets"])           # cell-major, aligned with assignments

    table = StepTable.concat(tables)
    metrics = (report_from_table(table, scenario.delay_threshold_s,
                                 scenario.sinr_threshold,
                                 scenario.se_coverage_threshold, traces)
               if len(table) else dataclasses.replace(
                   MetricsReport.empty(), cost_trace=tuple(float(c) for c in traces)))
    users_xy = np.vstack(users_chunks) if users_chunks else np.zeros((0, 2))
    return ReplicationResult(
        seed=seed, metrics=metrics, assignments=assignments, fleet_states=fleets,
        cost_rows=cost_rows, table=table if plan.record_steps else None,
        users_xy=users_xy)


def run(scenario: Scenario, plan: RunPlan | None = None) -> RunResult:
    """Execute all replications of one experiment, deterministically in the
    scenario seed."""
    plan = plan or RunPlan()
    reps = [_simulate_replication(scenario, plan, r) for r in range(plan.replications)]
    return RunResult(scenario, plan, reps)


# -- parameter sweeps ----------------------------------------------------------

def _apply_axis(scenario: Scenario, axis: str, value) -> Scenario:
    if axis == "extra_users":
        cap = math.floor(1.5 * scenario.users_per_cell_max * scenario.mbs_count)
        return scenario.replace(active_users=min(scenario.active_users + int(value), cap))
    if axis == "altitude_ft":
        return scenario.replace(altitude_range_ft=(float(value), float(value)))
    return scenario.replace(**{axis: value})


def sweep(scenario: Scenario, grid: dict, plan: RunPlan | None = None) -> list[dict]:
    """Run one experiment per grid point; failures are recorded per point and
    the sweep continues.

    Grid keys are scenario field names plus the ``extra_users`` (added active
    users, capped at 1.5x cell capacity) and ``altitude_ft`` (degenerate
    altitude range) convenience axes.
    """
    if not grid:
        raise ValueError("sweep grid must be non-empty")
    plan = plan or RunPlan(record_steps=False)
    axes = list(grid)
    rows = []
    shape = [len(grid[a]) for a in axes]
    for flat in range(int(np.prod(shape))):
        coords = np.unravel_index(flat, shape)
        point = {axes[i]: grid[axes[i]][coords[i]] for i in range(len(axes))}
        row = dict(point)
        try:
            scn = scenario
            for axis, value in point.items():
                scn = _apply_axis(scn, axis, value)
            result = run(scn, plan)
            for name, stats in result.summary().items():
                row[name] = stats["mean"]
                row[name + "_std"] = stats["std"]
            row["error"] = None
        except Exception as exc:  # per-point isolation
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


# -- output files ----------------------------------------------------------------

def write_outputs(result: RunResult, outdir) -> dict:
    """Write metrics.json, steps.csv, assignment.json and costs.csv."""
    os.makedirs(outdir, exist_ok=True)
    paths = {}

    paths["metrics"] = os.path.join(outdir, "metrics.json")
    with open(paths["metrics"], "w", encoding="utf-8") as fh:
        json.dump(result.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    paths["steps"] = os.path.join(outdir, "steps.csv")
    table = StepTable.concat([r.table for r in result.replications if r.table is not None])
    table.write_csv(paths["steps"])

    paths["assignment"] = os.path.join(outdir, "assignment.json")
    n_epochs = len(_epoch_bounds(result.plan))
    payload = []
    for i, rep in enumerate(result.replications):
        epochs = []
        for j, a in enumerate(rep.assignments):
            record = dict(a.to_dict(), epoch=j % n_epochs, cell=j // n_epochs)
            if j < len(rep.fleet_states):
                record["uavs"] = [
                    {"uav": s.uav_id, "zone": s.assigned_zone,
                     "position_m": [float(v) for v in s.position]}
                    for s in rep.fleet_states[j]
                ]
            epochs.append(record)
        payload.append({"replication": i, "epochs": epochs})
    with open(paths["assignment"], "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    paths["costs"] = os.path.join(outdir, "costs.csv")
    with open(paths["costs"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COST_COLUMNS)
        for row in (r for rep in result.replications for r in rep.cost_rows):
            writer.writerow([row["replication"], row["epoch"], row["zone"],
                             row["requests"], repr(row["area_load"]),
                             repr(row["area_density"]), repr(row["uav_density"]),
                             repr(row["area_cost"]), repr(row["uav_cost"]),
                             repr(row["total_cost"]), int(row["constraint_ok"]),
                             int(row["constraint_infeasible"])])
    return paths
