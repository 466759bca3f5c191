"""Experiment configuration, cell geometry and demand-zone partitioning.

A single macro cell is a flat-topped regular hexagon centred on its base
station.  Six "standard" guider rays run from the centre through the
vertices; demand-driven partitioning inserts additional rays between them
so that every unmanned aerial node ends up with exactly one angular zone.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

FT_TO_M = 0.3048

STANDARD_SECTOR_COUNT = 6
TWO_PI = 2.0 * math.pi

# relative clamp that keeps an inserted guider ray strictly inside its parent
_SPLIT_EPS = 1e-9


@dataclass(frozen=True)
class Scenario:
    """Full immutable experiment configuration.

    Field defaults are the desk-scale reference configuration (a single
    macro base station instead of ten).  All values can be overridden
    through a flat JSON config file (see ``from_config``).
    """

    area_side_m: float = 10_000.0
    mbs_count: int = 1
    users_per_cell_max: int = 1200          # cell user capacity
    uav_count: int = 6                      # aerial nodes per cell == guider lines
    uav_capacity: int = 200                 # service requests one UAV handles per step
    noise_psd_dbm_hz: float = -170.0
    packet_size_bytes: float = 1024.0
    altitude_range_ft: tuple[float, float] = (200.0, 500.0)
    offered_traffic_bps: float = 256_000.0  # per active user
    pathloss_exp: float = 4.0
    tx_const_db: float = -11.0              # geometry constant of the link budget
    uav_power_dbm: float = 35.0
    service_requests_per_zone: tuple[int, int] = (30, 50)
    bandwidth_hz: float = 10e6
    active_users: int = 400
    eta1: float = 1.0
    eta2: float = 1.0
    seed: int = 1
    uavs_enabled: bool = True
    backhaul_cap_bps: float = 1.2e9
    delay_threshold_s: float = 0.2
    sinr_threshold: float = 0.55            # linear
    se_coverage_threshold: float = 0.03     # bits/s/Hz

    # plumbing knobs outside the reference configuration
    mbs_power_dbm: float = 46.0
    mbs_height_m: float = 30.0
    los_min_elevation_deg: float = 10.0
    los_coverage_fraction: float = 0.95
    processing_delay_s: float = 0.002
    propagation_speed_mps: float = 3.0e8
    mbs_request_capacity: int = 0           # 0 means "use users_per_cell_max"
    admission_squared: bool = False
    max_zones: int = 12

    def __post_init__(self):
        if not (0.5 <= self.eta1 <= 1.0):
            raise ValueError(f"eta1 must lie in [0.5, 1], got {self.eta1}")
        if not (self.eta1 <= self.eta2 <= 1.0):
            raise ValueError(f"eta2 must lie in [eta1, 1], got {self.eta2}")
        lo, hi = self.altitude_range_ft
        if not (0.0 < lo <= hi):
            raise ValueError(f"altitude range must satisfy 0 < min <= max, got {self.altitude_range_ft}")
        for name in ("mbs_count", "users_per_cell_max", "uav_count", "uav_capacity", "max_zones"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        # one zone per aerial node, so the zone cap bounds the fleet too
        if self.uav_count > self.max_zones:
            raise ValueError(f"uav_count {self.uav_count} exceeds max_zones {self.max_zones}")
        if self.active_users < 0:
            raise ValueError("active_users must be >= 0")
        # 1.5x headroom allows the oversubscribed "extra users" sweeps
        cap = math.floor(1.5 * self.users_per_cell_max * self.mbs_count)
        if self.active_users > cap:
            raise ValueError(f"active_users={self.active_users} exceeds 1.5x cell capacity {cap}")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be > 0")
        r_lo, r_hi = self.service_requests_per_zone
        if not (0 < r_lo <= r_hi):
            raise ValueError("service_requests_per_zone must satisfy 0 < lo <= hi")
        if self.offered_traffic_bps <= 0 or self.packet_size_bytes <= 0:
            raise ValueError("offered traffic and packet size must be > 0")
        if self.delay_threshold_s <= 0 or self.sinr_threshold <= 0 or self.se_coverage_threshold <= 0:
            raise ValueError("thresholds must be > 0")

    # -- derived quantities ------------------------------------------------

    @property
    def cell_radius_m(self) -> float:
        """Circumradius of one hexagonal cell, inscribed in its square tile."""
        tiles_per_side = math.ceil(math.sqrt(self.mbs_count))
        return self.area_side_m / (2.0 * tiles_per_side)

    @property
    def altitude_range_m(self) -> tuple[float, float]:
        lo, hi = self.altitude_range_ft
        return (lo * FT_TO_M, hi * FT_TO_M)

    @property
    def packet_bits(self) -> float:
        return self.packet_size_bytes * 8.0

    @property
    def packet_rate_pps(self) -> float:
        """Per-user packet arrival rate implied by the offered traffic."""
        return self.offered_traffic_bps / self.packet_bits

    @property
    def request_rate_per_user(self) -> float:
        """Mean service requests per user per step, calibrated so that the
        per-zone totals land in the configured requests-per-zone band."""
        if self.active_users == 0:
            return 0.0
        lo, hi = self.service_requests_per_zone
        per_cell_users = max(1, self.active_users // self.mbs_count)
        return 0.5 * (lo + hi) * self.uav_count / per_cell_users

    @property
    def mbs_request_cap(self) -> int:
        return self.mbs_request_capacity if self.mbs_request_capacity > 0 else self.users_per_cell_max

    # -- config file I/O ---------------------------------------------------

    @classmethod
    def from_config(cls, path: str) -> "Scenario":
        """Load a scenario from a flat key/value JSON file.

        Unknown keys are rejected; omitted keys take their defaults.
        """
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must contain a JSON object")
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "Scenario":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        clean = {}
        for key, value in raw.items():
            if isinstance(value, list):
                value = tuple(value)
            clean[key] = value
        return cls(**clean)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for key, value in out.items():
            if isinstance(value, tuple):
                out[key] = list(value)
        return out

    def replace(self, **kwargs) -> "Scenario":
        return dataclasses.replace(self, **kwargs)


@dataclass(frozen=True)
class Zone:
    """One angular demand zone of the hexagonal cell.

    ``guider_angles`` are the bounding rays (radians, start < end, half-open
    ``[start, end)``); the polygon is the wedge clipped to the hexagon.
    """

    zone_id: int
    polygon: np.ndarray
    guider_angles: tuple[float, float]
    users: tuple[int, ...] = ()
    request_count: int = 0
    drops: tuple[bool, ...] = ()

    @property
    def angular_width(self) -> float:
        return self.guider_angles[1] - self.guider_angles[0]

    def with_stats(self, users=None, request_count=None, drops=None) -> "Zone":
        kwargs = {}
        if users is not None:
            kwargs["users"] = tuple(int(u) for u in users)
        if request_count is not None:
            kwargs["request_count"] = int(request_count)
        if drops is not None:
            kwargs["drops"] = tuple(bool(d) for d in drops)
        return dataclasses.replace(self, **kwargs)


@dataclass
class UserEquipment:
    """A ground terminal: position inside the macro cell, activity flag and
    the number of service requests it currently has pending."""

    ue_id: int
    position: np.ndarray
    active: bool = True
    pending_requests: int = 0


# -- hexagon geometry -------------------------------------------------------

def build_hex_cell(center, radius: float) -> np.ndarray:
    """Return the 6 vertices of a flat-topped regular hexagon (CCW, first
    vertex on the +x axis)."""
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    cx, cy = float(center[0]), float(center[1])
    angles = np.arange(6) * (math.pi / 3.0)
    return np.column_stack((cx + radius * np.cos(angles), cy + radius * np.sin(angles)))


def hex_area(radius: float) -> float:
    return 1.5 * math.sqrt(3.0) * radius * radius


def hex_center(cell: np.ndarray) -> np.ndarray:
    return cell.mean(axis=0)


def hex_circumradius(cell: np.ndarray) -> float:
    c = hex_center(cell)
    return float(np.linalg.norm(cell[0] - c))


def hex_boundary_radius(cell: np.ndarray, theta) -> np.ndarray:
    """Distance from the centre to the hexagon boundary along angle theta."""
    radius = hex_circumradius(cell)
    apothem = radius * math.cos(math.pi / 6.0)
    theta = np.asarray(theta, dtype=float) % TWO_PI
    sector = np.floor(theta / (math.pi / 3.0))
    normal = sector * (math.pi / 3.0) + math.pi / 6.0
    return apothem / np.cos(theta - normal)


def hex_contains(cell: np.ndarray, points) -> np.ndarray:
    """Vectorised point-in-hexagon test (boundary counts as inside)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float)) - hex_center(cell)
    rho = np.hypot(pts[:, 0], pts[:, 1])
    theta = np.arctan2(pts[:, 1], pts[:, 0]) % TWO_PI
    return rho <= hex_boundary_radius(cell, theta) * (1.0 + 1e-12)


def polygon_centroid(polygon: np.ndarray) -> np.ndarray:
    """Area centroid of a simple polygon (shoelace formula)."""
    x, y = polygon[:, 0], polygon[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = cross.sum() / 2.0
    if abs(area) < 1e-12:
        return polygon.mean(axis=0)
    cx = ((x + xn) * cross).sum() / (6.0 * area)
    cy = ((y + yn) * cross).sum() / (6.0 * area)
    return np.array([cx, cy])


def _wedge_polygon(cell: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Clip the angular wedge [lo, hi] to the hexagon."""
    center = hex_center(cell)
    if hi - lo >= TWO_PI - 1e-12:
        return cell.copy()
    pts = [center + hex_boundary_radius(cell, lo) * np.array([math.cos(lo), math.sin(lo)])]
    vertex_angles = np.arange(6) * (math.pi / 3.0)
    for base in (0.0, TWO_PI):
        for ang in vertex_angles + base:
            if lo < ang < hi:
                pts.append(center + hex_circumradius(cell) * np.array([math.cos(ang), math.sin(ang)]))
    pts.append(center + hex_boundary_radius(cell, hi) * np.array([math.cos(hi), math.sin(hi)]))
    pts.append(center.copy())
    return np.array(pts)


# -- demand-driven partitioning ----------------------------------------------

def _demand_mass(weights: np.ndarray, lo: float, hi: float) -> float:
    """Total demand mass of [lo, hi) under a piecewise-constant angular
    density with one bin per weight entry."""
    nbins = len(weights)
    width = TWO_PI / nbins
    total = 0.0
    for i, w in enumerate(weights):
        if w == 0.0:
            continue
        b_lo, b_hi = i * width, (i + 1) * width
        for shift in (0.0, TWO_PI):
            ov = min(hi, b_hi + shift) - max(lo, b_lo + shift)
            if ov > 0:
                total += w * ov / width
    return total


def _demand_centroid(weights: np.ndarray, lo: float, hi: float) -> float:
    """Demand-weighted angular centroid of [lo, hi); midpoint if empty."""
    nbins = len(weights)
    width = TWO_PI / nbins
    mass = 0.0
    moment = 0.0
    for i, w in enumerate(weights):
        if w == 0.0:
            continue
        for shift in (0.0, TWO_PI):
            s_lo = max(lo, i * width + shift)
            s_hi = min(hi, (i + 1) * width + shift)
            if s_hi > s_lo:
                dens = w / width
                mass += dens * (s_hi - s_lo)
                moment += dens * 0.5 * (s_hi * s_hi - s_lo * s_lo)
    if mass <= 0.0:
        return 0.5 * (lo + hi)
    c = moment / mass
    pad = _SPLIT_EPS * (hi - lo)
    return min(max(c, lo + pad), hi - pad)


def _refine(boundaries: list[float], weights: np.ndarray, target: int) -> list[float]:
    """Insert new guider rays at the demand centroid of the hottest interval
    until ``target`` intervals exist (cyclically, one interval per boundary)."""
    bounds = sorted(boundaries)
    while len(bounds) < target:
        ivals = _intervals(bounds)
        masses = [_demand_mass(weights, lo, hi) for lo, hi in ivals]
        hot = int(np.argmax(masses))
        lo, hi = ivals[hot]
        bounds.append(_demand_centroid(weights, lo, hi) % TWO_PI)
        bounds.sort()
    return bounds


def _intervals(bounds: list[float]) -> list[tuple[float, float]]:
    out = []
    for i, lo in enumerate(bounds):
        hi = bounds[i + 1] if i + 1 < len(bounds) else bounds[0] + TWO_PI
        out.append((lo, hi))
    return out


def partition_zones(cell: np.ndarray, demand, k: int, max_zones: int = 12) -> list[Zone]:
    """Partition the hexagonal cell into ``k`` demand zones.

    ``demand`` is a vector of non-negative request weights over equal angular
    bins (one per standard sector in normal use).  For ``k`` of at least the
    standard sector count, partitioning starts from the six vertex rays and
    splits the hottest sector at its demand-weighted angular centroid; for
    smaller ``k`` the whole hexagon is split recursively the same way.  An
    all-zero demand vector degenerates to a uniform angular split.
    """
    if k < 1:
        raise ValueError(f"zone count must be >= 1, got {k}")
    if k > max_zones:
        raise ValueError(f"zone count {k} exceeds the configured maximum {max_zones}")
    weights = np.asarray(demand, dtype=float)
    if weights.ndim != 1 or len(weights) < 1:
        raise ValueError("demand must be a 1-D weight vector")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ValueError("demand weights must be finite and non-negative")

    if k == 1:
        return [Zone(0, _wedge_polygon(cell, 0.0, TWO_PI), (0.0, TWO_PI))]

    if weights.sum() == 0.0:
        bounds = [i * TWO_PI / k for i in range(k)]
    elif k >= STANDARD_SECTOR_COUNT:
        bounds = _refine(list(standard_guider_angles()), weights, k)
    else:
        bounds = _refine([0.0], weights, k)

    zones = []
    for zid, (lo, hi) in enumerate(_intervals(bounds)):
        zones.append(Zone(zid, _wedge_polygon(cell, lo, hi), (lo, hi)))
    return zones


def standard_guider_angles() -> tuple[float, ...]:
    """Angles of the six standard guider rays (through the hexagon vertices)."""
    return tuple(i * math.pi / 3.0 for i in range(STANDARD_SECTOR_COUNT))


def zone_index_of(zones: list[Zone], points, center) -> np.ndarray:
    """Map each 2-D point to the zone whose half-open angular interval holds it."""
    pts = np.atleast_2d(np.asarray(points, dtype=float)) - np.asarray(center, dtype=float)
    theta = np.arctan2(pts[:, 1], pts[:, 0]) % TWO_PI
    starts = np.array([z.guider_angles[0] for z in zones])
    order = np.argsort(starts)
    sorted_starts = starts[order]
    # angles below the first boundary wrap onto the last interval
    idx = np.searchsorted(sorted_starts, theta, side="right") - 1
    idx[idx < 0] = len(zones) - 1
    return order[idx]


def sector_index_of(points, center) -> np.ndarray:
    """Standard 60-degree sector index of each point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float)) - np.asarray(center, dtype=float)
    theta = np.arctan2(pts[:, 1], pts[:, 0]) % TWO_PI
    return np.minimum((theta / (math.pi / 3.0)).astype(int), STANDARD_SECTOR_COUNT - 1)


# -- users --------------------------------------------------------------------

def place_users(cell: np.ndarray, zones: list[Zone], count: int, zone_weights, rng) -> list[UserEquipment]:
    """Place ``count`` active users, choosing zones with probability
    proportional to ``zone_weights`` and positions uniformly within each zone.

    Identical (cell, zones, weights, rng state) reproduce identical users.
    """
    weights = np.asarray(zone_weights, dtype=float)
    if len(weights) != len(zones):
        raise ValueError("one weight per zone required")
    if np.any(weights < 0) or weights.sum() <= 0:
        raise ValueError("zone weights must be non-negative and normalizable")
    probs = weights / weights.sum()
    center = hex_center(cell)
    radius = hex_circumradius(cell)

    users = []
    zone_draw = rng.choice(len(zones), size=count, p=probs) if count else np.array([], dtype=int)
    for uid in range(count):
        z = zones[int(zone_draw[uid])]
        lo, hi = z.guider_angles
        while True:
            theta = rng.uniform(lo, hi) % TWO_PI
            rho = radius * math.sqrt(rng.uniform(0.0, 1.0))
            if rho <= hex_boundary_radius(cell, theta):
                break
        pos = center + rho * np.array([math.cos(theta), math.sin(theta)])
        users.append(UserEquipment(uid, pos))
    return users


def min_uav_count(total_requests: int, per_uav_capacity: int) -> int:
    """Smallest whole number of aerial nodes able to absorb the request load."""
    if per_uav_capacity <= 0:
        raise ValueError("per-UAV capacity must be > 0")
    if total_requests < 0:
        raise ValueError("request count must be >= 0")
    return math.ceil(total_requests / per_uav_capacity)
