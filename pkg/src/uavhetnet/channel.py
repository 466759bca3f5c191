"""Link budget, line-of-sight gating, SINR and per-user spectral efficiency.

All aerial nodes share one band, so a served user sees every other UAV in
the cell as an interferer; the macro base station runs on an orthogonal
band and only competes with thermal noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

R_MIN_M = 1.0  # clamp that avoids the path-gain singularity at zero range


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class ChannelParams:
    tx_power_w: float
    geom_const: float          # linear geometry constant of the link budget
    pathloss_exp: float
    noise_psd_w_hz: float
    bandwidth_hz: float
    los_min_elevation_rad: float

    def __post_init__(self):
        if self.pathloss_exp < 2.0:
            raise ValueError(f"pathloss exponent must be >= 2, got {self.pathloss_exp}")
        if self.tx_power_w <= 0 or self.geom_const <= 0 or self.bandwidth_hz <= 0:
            raise ValueError("tx power, geometry constant and bandwidth must be > 0")
        if self.noise_psd_w_hz < 0:
            raise ValueError("noise PSD must be >= 0")

    @property
    def noise_power_w(self) -> float:
        return self.noise_psd_w_hz * self.bandwidth_hz

    @classmethod
    def for_uav(cls, scenario) -> "ChannelParams":
        return cls(
            tx_power_w=dbm_to_watts(scenario.uav_power_dbm),
            geom_const=db_to_linear(scenario.tx_const_db),
            pathloss_exp=scenario.pathloss_exp,
            noise_psd_w_hz=dbm_to_watts(scenario.noise_psd_dbm_hz),
            bandwidth_hz=scenario.bandwidth_hz,
            los_min_elevation_rad=math.radians(scenario.los_min_elevation_deg),
        )

    @classmethod
    def for_mbs(cls, scenario) -> "ChannelParams":
        """Baseline macro-station channel: same path-gain law, its own power."""
        return cls(
            tx_power_w=dbm_to_watts(scenario.mbs_power_dbm),
            geom_const=db_to_linear(scenario.tx_const_db),
            pathloss_exp=scenario.pathloss_exp,
            noise_psd_w_hz=dbm_to_watts(scenario.noise_psd_dbm_hz),
            bandwidth_hz=scenario.bandwidth_hz,
            los_min_elevation_rad=math.radians(scenario.los_min_elevation_deg),
        )


@dataclass(frozen=True)
class LinkGeometry:
    """3-D geometry of one transmitter-to-user link."""

    node_position: np.ndarray   # (x, y, altitude) metres
    ue_position: np.ndarray     # (x, y) metres
    distance_m: float
    elevation_rad: float


def link_geometry(node_position, ue_position) -> LinkGeometry:
    node = np.asarray(node_position, dtype=float)
    ue = np.asarray(ue_position, dtype=float)
    horiz = math.hypot(node[0] - ue[0], node[1] - ue[1])
    dist = math.hypot(horiz, node[2])
    return LinkGeometry(node, ue, dist, math.atan2(node[2], horiz))


def los_available(link: LinkGeometry, params: ChannelParams) -> bool:
    """Deterministic elevation-angle rule: the link is line-of-sight when the
    user sees the node at or above the minimum elevation."""
    return link.elevation_rad >= params.los_min_elevation_rad


def rx_power(link: LinkGeometry, params: ChannelParams) -> float:
    """Received power P*K/R^alpha in watts, with range clamped at 1 m."""
    r = max(link.distance_m, R_MIN_M)
    return params.tx_power_w * params.geom_const / r ** params.pathloss_exp


def rx_power_matrix(node_positions: np.ndarray, ue_positions: np.ndarray, params: ChannelParams) -> np.ndarray:
    """(nodes, users) received-power matrix for 3-D nodes and ground users."""
    nodes = np.atleast_2d(np.asarray(node_positions, dtype=float))
    ues = np.atleast_2d(np.asarray(ue_positions, dtype=float))
    dx = nodes[:, 0, None] - ues[None, :, 0]
    dy = nodes[:, 1, None] - ues[None, :, 1]
    dist = np.sqrt(dx * dx + dy * dy + nodes[:, 2, None] ** 2)
    dist = np.maximum(dist, R_MIN_M)
    return params.tx_power_w * params.geom_const / dist ** params.pathloss_exp


def sinr(ue_position, serving_index: int, uav_positions, params: ChannelParams) -> float:
    """Linear SINR of a user served by one aerial node among many.

    Every other node in ``uav_positions`` contributes interference whether or
    not the victim has line of sight to it.
    """
    positions = np.atleast_2d(np.asarray(uav_positions, dtype=float))
    if not (0 <= serving_index < len(positions)):
        raise ValueError("serving node must be one of the given nodes")
    powers = rx_power_matrix(positions, [ue_position], params)[:, 0]
    interference = powers.sum() - powers[serving_index]
    return float(powers[serving_index] / (interference + params.noise_power_w))


def snr(link: LinkGeometry, params: ChannelParams) -> float:
    """Interference-free SINR (single transmitter against thermal noise)."""
    return rx_power(link, params) / params.noise_power_w


def spectral_efficiency(sinr_linear: float, params: ChannelParams, shared_user_count: int) -> tuple[float, float]:
    """Per-user rate (bits/s) and spectral efficiency (bits/s/Hz) under
    round-robin sharing among ``shared_user_count`` users."""
    if shared_user_count < 1:
        raise ValueError("shared user count must be >= 1")
    rate = params.bandwidth_hz * math.log2(1.0 + sinr_linear) / shared_user_count
    return rate, rate / params.bandwidth_hz
