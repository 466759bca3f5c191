import math

import numpy as np
import pytest

from uavhetnet.channel import (ChannelParams, db_to_linear, dbm_to_watts,
                               linear_to_db, link_geometry, los_available,
                               rx_power, rx_power_matrix, sinr, snr,
                               spectral_efficiency, watts_to_dbm)
from uavhetnet.scenario import Scenario


@pytest.fixture
def table_params():
    # reference configuration: 35 dBm, -11 dB, alpha 4, -170 dBm/Hz, 10 MHz
    return ChannelParams.for_uav(Scenario())


def test_unit_conversions_round_trip():
    assert dbm_to_watts(30.0) == pytest.approx(1.0)
    assert watts_to_dbm(dbm_to_watts(17.3)) == pytest.approx(17.3)
    assert db_to_linear(linear_to_db(0.07)) == pytest.approx(0.07)


def test_params_from_scenario(table_params):
    assert table_params.tx_power_w == pytest.approx(dbm_to_watts(35.0))
    assert table_params.geom_const == pytest.approx(db_to_linear(-11.0))
    # noise power over the full band: -170 dBm/Hz + 70 dB-Hz = -100 dBm
    assert watts_to_dbm(table_params.noise_power_w) == pytest.approx(-100.0)


def test_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(1.0, 1.0, 1.5, 1e-20, 1e7, 0.0)   # alpha < 2
    with pytest.raises(ValueError):
        ChannelParams(0.0, 1.0, 4.0, 1e-20, 1e7, 0.0)


# -- line of sight -----------------------------------------------------------------

def test_los_overhead_is_true(table_params):
    link = link_geometry([0.0, 0.0, 100.0], [0.0, 0.0])
    assert link.elevation_rad == pytest.approx(math.pi / 2)
    assert los_available(link, table_params)


def test_los_fails_at_long_range_low_altitude(table_params):
    # 500 ft (152.4 m) altitude, 10 km horizontal offset: 0.873 degrees
    link = link_geometry([0.0, 0.0, 152.4], [10_000.0, 0.0])
    assert math.degrees(link.elevation_rad) == pytest.approx(0.8731, abs=1e-3)
    assert not los_available(link, table_params)


def test_los_zero_threshold_always_true():
    params = ChannelParams(1.0, 1.0, 4.0, 1e-20, 1e7, 0.0)
    link = link_geometry([0.0, 0.0, 1.0], [1e9, 0.0])
    assert los_available(link, params)


def test_link_geometry_distance_is_euclidean():
    link = link_geometry([3.0, 4.0, 12.0], [0.0, 0.0])
    assert link.distance_m == pytest.approx(13.0, rel=1e-12)


# -- received power ------------------------------------------------------------------

def test_rx_power_matches_db_domain_oracle(table_params):
    link = link_geometry([0.0, 0.0, 500.0], [0.0, 0.0])
    # independent hand calculation in the dB domain
    rx_dbm = 35.0 - 11.0 - 40.0 * math.log10(500.0)
    assert rx_power(link, table_params) == pytest.approx(dbm_to_watts(rx_dbm), rel=1e-9)
    assert rx_power(link, table_params) == pytest.approx(4.019e-12, rel=1e-3)


def test_rx_power_unit_distance_returns_tx_power():
    params = ChannelParams(2.5, 1.0, 2.0, 1e-20, 1e7, 0.0)
    link = link_geometry([0.0, 0.0, 1.0], [0.0, 0.0])
    assert rx_power(link, params) == pytest.approx(2.5)


def test_rx_power_power_law(table_params):
    near = link_geometry([0.0, 0.0, 400.0], [0.0, 0.0])
    far = link_geometry([0.0, 0.0, 800.0], [0.0, 0.0])
    assert rx_power(near, table_params) / rx_power(far, table_params) == pytest.approx(16.0)


def test_rx_power_clamps_tiny_ranges(table_params):
    at_zero = link_geometry([0.0, 0.0, 0.0], [0.0, 0.0])
    assert math.isfinite(rx_power(at_zero, table_params))
    at_one = link_geometry([0.0, 0.0, 1.0], [0.0, 0.0])
    assert rx_power(at_zero, table_params) == rx_power(at_one, table_params)


def test_rx_power_matrix_agrees_with_scalar(table_params):
    rng = np.random.default_rng(5)
    nodes = np.column_stack([rng.uniform(-500, 500, 4), rng.uniform(-500, 500, 4),
                             rng.uniform(60, 150, 4)])
    ues = rng.uniform(-800, 800, size=(7, 2))
    mat = rx_power_matrix(nodes, ues, table_params)
    for i in range(4):
        for j in range(7):
            assert mat[i, j] == pytest.approx(
                rx_power(link_geometry(nodes[i], ues[j]), table_params), rel=1e-12)


# -- SINR ----------------------------------------------------------------------------

def test_single_node_sinr_matches_db_arithmetic(table_params):
    value = sinr([0.0, 0.0], 0, [[0.0, 0.0, 500.0]], table_params)
    assert value == pytest.approx(40.19, rel=1e-3)
    # independent dB-domain computation
    oracle_db = (35.0 - 11.0 - 40.0 * math.log10(500.0)) - (-100.0)
    assert linear_to_db(value) == pytest.approx(oracle_db, rel=1e-9)


def test_two_equidistant_nodes_drive_sinr_to_one(table_params):
    nodes = [[0.0, 0.0, 300.0], [200.0, 0.0, 300.0]]
    value = sinr([100.0, 0.0], 0, nodes, table_params)
    # symmetric interference, noise negligible at this range
    assert value == pytest.approx(1.0, rel=1e-2)


def test_removing_interferer_strictly_raises_sinr(table_params):
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = rng.integers(2, 7)
        nodes = np.column_stack([rng.uniform(-2000, 2000, n),
                                 rng.uniform(-2000, 2000, n),
                                 rng.uniform(61, 152, n)])
        ue = rng.uniform(-2000, 2000, 2)
        full = sinr(ue, 0, nodes, table_params)
        reduced = sinr(ue, 0, nodes[:-1], table_params)
        assert reduced > full


def test_raising_serving_power_never_lowers_sinr(table_params):
    stronger = ChannelParams(table_params.tx_power_w * 2, table_params.geom_const,
                             table_params.pathloss_exp, table_params.noise_psd_w_hz,
                             table_params.bandwidth_hz, table_params.los_min_elevation_rad)
    link = link_geometry([50.0, 20.0, 100.0], [0.0, 0.0])
    assert snr(link, stronger) > snr(link, table_params)


def test_sinr_rejects_foreign_serving_index(table_params):
    with pytest.raises(ValueError):
        sinr([0.0, 0.0], 3, [[0.0, 0.0, 100.0]], table_params)


# -- spectral efficiency ---------------------------------------------------------------

def test_spectral_efficiency_unit_sinr(table_params):
    rate, se = spectral_efficiency(1.0, table_params, 400)
    assert rate == pytest.approx(25_000.0)          # 10 MHz * 1 bit / 400 users
    assert se == pytest.approx(0.0025)


def test_spectral_efficiency_matches_reference_point(table_params):
    value = sinr([0.0, 0.0], 0, [[0.0, 0.0, 500.0]], table_params)
    rate, _ = spectral_efficiency(value, table_params, 400)
    assert rate == pytest.approx(134_000.0, rel=5e-3)


def test_spectral_efficiency_no_sharing_is_full_shannon(table_params):
    rate, se = spectral_efficiency(3.0, table_params, 1)
    assert rate == pytest.approx(table_params.bandwidth_hz * math.log2(4.0))
    assert se == pytest.approx(math.log2(4.0))


def test_spectral_efficiency_monotonicity(table_params):
    rng = np.random.default_rng(23)
    for _ in range(50):
        s = rng.uniform(0.01, 100.0)
        x = int(rng.integers(1, 500))
        r0, _ = spectral_efficiency(s, table_params, x)
        r1, _ = spectral_efficiency(s * 1.1, table_params, x)
        r2, _ = spectral_efficiency(s, table_params, x + 1)
        assert r1 > r0          # increasing in SINR
        assert r2 < r0          # decreasing in shared users


def test_spectral_efficiency_rejects_zero_users(table_params):
    with pytest.raises(ValueError):
        spectral_efficiency(1.0, table_params, 0)
