import json
import math

import numpy as np
import pytest

from uavhetnet.scenario import (Scenario, build_hex_cell, hex_area,
                                hex_boundary_radius, hex_center, hex_contains,
                                min_uav_count, partition_zones, place_users,
                                polygon_centroid, standard_guider_angles,
                                zone_index_of)

TWO_PI = 2.0 * math.pi


def shoelace_area(poly):
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# -- hexagon -------------------------------------------------------------------

def test_hex_vertices_on_circumcircle():
    cell = build_hex_cell((0.0, 0.0), 1.0)
    assert cell.shape == (6, 2)
    assert np.allclose(np.linalg.norm(cell, axis=1), 1.0)


def test_hex_area_closed_form():
    assert hex_area(1.0) == pytest.approx(1.5 * math.sqrt(3.0))
    # radius 5000 m
    assert hex_area(5000.0) == pytest.approx(6.4951905e7, rel=1e-6)
    cell = build_hex_cell((0.0, 0.0), 5000.0)
    assert shoelace_area(cell) == pytest.approx(hex_area(5000.0), rel=1e-12)


def test_hex_rejects_bad_radius():
    with pytest.raises(ValueError):
        build_hex_cell((0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        build_hex_cell((0.0, 0.0), -5.0)


def test_hex_boundary_radius_matches_vertices_and_apothem():
    cell = build_hex_cell((0.0, 0.0), 2.0)
    for k in range(6):
        assert hex_boundary_radius(cell, k * math.pi / 3) == pytest.approx(2.0)
        assert hex_boundary_radius(cell, k * math.pi / 3 + math.pi / 6) == pytest.approx(
            2.0 * math.cos(math.pi / 6))


# -- partitioning ---------------------------------------------------------------

def test_uniform_demand_six_zones_are_standard_sectors():
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    zones = partition_zones(cell, np.ones(6), 6)
    assert len(zones) == 6
    starts = sorted(z.guider_angles[0] for z in zones)
    assert np.allclose(starts, standard_guider_angles())
    for z in zones:
        assert z.angular_width == pytest.approx(math.pi / 3)


def test_single_zone_is_whole_hexagon():
    cell = build_hex_cell((0.0, 0.0), 700.0)
    zones = partition_zones(cell, np.ones(6), 1)
    assert len(zones) == 1
    assert shoelace_area(zones[0].polygon) == pytest.approx(hex_area(700.0), rel=1e-12)


def test_concentrated_demand_split_matches_integration_oracle():
    # all demand in standard sector 2 ([120, 180) degrees), two zones
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    weights = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    zones = partition_zones(cell, weights, 2)
    inserted = sorted(a for z in zones for a in z.guider_angles if a not in (0.0, TWO_PI))
    assert len(set(inserted)) == 1
    split = inserted[0]

    # independent oracle: demand-weighted centroid by numerical integration
    theta = np.linspace(0.0, TWO_PI, 600_001)
    dens = np.where((theta >= TWO_PI / 6 * 2) & (theta < TWO_PI / 6 * 3), 1.0, 0.0)
    oracle = np.trapezoid(theta * dens, theta) / np.trapezoid(dens, theta)
    assert split == pytest.approx(oracle, abs=1e-4)
    assert split == pytest.approx(math.radians(150.0), abs=1e-6)


def test_all_zero_demand_falls_back_to_uniform_split():
    cell = build_hex_cell((0.0, 0.0), 100.0)
    zones = partition_zones(cell, np.zeros(6), 4)
    widths = [z.angular_width for z in zones]
    assert np.allclose(widths, TWO_PI / 4)


def test_zone_cap_enforced():
    cell = build_hex_cell((0.0, 0.0), 100.0)
    with pytest.raises(ValueError):
        partition_zones(cell, np.ones(6), 13)
    with pytest.raises(ValueError):
        partition_zones(cell, np.ones(6), 0)
    with pytest.raises(ValueError):
        partition_zones(cell, -np.ones(6), 3)


def test_inserted_guiders_stay_strictly_inside_parent_standard_sector():
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    rng = np.random.default_rng(3)
    standard = set(standard_guider_angles())
    for _ in range(20):
        weights = rng.uniform(0.1, 2.0, size=6)
        zones = partition_zones(cell, weights, 9)
        bounds = sorted(z.guider_angles[0] for z in zones)
        inserted = [b for b in bounds if not any(abs(b - s) < 1e-12 for s in standard)]
        assert len(inserted) == 3
        for b in inserted:
            sector = int(b // (math.pi / 3))
            lo, hi = sector * math.pi / 3, (sector + 1) * math.pi / 3
            assert lo < b < hi


def test_partition_completeness_random_interior_points():
    cell = build_hex_cell((2000.0, -500.0), 900.0)
    rng = np.random.default_rng(11)
    zones = partition_zones(cell, rng.uniform(0.2, 1.0, size=6), 7)
    # zone angular intervals tile the circle
    widths = sum(z.angular_width for z in zones)
    assert widths == pytest.approx(TWO_PI, rel=1e-12)
    # rejection-sample interior points, each must land in exactly one interval
    center = hex_center(cell)
    pts = []
    while len(pts) < 10_000:
        cand = center + rng.uniform(-900.0, 900.0, size=(4000, 2))
        cand = cand[hex_contains(cell, cand)]
        pts.extend(cand.tolist())
    pts = np.array(pts[:10_000])
    idx = zone_index_of(zones, pts, center)
    theta = np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0]) % TWO_PI
    hits = np.zeros(len(pts), dtype=int)
    for z in zones:
        lo, hi = z.guider_angles
        hits += ((theta >= lo) & (theta < hi)).astype(int)
    assert np.all(hits == 1)
    for z in zones:
        lo, hi = z.guider_angles
        assert np.all((theta[idx == z.zone_id] >= lo) & (theta[idx == z.zone_id] < hi))


def test_partition_deterministic():
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    w = np.array([0.3, 0.1, 0.25, 0.05, 0.2, 0.1])
    za = partition_zones(cell, w, 8)
    zb = partition_zones(cell, w, 8)
    for a, b in zip(za, zb):
        assert a.guider_angles == b.guider_angles
        assert np.array_equal(a.polygon, b.polygon)


def test_zone_polygon_areas_sum_to_hexagon():
    cell = build_hex_cell((0.0, 0.0), 1234.0)
    zones = partition_zones(cell, np.array([5, 1, 1, 1, 1, 1.0]), 6)
    total = sum(shoelace_area(z.polygon) for z in zones)
    assert total == pytest.approx(hex_area(1234.0), rel=1e-9)


# -- UAV headcount ---------------------------------------------------------------

@pytest.mark.parametrize("requests,capacity,expected", [
    (400, 200, 2),
    (450, 200, 3),
    (0, 200, 0),
    (1, 200, 1),
])
def test_min_uav_count(requests, capacity, expected):
    assert min_uav_count(requests, capacity) == expected


def test_min_uav_count_rejects_bad_capacity():
    with pytest.raises(ValueError):
        min_uav_count(10, 0)


# -- user placement ----------------------------------------------------------------

def test_placement_deterministic():
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    zones = partition_zones(cell, np.ones(6), 6)
    u1 = place_users(cell, zones, 50, np.ones(6), np.random.default_rng(42))
    u2 = place_users(cell, zones, 50, np.ones(6), np.random.default_rng(42))
    for a, b in zip(u1, u2):
        assert np.array_equal(a.position, b.position)


def test_placement_counts_follow_weights_binomially():
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    zones = partition_zones(cell, np.ones(6), 6)
    users = place_users(cell, zones, 6000, np.ones(6), np.random.default_rng(7))
    xy = np.array([u.position for u in users])
    idx = zone_index_of(zones, xy, hex_center(cell))
    counts = np.bincount(idx, minlength=6)
    sigma = math.sqrt(6000 * (1 / 6) * (5 / 6))
    assert np.all(np.abs(counts - 1000) <= 3 * sigma)


def test_placement_degenerate_weight_confines_users():
    cell = build_hex_cell((0.0, 0.0), 1000.0)
    zones = partition_zones(cell, np.ones(6), 6)
    users = place_users(cell, zones, 200, [1, 0, 0, 0, 0, 0], np.random.default_rng(9))
    xy = np.array([u.position for u in users])
    assert np.all(zone_index_of(zones, xy, hex_center(cell)) == 0)


def test_placed_users_inside_cell():
    cell = build_hex_cell((500.0, 500.0), 800.0)
    zones = partition_zones(cell, np.ones(6), 3)
    users = place_users(cell, zones, 500, np.ones(3), np.random.default_rng(21))
    xy = np.array([u.position for u in users])
    assert np.all(hex_contains(cell, xy))


def test_polygon_centroid_of_hexagon_is_center():
    cell = build_hex_cell((10.0, -4.0), 100.0)
    assert np.allclose(polygon_centroid(cell), [10.0, -4.0], atol=1e-9)


# -- scenario config -----------------------------------------------------------------

def test_defaults_match_reference_table():
    scn = Scenario()
    assert scn.users_per_cell_max == 1200
    assert scn.uav_count == 6
    assert scn.uav_capacity == 200
    assert scn.noise_psd_dbm_hz == -170.0
    assert scn.packet_size_bytes == 1024.0
    assert scn.altitude_range_ft == (200.0, 500.0)
    assert scn.offered_traffic_bps == 256_000.0
    assert scn.pathloss_exp == 4.0
    assert scn.tx_const_db == -11.0
    assert scn.uav_power_dbm == 35.0
    assert scn.service_requests_per_zone == (30, 50)
    assert scn.bandwidth_hz == 10e6
    assert scn.active_users == 400
    assert scn.packet_rate_pps == pytest.approx(31.25)


@pytest.mark.parametrize("kwargs", [
    {"eta1": 0.4},
    {"eta1": 1.1},
    {"eta1": 0.9, "eta2": 0.8},
    {"eta2": 1.2},
    {"altitude_range_ft": (0.0, 500.0)},
    {"altitude_range_ft": (500.0, 200.0)},
    {"active_users": -1},
    {"active_users": 2000},     # above 1.5x capacity with one MBS
    {"uav_count": 0},
    {"uav_count": 13},          # above the zone cap
    {"bandwidth_hz": 0.0},
    {"service_requests_per_zone": (0, 50)},
])
def test_scenario_validation_rejects(kwargs):
    with pytest.raises(ValueError):
        Scenario(**kwargs)


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps({"seed": 99, "active_users": 120, "eta1": 0.8,
                                "altitude_range_ft": [250, 450]}))
    scn = Scenario.from_config(str(path))
    assert scn.seed == 99
    assert scn.active_users == 120
    assert scn.altitude_range_ft == (250, 450)
    # full round trip through to_dict
    again = Scenario.from_dict(scn.to_dict())
    assert again == scn


def test_config_unknown_keys_rejected(tmp_path):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps({"seed": 1, "not_a_key": 5, "also_bad": 1}))
    with pytest.raises(ValueError, match="also_bad, not_a_key"):
        Scenario.from_config(str(path))
