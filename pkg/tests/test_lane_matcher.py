import random

import pytest

from v2i_testbed.errors import NoMatch, UnknownLane
from v2i_testbed.geo import GeoPoint, LocalOffset, from_local, planar_distance, to_local
from v2i_testbed.lane_matcher import distance_to_intersection, match_lane
from v2i_testbed.messages import LaneGeometry, MapMessage

from conftest import REF, random_map
from oracles import brute_force_match


def geo_at(map_msg: MapMessage, east_cm: float, north_cm: float) -> GeoPoint:
    return from_local(map_msg.reference, LocalOffset(east=east_cm, north=north_cm))


def test_position_on_a_node_matches_that_node(simple_map):
    node = simple_map.lane(1).nodes[3]
    result = match_lane(simple_map, geo_at(simple_map, node.east, node.north))
    assert result.lane_id == 1
    assert result.matched_node_index == 3
    assert result.signal_group == 8


def test_far_position_raises_no_match(simple_map):
    with pytest.raises(NoMatch):
        match_lane(simple_map, geo_at(simple_map, 20000, 20000), max_lateral=5.0)


def test_matches_brute_force_on_random_geometry():
    rng = random.Random(99)
    for _ in range(300):
        map_msg = random_map(rng)
        pos = geo_at(map_msg, rng.uniform(-60000, 60000), rng.uniform(-60000, 60000))
        expected_d, expected_lane, expected_index = brute_force_match(map_msg, pos)
        try:
            result = match_lane(map_msg, pos, max_lateral=1e9)
        except NoMatch:
            pytest.fail("gate disabled, match must succeed")
        assert (result.lane_id, result.matched_node_index) == (expected_lane, expected_index)
        if expected_d > 5.0:
            with pytest.raises(NoMatch):
                match_lane(map_msg, pos, max_lateral=5.0)


def test_tie_breaks_toward_lowest_lane_then_node_and_ignores_storage_order():
    shared = (LocalOffset(0, 0), LocalOffset(0, -1000), LocalOffset(0, -2000))
    lane_a = LaneGeometry(lane_id=2, signal_group=1, nodes=shared)
    lane_b = LaneGeometry(lane_id=5, signal_group=2, nodes=shared)
    for lanes in ((lane_a, lane_b), (lane_b, lane_a)):
        map_msg = MapMessage(intersection_id=1, reference=REF, lanes=lanes)
        result = match_lane(map_msg, geo_at(map_msg, 0, -1000))
        assert result.lane_id == 2
        assert result.matched_node_index == 1
    # Equidistant between node 0 and node 2 of the same lane: lowest index wins.
    twin = LaneGeometry(
        lane_id=1, signal_group=1, nodes=(LocalOffset(0, 500), LocalOffset(0, -500))
    )
    map_msg = MapMessage(intersection_id=1, reference=REF, lanes=(twin,))
    assert match_lane(map_msg, geo_at(map_msg, 0, 0)).matched_node_index == 0


def test_distance_to_intersection_zero_at_stop_bar(simple_map):
    # The geodetic round trip costs a fraction of a micron; call that zero.
    stop = simple_map.lane(1).nodes[0]
    d = distance_to_intersection(simple_map, 1, geo_at(simple_map, stop.east, stop.north))
    assert d < 1e-6


def test_distance_matches_golden_terminal_value():
    # Stop bar at the origin, vehicle 1790 cm short of it: the 17.9 m readout.
    lane = LaneGeometry(
        lane_id=1, signal_group=8, nodes=(LocalOffset(0, 0), LocalOffset(0, -3000))
    )
    map_msg = MapMessage(intersection_id=1, reference=REF, lanes=(lane,))
    d = distance_to_intersection(map_msg, 1, geo_at(map_msg, 0, -1790))
    assert abs(d - 17.9) < 1e-6


def test_distance_is_planar_distance_of_offsets():
    rng = random.Random(5)
    for _ in range(100):
        map_msg = random_map(rng)
        lane = rng.choice(map_msg.lanes)
        east, north = rng.uniform(-60000, 60000), rng.uniform(-60000, 60000)
        pos = geo_at(map_msg, east, north)
        expected = planar_distance(to_local(map_msg.reference, pos), lane.nodes[0])
        assert distance_to_intersection(map_msg, lane.lane_id, pos) == expected


def test_unknown_lane(simple_map):
    with pytest.raises(UnknownLane):
        distance_to_intersection(simple_map, 77, REF)


def test_distance_non_increasing_toward_stop_bar(simple_map):
    lane = simple_map.lane(1)
    # Walk the polyline from the far end toward the stop bar in small steps.
    samples = []
    for i in range(len(lane.nodes) - 1, 0, -1):
        a, b = lane.nodes[i], lane.nodes[i - 1]
        for frac in (0.0, 0.25, 0.5, 0.75):
            east = a.east + frac * (b.east - a.east)
            north = a.north + frac * (b.north - a.north)
            samples.append(distance_to_intersection(simple_map, 1, geo_at(simple_map, east, north)))
    samples.append(0.0)
    assert all(d1 >= d2 - 1e-9 for d1, d2 in zip(samples, samples[1:]))
