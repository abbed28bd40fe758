import random

import pytest

from v2i_testbed.errors import InvariantViolation, OutOfRange, ParseError
from v2i_testbed.geo import GeoPoint, LocalOffset
from v2i_testbed.messages import (
    LaneGeometry,
    MapMessage,
    PhaseStatus,
    SignalState,
    SpatMessage,
    decode,
    encode,
    remaining_time,
    spat_covers_map,
)

from conftest import random_map, random_spat


def one_lane_map() -> MapMessage:
    return MapMessage(
        intersection_id=42,
        reference=GeoPoint(lat=40.0, lon=-83.0),
        lanes=(
            LaneGeometry(
                lane_id=1,
                signal_group=8,
                nodes=(LocalOffset(0, -900), LocalOffset(0, -2400)),
            ),
        ),
    )


def test_map_round_trip():
    m = one_lane_map()
    assert decode(encode(m)) == m


def test_spat_round_trip_and_canonical_bytes():
    a = SpatMessage(
        intersection_id=42,
        timestamp_ds=1000,
        phases=(
            PhaseStatus(signal_group=8, event_state=SignalState.RED, min_end_time_ds=1086),
            PhaseStatus(signal_group=4, event_state=SignalState.GREEN, min_end_time_ds=1300),
        ),
    )
    b = SpatMessage(
        intersection_id=42,
        timestamp_ds=1000,
        phases=(
            PhaseStatus(signal_group=8, event_state=SignalState.RED, min_end_time_ds=1086),
            PhaseStatus(signal_group=4, event_state=SignalState.GREEN, min_end_time_ds=1300),
        ),
    )
    assert a == b
    assert encode(a) == encode(b)
    assert decode(encode(a)) == a


def test_wire_field_names_are_the_documented_schema():
    import json

    obj = json.loads(encode(one_lane_map()))
    assert set(obj) == {"type", "intersection_id", "reference", "lanes"}
    assert set(obj["reference"]) == {"lat", "lon"}
    assert set(obj["lanes"][0]) == {"lane_id", "signal_group", "nodes"}
    assert set(obj["lanes"][0]["nodes"][0]) == {"east_cm", "north_cm"}

    spat = SpatMessage(
        intersection_id=1,
        timestamp_ds=0,
        phases=(PhaseStatus(signal_group=1, event_state=SignalState.GREEN, min_end_time_ds=5),),
    )
    obj = json.loads(encode(spat))
    assert set(obj) == {"type", "intersection_id", "timestamp_ds", "phases"}
    assert set(obj["phases"][0]) == {"signal_group", "event_state", "min_end_time_ds"}


def test_random_messages_round_trip_exactly():
    rng = random.Random(1234)
    for _ in range(2000):
        msg = random_map(rng) if rng.random() < 0.5 else random_spat(rng)
        data = encode(msg)
        again = decode(data)
        assert again == msg
        assert encode(again) == data


def test_truncated_bytes_raise_parse_error():
    data = encode(one_lane_map())
    with pytest.raises(ParseError):
        decode(data[: len(data) // 2])
    with pytest.raises(ParseError):
        decode(b"\xff\xfe garbage")
    with pytest.raises(ParseError):
        decode(b"[1,2,3]")
    with pytest.raises(ParseError):
        decode(b'{"type":"BSM"}')


def test_out_of_range_min_end_time_is_invariant_violation():
    data = encode(
        SpatMessage(
            intersection_id=1,
            timestamp_ds=0,
            phases=(
                PhaseStatus(signal_group=1, event_state=SignalState.RED, min_end_time_ds=100),
            ),
        )
    ).replace(b'"min_end_time_ds":100', b'"min_end_time_ds":40000')
    with pytest.raises(InvariantViolation):
        decode(data)


def test_structural_problems_are_parse_errors():
    with pytest.raises(ParseError):
        decode(b'{"type":"SPAT","intersection_id":1,"phases":[]}')  # missing timestamp
    with pytest.raises(ParseError):
        decode(b'{"type":"SPAT","intersection_id":1,"timestamp_ds":"x","phases":[]}')


def test_domain_invariants_rejected():
    ref = GeoPoint(lat=0.0, lon=0.0)
    with pytest.raises(InvariantViolation):
        MapMessage(intersection_id=1, reference=ref, lanes=())
    with pytest.raises(InvariantViolation):
        LaneGeometry(lane_id=1, signal_group=1, nodes=(LocalOffset(0, 0),))
    with pytest.raises(InvariantViolation):
        LaneGeometry(
            lane_id=1, signal_group=1, nodes=(LocalOffset(0, 0), LocalOffset(100000, 0))
        )
    with pytest.raises(InvariantViolation):  # non-integer centimeters on a map node
        LaneGeometry(
            lane_id=1, signal_group=1, nodes=(LocalOffset(0.5, 0), LocalOffset(100, 0))
        )
    with pytest.raises(InvariantViolation):
        PhaseStatus(signal_group=0, event_state=SignalState.RED, min_end_time_ds=0)
    with pytest.raises(InvariantViolation):
        SpatMessage(
            intersection_id=1,
            timestamp_ds=0,
            phases=(
                PhaseStatus(signal_group=2, event_state=SignalState.RED, min_end_time_ds=0),
                PhaseStatus(signal_group=2, event_state=SignalState.GREEN, min_end_time_ds=1),
            ),
        )
    lane = LaneGeometry(lane_id=1, signal_group=1, nodes=(LocalOffset(0, 0), LocalOffset(100, 0)))
    with pytest.raises(InvariantViolation):
        MapMessage(intersection_id=1, reference=ref, lanes=(lane, lane))


def test_spat_covers_map(simple_map):
    spat = SpatMessage(
        intersection_id=1,
        timestamp_ds=0,
        phases=(
            PhaseStatus(signal_group=8, event_state=SignalState.RED, min_end_time_ds=0),
            PhaseStatus(signal_group=4, event_state=SignalState.GREEN, min_end_time_ds=0),
        ),
    )
    assert spat_covers_map(spat, simple_map)
    partial = SpatMessage(intersection_id=1, timestamp_ds=0, phases=spat.phases[:1])
    assert not spat_covers_map(partial, simple_map)


# --- remaining time ----------------------------------------------------------


def phase(min_end: int) -> PhaseStatus:
    return PhaseStatus(signal_group=8, event_state=SignalState.RED, min_end_time_ds=min_end)


def test_remaining_time_examples():
    assert remaining_time(phase(1086), 1000) == 8.6  # the golden terminal value
    assert remaining_time(phase(1000), 1000) == 0.0
    assert remaining_time(phase(5), 35995) == 1.0  # wraps into the next hour


def test_remaining_time_domain():
    with pytest.raises(OutOfRange):
        remaining_time(phase(0), -1)
    with pytest.raises(OutOfRange):
        remaining_time(phase(0), 36000)
    with pytest.raises(OutOfRange):
        remaining_time("not a phase", 0)


def test_remaining_time_wrap_grid():
    # 360x360 grid; always in [0, 3600) and equal to the hour-shifted formula.
    for min_end in range(0, 36000, 100):
        p = phase(min_end)
        for now in range(0, 36000, 100):
            value = remaining_time(p, now)
            assert 0.0 <= value < 3600.0
            shifted = ((min_end + 36000 - now) % 36000) / 10.0
            assert value == shifted
