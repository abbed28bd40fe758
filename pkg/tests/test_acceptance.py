"""Acceptance suite: one test per release criterion, at its stated tolerance.

The terminal summary (see conftest) prints one PASS/FAIL line per criterion.
Randomized checks use fixed seeds so a failure is reproducible.
"""

import random
import time

import pytest

from v2i_testbed.errors import NoMatch
from v2i_testbed.geo import GeoPoint, LocalOffset, from_local
from v2i_testbed.glosa import ApproachingState, GlosaConfig, advise
from v2i_testbed.harness.events import contains_subsequence, events_to_obj, extract_events
from v2i_testbed.harness.logio import export_csv
from v2i_testbed.harness.render import render_glosa_status, render_rlvw_status
from v2i_testbed.harness.runner import run_scenario
from v2i_testbed.harness.scenario import (
    builtin_names,
    load_expectation,
    load_scenario,
    scenario_from_obj,
    scenario_to_obj,
)
from v2i_testbed.harness.transport import InprocTransport, LossyTransport, UdpTransport
from v2i_testbed.lane_matcher import match_lane
from v2i_testbed.messages import (
    LaneGeometry,
    MapMessage,
    PhaseStatus,
    SignalState,
    SpatMessage,
    decode,
    encode,
    remaining_time,
)
from v2i_testbed.rlvw import RlvwInput, evaluate

from conftest import random_map, random_spat
from oracles import arrival_violates, brute_force_match

REF = GeoPoint(lat=40.0, lon=-83.0)


def test_rlvw_terminal_golden_block():
    """RED / 17.9 m / 17.42 km/h / 8.6 s reproduces the RLVW terminal UI."""
    map_msg = MapMessage(
        intersection_id=1,
        reference=REF,
        lanes=(
            LaneGeometry(
                lane_id=1,
                signal_group=8,
                nodes=(LocalOffset(0, 0), LocalOffset(0, -1800), LocalOffset(0, -3600)),
            ),
        ),
    )
    spat = SpatMessage(
        intersection_id=1,
        timestamp_ds=1000,
        phases=(PhaseStatus(signal_group=8, event_state=SignalState.RED, min_end_time_ds=1086),),
    )
    pos = from_local(REF, LocalOffset(0, -1790))
    match = match_lane(map_msg, pos, max_lateral=5.0)
    phase = spat.phase(match.signal_group)
    t_rem = remaining_time(phase, now_ds=1000)
    speed_kmh = 17.42
    status = evaluate(
        RlvwInput(
            state=phase.event_state,
            d_int=match.distance_to_intersection,
            v_veh=speed_kmh / 3.6,
            t_rem=t_rem,
            t_yellow=3.0,
        )
    )
    assert status.warn is True
    block = render_rlvw_status(
        lane_id=match.lane_id,
        signal_group=match.signal_group,
        state=phase.event_state,
        remaining_s=t_rem,
        distance_m=match.distance_to_intersection,
        speed_kmh=speed_kmh,
        warn=status.warn,
    )
    assert block == (
        "Matched Lane: 1\n"
        "Phase Group Number: 8\n"
        "Phase State: RED\n"
        "Remaining Time: 8.6 sec\n"
        "Distance to Intersection: 17.9 m\n"
        "Vehicle Speed: 17.42 km/h\n"
        "Warning Status: 1"
    )


def test_glosa_advisory_golden_block():
    """GREEN / 23.32 m / 3.816 s / 60 km/h limit reproduces the GLOSA UI."""
    cfg = GlosaConfig(v_limit=60.0 / 3.6, t_yellow=3.0)
    adv = advise(SignalState.GREEN, t_rem=3.816, d_int=23.32, v_veh=3.0, cfg=cfg)
    assert adv.approaching_state is ApproachingState.SPEED_ADVISORY
    assert abs(adv.v_min_kmh - 22.0) <= 0.1
    assert adv.v_max_kmh == pytest.approx(60.0)
    assert adv.time_to_green_s == -1.0
    block = render_glosa_status(distance_m=23.32, light=SignalState.GREEN, advisory=adv)
    assert block == (
        "Distance: 23.32 m\n"
        "Approaching State: 3\n"
        "Traffic Light State: 1\n"
        "Min Recommended Speed: 22.0 km/h\n"
        "Max Recommended Speed: 60.0 km/h\n"
        "Time to Green: -1 sec"
    )


def test_rlvw_oracle_equivalence_100k():
    """Closed-form warning equals the arrival-phase simulation, 0 mismatches."""
    rng = random.Random(20240815)
    states = list(SignalState)
    start = time.monotonic()
    mismatches = 0
    for _ in range(100_000):
        state = rng.choice(states)
        d = rng.uniform(1e-9, 300.0)
        v = rng.uniform(0.5, 30.0)
        t_rem = rng.uniform(0.0, 60.0)
        t_yellow = rng.uniform(0.0, 6.0)
        got = evaluate(
            RlvwInput(state=state, d_int=d, v_veh=v, t_rem=t_rem, t_yellow=t_yellow)
        ).warn
        if got != arrival_violates(state, t_rem, t_yellow, d, v):
            mismatches += 1
    elapsed = time.monotonic() - start
    assert mismatches == 0
    assert elapsed < 10.0, f"oracle sweep took {elapsed:.1f}s"


def test_glosa_pass_at_green_10k():
    """Every speed in an advised band reaches the bar inside the green window."""
    rng = random.Random(77)
    cfg = GlosaConfig(v_limit=60.0 / 3.6, t_yellow=3.0)
    cases = 0
    while cases < 10_000:
        t_rem = rng.uniform(0.1, 60.0)
        d = rng.uniform(0.5, 300.0)
        v = rng.uniform(0.0, 30.0)
        adv = advise(SignalState.GREEN, t_rem, d, v, cfg)
        if adv.approaching_state is not ApproachingState.SPEED_ADVISORY:
            continue
        cases += 1
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            speed_kmh = adv.v_min_kmh + frac * (adv.v_max_kmh - adv.v_min_kmh)
            arrival = d / (speed_kmh / 3.6)
            tolerance = 1e-9 if speed_kmh == adv.v_min_kmh else 1e-12
            assert arrival <= t_rem + tolerance, (t_rem, d, v, speed_kmh)


SPEC_SEQUENCES = {
    "rlvw-1": [
        {"event": "warn_on", "light": "RED"},
        {"event": "warn_off", "light": "RED"},
        {"event": "cross", "light": "GREEN", "moving": True},
    ],
    "rlvw-2": [
        {"event": "warn_on", "light": "GREEN"},
        {"event": "stop", "light": "RED"},
        {"event": "cross", "light": "GREEN", "moving": True},
    ],
    "rlvw-3": [
        {"event": "warn_on", "light": "GREEN"},
        {"event": "cross", "light": ["GREEN", "YELLOW"], "moving": True},
    ],
    "glosa-1": [
        {"event": "state", "state": 2},
        {"event": "state", "state": 1},
        {"event": "state", "state": 4},
        {"event": "cross", "light": "GREEN"},
    ],
    "glosa-2": [
        {"event": "state", "state": 3},
        {"event": "cross", "light": "GREEN"},
    ],
}


def test_scenario_event_sequences():
    """The five builtin runs match their expectation files exactly and contain
    the narrative transition lists in order."""
    start = time.monotonic()
    logs = {name: run_scenario(load_scenario(name)) for name in builtin_names()}
    elapsed = time.monotonic() - start
    for name, log in logs.items():
        events = events_to_obj(extract_events(log))
        assert events == load_expectation(name), f"{name}: {events}"
        assert contains_subsequence(events, SPEC_SEQUENCES[name]), name

    # rlvw-3: the warning produces a speed increase and the vehicle never stops.
    log = logs["rlvw-3"]
    warn_tick = next(i for i, row in enumerate(log.rows) if row.warn)
    cross_tick = next(i for i, row in enumerate(log.rows) if row.d_int == 0.0)
    assert log.rows[cross_tick].v_kmh > log.rows[warn_tick].v_kmh + 3.6
    assert all(row.v_kmh > 0.0 for row in log.rows[warn_tick:cross_tick])

    # glosa-2: the speed-advisory state carries a real minimum recommendation.
    log = logs["glosa-2"]
    advisory_rows = [row for row in log.rows if row.state == 3]
    assert advisory_rows and all(row.v_min > 0.0 for row in advisory_rows)

    assert elapsed < 5.0, f"scenario runs took {elapsed:.1f}s"


def test_codec_10k_round_trip_and_canonicality():
    rng = random.Random(31337)
    for _ in range(10_000):
        msg = random_map(rng, max_lanes=4, max_nodes=8) if rng.random() < 0.5 else random_spat(rng)
        data = encode(msg)
        again = decode(data)
        assert again == msg
        assert encode(again) == data


def test_remaining_time_wrap_grid():
    for min_end in range(0, 36000, 100):
        phase = PhaseStatus(signal_group=1, event_state=SignalState.RED, min_end_time_ds=min_end)
        for now in range(0, 36000, 100):
            value = remaining_time(phase, now)
            assert 0.0 <= value < 3600.0
            assert value == ((min_end + 36000 - now) % 36000) / 10.0
    golden = PhaseStatus(signal_group=8, event_state=SignalState.RED, min_end_time_ds=1086)
    assert remaining_time(golden, 1000) == 8.6


def test_lane_matching_equals_brute_force_1000():
    rng = random.Random(4242)
    for i in range(1000):
        map_msg = random_map(rng)
        if i % 10 == 0:
            # Force a tie: a second lane sharing an existing node, and the
            # probe sitting exactly on it.
            lane = rng.choice(map_msg.lanes)
            shared = rng.choice(lane.nodes)
            extra_id = max(l.lane_id for l in map_msg.lanes) + 1
            twin = LaneGeometry(
                lane_id=extra_id,
                signal_group=lane.signal_group,
                nodes=(shared, LocalOffset(shared.east + 600, shared.north + 600)),
            )
            map_msg = MapMessage(
                intersection_id=map_msg.intersection_id,
                reference=map_msg.reference,
                lanes=map_msg.lanes + (twin,),
            )
            pos = from_local(map_msg.reference, shared)
        else:
            pos = from_local(
                map_msg.reference,
                LocalOffset(rng.uniform(-60000, 60000), rng.uniform(-60000, 60000)),
            )
        want_d, want_lane, want_index = brute_force_match(map_msg, pos)
        result = match_lane(map_msg, pos, max_lateral=1e9)
        assert (result.lane_id, result.matched_node_index) == (want_lane, want_index)

        # Deterministic under lane permutation.
        shuffled = list(map_msg.lanes)
        rng.shuffle(shuffled)
        permuted = MapMessage(
            intersection_id=map_msg.intersection_id,
            reference=map_msg.reference,
            lanes=tuple(shuffled),
        )
        again = match_lane(permuted, pos, max_lateral=1e9)
        assert (again.lane_id, again.matched_node_index) == (want_lane, want_index)

        if want_d > 5.0:
            with pytest.raises(NoMatch):
                match_lane(map_msg, pos, max_lateral=5.0)


def test_transport_equivalence_and_loss_tolerance(tmp_path):
    cfg = load_scenario("rlvw-1")
    log_inproc = run_scenario(cfg, transport=InprocTransport())
    log_udp = run_scenario(cfg, transport=UdpTransport(port=0))
    a, b = tmp_path / "inproc.csv", tmp_path / "udp.csv"
    export_csv(log_inproc, a)
    export_csv(log_udp, b)
    assert a.read_bytes() == b.read_bytes()

    # 20% loss: wherever a fresh frame was available, outputs match the
    # lossless shadow run exactly.
    obj = scenario_to_obj(load_scenario("glosa-2"))
    obj["driver"] = {"script": "hold", "params": {}}
    obj["vehicle"]["v0_ms"] = 4.0
    hold_cfg = scenario_from_obj(obj)
    shadow = run_scenario(hold_cfg, transport=InprocTransport())
    lossy = run_scenario(
        hold_cfg, transport=LossyTransport(InprocTransport(), loss=0.2, seed=99)
    )
    stale = 0
    for row_shadow, row_lossy, fresh in zip(shadow.rows, lossy.rows, lossy.fresh):
        if fresh:
            assert row_lossy == row_shadow
        else:
            stale += 1
    assert stale > 0
