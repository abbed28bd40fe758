import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

SESSION_START = time.monotonic()


def session_elapsed() -> float:
    return time.monotonic() - SESSION_START


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in getattr(report, "nodeid", ""):
                name = report.nodeid.split("::")[-1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
        terminalreporter.write_line(f"suite wall time: {session_elapsed():.1f}s")

from v2i_testbed.geo import GeoPoint, LocalOffset
from v2i_testbed.messages import (
    LaneGeometry,
    MapMessage,
    PhaseStatus,
    SignalState,
    SpatMessage,
)

REF = GeoPoint(lat=40.0, lon=-83.0)


def straight_lane(lane_id: int, signal_group: int, heading_deg: float,
                  stop_bar_cm: tuple[int, int], spacing_cm: int = 600,
                  count: int = 12) -> LaneGeometry:
    """Lane receding from the stop bar along a fixed heading."""
    ux = math.cos(math.radians(heading_deg))
    uy = math.sin(math.radians(heading_deg))
    nodes = [
        LocalOffset(
            east=round(stop_bar_cm[0] + i * spacing_cm * ux),
            north=round(stop_bar_cm[1] + i * spacing_cm * uy),
        )
        for i in range(count)
    ]
    return LaneGeometry(lane_id=lane_id, signal_group=signal_group, nodes=tuple(nodes))


@pytest.fixture
def simple_map() -> MapMessage:
    """Three lanes, two signal groups: a two-lane south approach plus a west
    approach, around a shared reference point."""
    return MapMessage(
        intersection_id=1,
        reference=REF,
        lanes=(
            straight_lane(1, 8, heading_deg=-90, stop_bar_cm=(0, -900)),
            straight_lane(2, 8, heading_deg=-90, stop_bar_cm=(350, -900)),
            straight_lane(3, 4, heading_deg=180, stop_bar_cm=(-900, 0)),
        ),
    )


def random_map(rng: random.Random, max_lanes: int = 8, max_nodes: int = 20) -> MapMessage:
    lanes = []
    n_lanes = rng.randint(1, max_lanes)
    lane_ids = rng.sample(range(1, 50), n_lanes)
    for lane_id in lane_ids:
        n_nodes = rng.randint(2, max_nodes)
        nodes = tuple(
            LocalOffset(east=rng.randint(-60000, 60000), north=rng.randint(-60000, 60000))
            for _ in range(n_nodes)
        )
        lanes.append(
            LaneGeometry(lane_id=lane_id, signal_group=rng.randint(1, 8), nodes=nodes)
        )
    return MapMessage(
        intersection_id=rng.randint(0, 10_000),
        reference=GeoPoint(
            lat=rng.uniform(-60.0, 60.0), lon=rng.uniform(-179.0, 179.0)
        ),
        lanes=tuple(lanes),
    )


def random_spat(rng: random.Random) -> SpatMessage:
    groups = rng.sample(range(1, 40), rng.randint(1, 10))
    phases = tuple(
        PhaseStatus(
            signal_group=group,
            event_state=rng.choice(list(SignalState)),
            min_end_time_ds=rng.randint(0, 35999),
        )
        for group in groups
    )
    return SpatMessage(
        intersection_id=rng.randint(0, 10_000),
        timestamp_ds=rng.randint(0, 35999),
        phases=phases,
    )
