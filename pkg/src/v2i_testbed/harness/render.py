"""Terminal status blocks for the two applications.

These mirror the OBU's plain-text UI: one labeled value per line. Field
formats are part of the golden checks, so keep them stable.
"""

from __future__ import annotations

from ..glosa import Advisory
from ..messages import SignalState


def render_rlvw_status(
    lane_id: int,
    signal_group: int,
    state: SignalState,
    remaining_s: float,
    distance_m: float,
    speed_kmh: float,
    warn: bool,
) -> str:
    return "\n".join(
        [
            f"Matched Lane: {lane_id}",
            f"Phase Group Number: {signal_group}",
            f"Phase State: {state.name}",
            f"Remaining Time: {remaining_s:.1f} sec",
            f"Distance to Intersection: {distance_m:.1f} m",
            f"Vehicle Speed: {speed_kmh:.2f} km/h",
            f"Warning Status: {int(warn)}",
        ]
    )


def _speed_field(value_kmh: float) -> str:
    return "-1 km/h" if value_kmh < 0 else f"{value_kmh:.1f} km/h"


def _time_field(value_s: float) -> str:
    return "-1 sec" if value_s < 0 else f"{value_s:.1f} sec"


def render_glosa_status(distance_m: float, light: SignalState, advisory: Advisory) -> str:
    return "\n".join(
        [
            f"Distance: {distance_m:.2f} m",
            f"Approaching State: {int(advisory.approaching_state)}",
            f"Traffic Light State: {int(light)}",
            f"Min Recommended Speed: {_speed_field(advisory.v_min_kmh)}",
            f"Max Recommended Speed: {_speed_field(advisory.v_max_kmh)}",
            f"Time to Green: {_time_field(advisory.time_to_green_s)}",
        ]
    )
