"""Software-in-the-loop connected-intersection testbed.

Simulates the full V2I loop of a signalized intersection: a fixed-time
controller broadcasting SPaT/MAP, a point-mass vehicle matched to a lane,
and the two on-board applications — red-light-violation warning and
green-light speed advisory — plus a scenario harness and driving console
endpoint.
"""

from .controller import PhaseInterval, SignalPlan, spat_snapshot, state_at
from .geo import GeoPoint, LocalOffset, from_local, planar_distance, to_local
from .glosa import Advisory, ApproachingState, GlosaConfig, advise
from .lane_matcher import MatchResult, distance_to_intersection, match_lane
from .messages import (
    LaneGeometry,
    MapMessage,
    PhaseStatus,
    SignalState,
    SpatMessage,
    decode,
    encode,
    remaining_time,
)
from .rlvw import RlvwInput, WarningStatus, evaluate
from .vehicle import DriverObservation, DriverScript, VehicleState, position_to_geo, step

__all__ = [
    "Advisory",
    "ApproachingState",
    "DriverObservation",
    "DriverScript",
    "GeoPoint",
    "GlosaConfig",
    "LaneGeometry",
    "LocalOffset",
    "MapMessage",
    "MatchResult",
    "PhaseInterval",
    "PhaseStatus",
    "RlvwInput",
    "SignalPlan",
    "SignalState",
    "SpatMessage",
    "VehicleState",
    "WarningStatus",
    "advise",
    "decode",
    "distance_to_intersection",
    "encode",
    "evaluate",
    "from_local",
    "match_lane",
    "planar_distance",
    "position_to_geo",
    "remaining_time",
    "spat_snapshot",
    "state_at",
    "step",
    "to_local",
]

__version__ = "0.1.0"
