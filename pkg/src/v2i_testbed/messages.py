"""Data model and canonical wire codec for simplified SPaT and MAP messages.

The wire format is canonical JSON: keys sorted, no insignificant whitespace,
UTF-8. Structurally equal messages therefore always encode to identical
bytes, which keeps golden files diff-able and lets transports deduplicate by
content. Field semantics follow the SPaT/MAP conventions used by roadside
units (per-hour deci-second timing, stop-bar-first lane node lists), without
the ASN.1 layer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Union

from .errors import InvariantViolation, OutOfRange, ParseError
from .geo import GeoPoint, LocalOffset

DS_PER_HOUR = 36000  # deci-seconds in one hour; SPaT times live in [0, 36000)

# Largest node offset component we accept: intersection-scale geometry only.
MAX_NODE_OFFSET_CM = 100_000.0


class SignalState(IntEnum):
    """Traffic light state of one signal group.

    The integer values are the numeric encoding used on telemetry
    interfaces; the wire codec uses the names.
    """

    GREEN = 1
    YELLOW = 2
    RED = 3


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class LaneGeometry:
    """One lane's node polyline. The first node is the stop bar; nodes proceed
    away from the intersection."""

    lane_id: int
    signal_group: int
    nodes: tuple[LocalOffset, ...]

    def __post_init__(self):
        if not _is_int(self.lane_id) or self.lane_id < 1:
            raise InvariantViolation(f"lane_id must be a positive integer, got {self.lane_id!r}")
        if not _is_int(self.signal_group) or self.signal_group < 1:
            raise InvariantViolation(
                f"signal_group must be a positive integer, got {self.signal_group!r}"
            )
        if len(self.nodes) < 2:
            raise InvariantViolation(f"lane {self.lane_id} needs at least 2 nodes")
        for node in self.nodes:
            if math.hypot(node.east, node.north) >= MAX_NODE_OFFSET_CM:
                raise InvariantViolation(
                    f"lane {self.lane_id} node {node} farther than 1 km from the reference"
                )
            if not (float(node.east).is_integer() and float(node.north).is_integer()):
                raise InvariantViolation(
                    f"lane {self.lane_id} node {node} must be whole centimeters"
                )


@dataclass(frozen=True)
class MapMessage:
    """Intersection geometry: reference point plus lane polylines and their
    signal group connections."""

    intersection_id: int
    reference: GeoPoint
    lanes: tuple[LaneGeometry, ...]

    def __post_init__(self):
        if not _is_int(self.intersection_id):
            raise InvariantViolation("intersection_id must be an integer")
        if len(self.lanes) < 1:
            raise InvariantViolation("a MAP message needs at least one lane")
        ids = [lane.lane_id for lane in self.lanes]
        if len(set(ids)) != len(ids):
            raise InvariantViolation(f"duplicate lane ids in MAP: {ids}")

    def lane(self, lane_id: int) -> LaneGeometry:
        for ln in self.lanes:
            if ln.lane_id == lane_id:
                return ln
        raise KeyError(lane_id)

    @property
    def signal_groups(self) -> set[int]:
        return {lane.signal_group for lane in self.lanes}


@dataclass(frozen=True)
class PhaseStatus:
    """Current state and minimum end time of one signal group."""

    signal_group: int
    event_state: SignalState
    min_end_time_ds: int

    def __post_init__(self):
        if not _is_int(self.signal_group) or self.signal_group < 1:
            raise InvariantViolation(
                f"signal_group must be a positive integer, got {self.signal_group!r}"
            )
        if not isinstance(self.event_state, SignalState):
            raise InvariantViolation(f"event_state must be a SignalState, got {self.event_state!r}")
        if not _is_int(self.min_end_time_ds) or not 0 <= self.min_end_time_ds < DS_PER_HOUR:
            raise InvariantViolation(
                f"min_end_time_ds {self.min_end_time_ds!r} outside [0, {DS_PER_HOUR})"
            )


@dataclass(frozen=True)
class SpatMessage:
    """Signal phase and timing snapshot for one intersection."""

    intersection_id: int
    timestamp_ds: int
    phases: tuple[PhaseStatus, ...]

    def __post_init__(self):
        if not _is_int(self.intersection_id):
            raise InvariantViolation("intersection_id must be an integer")
        if not _is_int(self.timestamp_ds) or not 0 <= self.timestamp_ds < DS_PER_HOUR:
            raise InvariantViolation(f"timestamp_ds {self.timestamp_ds!r} outside [0, {DS_PER_HOUR})")
        groups = [p.signal_group for p in self.phases]
        if len(set(groups)) != len(groups):
            raise InvariantViolation(f"duplicate signal groups in SPaT: {groups}")

    def phase(self, signal_group: int) -> PhaseStatus:
        for p in self.phases:
            if p.signal_group == signal_group:
                return p
        raise KeyError(signal_group)


Message = Union[MapMessage, SpatMessage]


def spat_covers_map(spat: SpatMessage, map_msg: MapMessage) -> bool:
    """True when the SPaT carries a phase for every signal group the MAP's
    lanes reference (same intersection only)."""
    if spat.intersection_id != map_msg.intersection_id:
        return False
    return map_msg.signal_groups <= {p.signal_group for p in spat.phases}


def remaining_time(phase: PhaseStatus, now_ds: int) -> float:
    """Seconds until the phase's minimum end time, from ``now_ds``.

    Both times are deci-seconds within the current hour; the subtraction
    wraps into the next hour, so the result is always in [0, 3600).
    """
    if not _is_int(now_ds) or not 0 <= now_ds < DS_PER_HOUR:
        raise OutOfRange(f"now_ds {now_ds!r} outside [0, {DS_PER_HOUR})")
    if not isinstance(phase, PhaseStatus):
        raise OutOfRange(f"expected PhaseStatus, got {type(phase).__name__}")
    return ((phase.min_end_time_ds - now_ds + DS_PER_HOUR) % DS_PER_HOUR) / 10.0


# --- wire codec -------------------------------------------------------------


def _map_to_obj(msg: MapMessage) -> dict:
    return {
        "type": "MAP",
        "intersection_id": msg.intersection_id,
        "reference": {"lat": msg.reference.lat, "lon": msg.reference.lon},
        "lanes": [
            {
                "lane_id": lane.lane_id,
                "signal_group": lane.signal_group,
                "nodes": [{"east_cm": int(n.east), "north_cm": int(n.north)} for n in lane.nodes],
            }
            for lane in msg.lanes
        ],
    }


def _spat_to_obj(msg: SpatMessage) -> dict:
    return {
        "type": "SPAT",
        "intersection_id": msg.intersection_id,
        "timestamp_ds": msg.timestamp_ds,
        "phases": [
            {
                "signal_group": p.signal_group,
                "event_state": p.event_state.name,
                "min_end_time_ds": p.min_end_time_ds,
            }
            for p in msg.phases
        ],
    }


def encode(msg: Message) -> bytes:
    """Serialize a message to its canonical byte form."""
    if isinstance(msg, MapMessage):
        obj = _map_to_obj(msg)
    elif isinstance(msg, SpatMessage):
        obj = _spat_to_obj(msg)
    else:
        raise InvariantViolation(f"cannot encode {type(msg).__name__}")
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


class _Fields:
    """Typed field extraction; any structural problem is a ParseError."""

    def __init__(self, obj, context: str):
        if not isinstance(obj, dict):
            raise ParseError(f"{context}: expected an object")
        self.obj = obj
        self.context = context

    def get(self, key: str):
        if key not in self.obj:
            raise ParseError(f"{self.context}: missing field {key!r}")
        return self.obj[key]

    def get_int(self, key: str) -> int:
        value = self.get(key)
        if not _is_int(value):
            raise ParseError(f"{self.context}: field {key!r} must be an integer")
        return value

    def get_number(self, key: str) -> float:
        value = self.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{self.context}: field {key!r} must be a number")
        return float(value)

    def get_list(self, key: str) -> list:
        value = self.get(key)
        if not isinstance(value, list):
            raise ParseError(f"{self.context}: field {key!r} must be a list")
        return value

    def get_str(self, key: str) -> str:
        value = self.get(key)
        if not isinstance(value, str):
            raise ParseError(f"{self.context}: field {key!r} must be a string")
        return value


def _geo_from_obj(obj, context: str) -> GeoPoint:
    f = _Fields(obj, context)
    lat, lon = f.get_number("lat"), f.get_number("lon")
    try:
        return GeoPoint(lat=lat, lon=lon)
    except OutOfRange as exc:
        raise InvariantViolation(str(exc)) from exc


def _map_from_obj(obj) -> MapMessage:
    f = _Fields(obj, "MAP")
    lanes = []
    for i, lane_obj in enumerate(f.get_list("lanes")):
        lf = _Fields(lane_obj, f"MAP lane[{i}]")
        nodes = []
        for j, node_obj in enumerate(lf.get_list("nodes")):
            nf = _Fields(node_obj, f"MAP lane[{i}] node[{j}]")
            nodes.append(LocalOffset(east=nf.get_int("east_cm"), north=nf.get_int("north_cm")))
        lanes.append(
            LaneGeometry(
                lane_id=lf.get_int("lane_id"),
                signal_group=lf.get_int("signal_group"),
                nodes=tuple(nodes),
            )
        )
    return MapMessage(
        intersection_id=f.get_int("intersection_id"),
        reference=_geo_from_obj(f.get("reference"), "MAP reference"),
        lanes=tuple(lanes),
    )


def _spat_from_obj(obj) -> SpatMessage:
    f = _Fields(obj, "SPAT")
    phases = []
    for i, phase_obj in enumerate(f.get_list("phases")):
        pf = _Fields(phase_obj, f"SPAT phase[{i}]")
        state_name = pf.get_str("event_state")
        if state_name not in SignalState.__members__:
            raise InvariantViolation(f"SPAT phase[{i}]: unknown event_state {state_name!r}")
        phases.append(
            PhaseStatus(
                signal_group=pf.get_int("signal_group"),
                event_state=SignalState[state_name],
                min_end_time_ds=pf.get_int("min_end_time_ds"),
            )
        )
    return SpatMessage(
        intersection_id=f.get_int("intersection_id"),
        timestamp_ds=f.get_int("timestamp_ds"),
        phases=tuple(phases),
    )


def decode(data: bytes) -> Message:
    """Parse canonical bytes back into a message.

    Raises ParseError for malformed bytes or structure, InvariantViolation
    for well-formed content that breaks a domain invariant.
    """
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    f = _Fields(obj, "message")
    mtype = f.get_str("type")
    if mtype == "MAP":
        return _map_from_obj(obj)
    if mtype == "SPAT":
        return _spat_from_obj(obj)
    raise ParseError(f"unknown message type {mtype!r}")
