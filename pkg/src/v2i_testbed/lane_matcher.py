"""Match a vehicle position to a map lane and measure distance to the stop bar.

Matching is nearest-node: the lane owning the globally closest node wins,
gated by a lateral threshold so an off-route vehicle is rejected instead of
matched to something far away. Ties break toward the lowest lane id, then the
lowest node index, so results are independent of lane storage order.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geo
from .errors import NoMatch, UnknownLane
from .geo import GeoPoint
from .messages import MapMessage

DEFAULT_MAX_LATERAL_M = 5.0


@dataclass(frozen=True)
class MatchResult:
    lane_id: int
    signal_group: int
    distance_to_intersection: float  # meters to the stop bar (first node)
    matched_node_index: int


def match_lane(
    map_msg: MapMessage, pos: GeoPoint, max_lateral: float = DEFAULT_MAX_LATERAL_M
) -> MatchResult:
    """Return the lane whose node polyline is nearest to ``pos``.

    Raises NoMatch when every node of every lane is farther than
    ``max_lateral`` meters (vehicle off-route or past the intersection).
    """
    if not max_lateral > 0:
        raise NoMatch(f"max_lateral must be positive, got {max_lateral}")
    off = geo.to_local(map_msg.reference, pos)
    best = None  # (distance, lane_id, node_index, lane)
    for lane in map_msg.lanes:
        for index, node in enumerate(lane.nodes):
            d = geo.planar_distance(off, node)
            key = (d, lane.lane_id, index)
            if best is None or key < best[:3]:
                best = (d, lane.lane_id, index, lane)
    distance, lane_id, node_index, lane = best
    if distance > max_lateral:
        raise NoMatch(
            f"nearest lane node is {distance:.1f} m away (gate {max_lateral:.1f} m)"
        )
    return MatchResult(
        lane_id=lane_id,
        signal_group=lane.signal_group,
        distance_to_intersection=geo.planar_distance(off, lane.nodes[0]),
        matched_node_index=node_index,
    )


def distance_to_intersection(map_msg: MapMessage, lane_id: int, pos: GeoPoint) -> float:
    """Meters between ``pos`` and the lane's stop bar (its first node)."""
    try:
        lane = map_msg.lane(lane_id)
    except KeyError:
        raise UnknownLane(f"lane {lane_id} not in MAP {map_msg.intersection_id}") from None
    off = geo.to_local(map_msg.reference, pos)
    return geo.planar_distance(off, lane.nodes[0])
