"""Geodetic coordinates and local planar offsets around an intersection reference point.

The local frame is an equirectangular projection centered on the reference
point. Approach distances at an intersection stay well under a kilometer,
where the projection error is below a decimeter, so no geodesic machinery is
needed. Offsets are carried in centimeters to mirror map node-offset units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfRange

EARTH_RADIUS_M = 6_371_000.0  # mean radius, fixed so results are bit-stable
MAX_PROJECTION_RANGE_M = 5_000.0

_M_PER_DEG = EARTH_RADIUS_M * math.pi / 180.0


@dataclass(frozen=True)
class GeoPoint:
    """WGS-84 position in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise OutOfRange(f"non-finite coordinates ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise OutOfRange(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise OutOfRange(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class LocalOffset:
    """Planar offset east/north of the reference point, in centimeters."""

    east: float
    north: float

    def __post_init__(self):
        if not (math.isfinite(self.east) and math.isfinite(self.north)):
            raise OutOfRange(f"non-finite offset ({self.east}, {self.north})")


def _great_circle_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle separation used to guard the projection's valid range."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlmb = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def to_local(ref: GeoPoint, p: GeoPoint) -> LocalOffset:
    """Project ``p`` into the planar frame centered on ``ref``.

    Raises OutOfRange when the points are 5 km or more apart; beyond that the
    flat-earth approximation is no longer trustworthy.
    """
    if _great_circle_m(ref, p) >= MAX_PROJECTION_RANGE_M:
        raise OutOfRange("points separated by 5 km or more")
    east_m = (p.lon - ref.lon) * math.cos(math.radians(ref.lat)) * _M_PER_DEG
    north_m = (p.lat - ref.lat) * _M_PER_DEG
    return LocalOffset(east=east_m * 100.0, north=north_m * 100.0)


def from_local(ref: GeoPoint, off: LocalOffset) -> GeoPoint:
    """Exact inverse of :func:`to_local` about the same reference point."""
    if math.hypot(off.east, off.north) / 100.0 >= MAX_PROJECTION_RANGE_M:
        raise OutOfRange("offset magnitude is 5 km or more")
    lat = ref.lat + (off.north / 100.0) / _M_PER_DEG
    lon = ref.lon + (off.east / 100.0) / (_M_PER_DEG * math.cos(math.radians(ref.lat)))
    return GeoPoint(lat=lat, lon=lon)


def planar_distance(a: LocalOffset, b: LocalOffset) -> float:
    """Euclidean distance between two offsets, in meters."""
    return math.hypot(a.east - b.east, a.north - b.north) / 100.0
