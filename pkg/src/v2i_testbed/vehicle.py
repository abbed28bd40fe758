"""Point-mass longitudinal vehicle on a lane approach, plus scripted drivers.

The vehicle lives on a lane polyline: arc position ``s`` is 0 at the stop bar
and negative while approaching. Integration is semi-implicit Euler at a fixed
tick, which reproduces constant-acceleration motion exactly and keeps runs
bit-reproducible.

Driver scripts replace the human driver of interactive runs with
deterministic reactions to the warning/advisory feedback, so scenario logs
are repeatable. Commands are accelerations in m/s^2, negative to brake.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from . import geo
from .errors import InvalidInput, OutOfExtent
from .glosa import Advisory, ApproachingState
from .messages import MapMessage, SignalState

A_MAX = 3.0  # m/s^2, maximum commanded acceleration
B_MAX = 5.0  # m/s^2, maximum commanded braking


@dataclass(frozen=True)
class VehicleState:
    """Arc position (m, 0 at stop bar, negative approaching), speed (m/s),
    last commanded acceleration (m/s^2), and time (s)."""

    s: float
    v: float
    a: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if self.v < 0:
            raise InvalidInput(f"speed must be non-negative, got {self.v!r}")


def step(state: VehicleState, command: float, dt: float) -> VehicleState:
    """Advance one tick under ``command`` acceleration (semi-implicit Euler)."""
    if not (math.isfinite(dt) and 0 < dt <= 0.1):
        raise InvalidInput(f"dt must be in (0, 0.1], got {dt!r}")
    if not math.isfinite(command) or not -B_MAX <= command <= A_MAX:
        raise InvalidInput(f"command {command!r} outside [-{B_MAX}, {A_MAX}]")
    v_next = max(0.0, state.v + command * dt)
    return VehicleState(s=state.s + v_next * dt, v=v_next, a=command, t=state.t + dt)


def lane_length_m(map_msg: MapMessage, lane_id: int) -> float:
    """Total polyline length of a lane, in meters."""
    nodes = map_msg.lane(lane_id).nodes
    return sum(geo.planar_distance(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1))


def position_to_geo(map_msg: MapMessage, lane_id: int, s: float) -> geo.GeoPoint:
    """Geodetic position at arc distance |s| from the stop bar along the lane.

    Lets the simulated vehicle feed the same GPS-based pipeline a road test
    would. ``s`` must lie within the polyline (s in [-length, 0]).
    """
    nodes = map_msg.lane(lane_id).nodes
    target = -s
    if target < 0 or not math.isfinite(target):
        raise OutOfExtent(f"arc position {s} is past the stop bar")
    walked = 0.0
    for i in range(len(nodes) - 1):
        seg = geo.planar_distance(nodes[i], nodes[i + 1])
        if target <= walked + seg:
            frac = 0.0 if seg == 0 else (target - walked) / seg
            east = nodes[i].east + frac * (nodes[i + 1].east - nodes[i].east)
            north = nodes[i].north + frac * (nodes[i + 1].north - nodes[i].north)
            return geo.from_local(map_msg.reference, geo.LocalOffset(east=east, north=north))
        walked += seg
    raise OutOfExtent(f"arc position {s} beyond lane {lane_id} extent ({walked:.1f} m)")


@dataclass(frozen=True)
class DriverObservation:
    """What the driver can see on one tick.

    ``warn``, ``advisory`` and ``light`` are the feedback channels (warning
    display and the physical light); the harness delays them by the driver
    reaction latency. ``v`` and ``d_int`` are the vehicle's own kinematics,
    available immediately. ``light``/``advisory`` are None before any
    feedback has reached the driver.
    """

    t: float
    v: float
    d_int: float
    crossed: bool
    warn: bool = False
    light: Optional[SignalState] = None
    advisory: Optional[Advisory] = None


class DriverScript:
    """Base for deterministic driver behaviors. Subclasses implement
    :meth:`command`; rules must produce a command for every observation."""

    name = "base"

    def command(self, obs: DriverObservation) -> float:
        raise NotImplementedError

    def reset(self) -> None:
        """Clear per-run state so a script instance can be reused."""


def run_driver(script: DriverScript, feedback: Iterable[DriverObservation]) -> Iterator[float]:
    """Map an observation stream to the script's acceleration commands."""
    script.reset()
    for obs in feedback:
        yield script.command(obs)


def _stopping_gap(v: float, brake: float, margin: float) -> float:
    """Distance at which braking at ``brake`` stops ``margin`` short of the bar."""
    return v * v / (2.0 * brake) + margin


class HoldSpeedDriver(DriverScript):
    """Coast at the initial speed, ignoring all feedback."""

    name = "hold"

    def command(self, obs: DriverObservation) -> float:
        return 0.0


class AccelerateBrakeOnWarnDriver(DriverScript):
    """Speed up from standstill until warned, brake until the warning clears,
    then hold the reduced speed."""

    name = "accel-brake-on-warn"

    def __init__(self, accel: float = 1.5, brake: float = 1.25):
        self.accel = accel
        self.brake = brake
        self._warned = False

    def reset(self) -> None:
        self._warned = False

    def command(self, obs: DriverObservation) -> float:
        if obs.crossed:
            return 0.0
        if obs.warn:
            self._warned = True
            return -self.brake
        if self._warned:
            return 0.0
        return self.accel


class StopOnWarnDriver(DriverScript):
    """Approach at speed; once warned, brake to a stop short of the bar; pull
    away again when the light shows green."""

    name = "stop-on-warn"

    def __init__(
        self,
        brake: float = 2.5,
        stop_margin: float = 3.0,
        launch_accel: float = 1.5,
        launch_target: float = 8.0,
    ):
        self.brake = brake
        self.stop_margin = stop_margin
        self.launch_accel = launch_accel
        self.launch_target = launch_target
        self._warned = False
        self._stopped = False

    def reset(self) -> None:
        self._warned = False
        self._stopped = False

    def command(self, obs: DriverObservation) -> float:
        if obs.crossed:
            return 0.0
        if obs.v <= 0.0:
            self._stopped = True
        if self._stopped:
            if obs.light is SignalState.GREEN:
                return self.launch_accel if obs.v < self.launch_target else 0.0
            return 0.0
        if obs.warn:
            self._warned = True
        if self._warned and obs.d_int <= _stopping_gap(obs.v, self.brake, self.stop_margin):
            return -self.brake
        return 0.0


class SpeedUpOnWarnDriver(DriverScript):
    """Creep toward the intersection; when warned that the light will not be
    made, accelerate to a faster cruise and keep it."""

    name = "speed-up-on-warn"

    def __init__(self, gentle_accel: float = 0.75, v_slow: float = 3.0,
                 strong_accel: float = 1.5, v_fast: float = 6.5):
        self.gentle_accel = gentle_accel
        self.v_slow = v_slow
        self.strong_accel = strong_accel
        self.v_fast = v_fast
        self._warned = False

    def reset(self) -> None:
        self._warned = False

    def command(self, obs: DriverObservation) -> float:
        if obs.crossed:
            return 0.0
        if obs.warn:
            self._warned = True
        if self._warned:
            return self.strong_accel if obs.v < self.v_fast else 0.0
        return self.gentle_accel if obs.v < self.v_slow else 0.0


class StopAndGoDriver(DriverScript):
    """Hold approach speed; once the advisory warns, brake to a stop just
    short of the bar and wait out the red; launch on green."""

    name = "stop-and-go"

    def __init__(
        self,
        brake: float = 2.5,
        stop_margin: float = 6.0,
        launch_accel: float = 1.5,
        launch_target: float = 8.0,
    ):
        self.brake = brake
        self.stop_margin = stop_margin
        self.launch_accel = launch_accel
        self.launch_target = launch_target
        self._braking = False
        self._stopped = False

    def reset(self) -> None:
        self._braking = False
        self._stopped = False

    def command(self, obs: DriverObservation) -> float:
        if obs.crossed:
            return 0.0
        if obs.v <= 0.0:
            self._stopped = True
        if self._stopped:
            if obs.light is SignalState.GREEN:
                return self.launch_accel if obs.v < self.launch_target else 0.0
            return 0.0
        if obs.warn and obs.d_int <= _stopping_gap(obs.v, self.brake, self.stop_margin):
            self._braking = True
        if self._braking:
            return -self.brake
        return 0.0


class TrackAdvisoryDriver(DriverScript):
    """Follow the advisory's minimum recommended speed with a small margin."""

    name = "track-advisory"

    def __init__(self, accel: float = 1.5, margin: float = 0.25):
        self.accel = accel
        self.margin = margin  # m/s above the advised minimum
        self._target = 0.0

    def reset(self) -> None:
        self._target = 0.0

    def command(self, obs: DriverObservation) -> float:
        if obs.crossed:
            return 0.0
        adv = obs.advisory
        if adv is not None and adv.approaching_state is ApproachingState.SPEED_ADVISORY:
            if adv.v_min_kmh >= 0:
                self._target = adv.v_min_kmh / 3.6 + self.margin
        return self.accel if obs.v < self._target else 0.0


SCRIPTS = {
    cls.name: cls
    for cls in (
        HoldSpeedDriver,
        AccelerateBrakeOnWarnDriver,
        StopOnWarnDriver,
        SpeedUpOnWarnDriver,
        StopAndGoDriver,
        TrackAdvisoryDriver,
    )
}


def make_script(name: str, params: Optional[dict] = None) -> DriverScript:
    """Instantiate a registered driver script by name."""
    try:
        cls = SCRIPTS[name]
    except KeyError:
        raise InvalidInput(f"unknown driver script {name!r} (have {sorted(SCRIPTS)})") from None
    return cls(**(params or {}))
