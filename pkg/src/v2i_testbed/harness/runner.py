"""Scenario runner: ticks the controller, transport, algorithms, driver, and
vehicle on one shared clock and records the per-tick time series.

Tick order is fixed: controller ground truth, SPaT/MAP publication, OBU-side
algorithms, driver command, vehicle step. SPaT is published every tick
(10 Hz at the default 0.1 s tick) and MAP once per second. The OBU consumes
only what arrived over the transport, keeps the freshest SPaT by timestamp,
and suppresses algorithm output when its newest frame is older than the
staleness window or already points at an ended phase.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .. import glosa, lane_matcher, rlvw, vehicle
from ..controller import spat_snapshot, state_at
from ..errors import ConfigError, NoMatch
from ..messages import (
    DS_PER_HOUR,
    MapMessage,
    SignalState,
    SpatMessage,
    decode,
    encode,
    remaining_time,
    spat_covers_map,
)
from .scenario import HUMAN_DRIVER, ScenarioConfig
from .transport import make_transport

SPAT_FRESH_DS = 3  # staleness window: 3 missed frames at 10 Hz
# A held frame whose min end time has passed wraps to a huge "remaining";
# anything above this is an expired phase, not a real countdown.
EXPIRED_REMAINING_S = 3599.5
MAP_PERIOD_S = 1.0  # MAP rebroadcast cadence; SPaT goes out every tick

NO_STATE = -1
NOT_APPLICABLE = -1.0


@dataclass(frozen=True)
class TimeSeriesRow:
    """One tick of the run, in the column order of the exported CSV."""

    t: float
    d_int: float
    v_kmh: float
    light: SignalState
    state: int
    warn: bool
    v_min: float
    v_max: float
    time_to_green: float


@dataclass
class TimeSeriesLog:
    scenario: str
    dt: float
    rows: list[TimeSeriesRow] = field(default_factory=list)
    # Per tick: OBU had a MAP and a fresh, unexpired SPaT frame.
    fresh: list[bool] = field(default_factory=list)
    # Acceleration command applied after each row (one less than rows).
    commands: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class TelemetryFrame:
    """A time-series row plus run identity, as pushed to the driving console."""

    scenario: str
    tick: int
    row: TimeSeriesRow


class ObuReceiver:
    """Vehicle-side message store: latest MAP, freshest SPaT."""

    def __init__(self):
        self.map_msg: Optional[MapMessage] = None
        self.spat: Optional[SpatMessage] = None

    def ingest(self, payloads: list[bytes]) -> None:
        for payload in payloads:
            msg = decode(payload)
            if isinstance(msg, MapMessage):
                self.map_msg = msg
            elif self._is_fresher(msg):
                self.spat = msg

    def _is_fresher(self, incoming: SpatMessage) -> bool:
        if self.spat is None:
            return True
        # Forward half-window comparison so the hour wrap sorts correctly;
        # a duplicate (equal timestamp) replaces the identical frame, which
        # leaves the state unchanged.
        return (incoming.timestamp_ds - self.spat.timestamp_ds) % DS_PER_HOUR < DS_PER_HOUR // 2

    def spat_age_ds(self, now_ds: int) -> Optional[int]:
        if self.spat is None:
            return None
        return (now_ds - self.spat.timestamp_ds) % DS_PER_HOUR


class YellowTracker:
    """Learns yellow durations from observed SPaT transitions.

    When a group's event state first turns YELLOW, the frame's remaining time
    is that yellow interval's length. Until a group has been observed, the
    configured fallback applies.
    """

    def __init__(self, fallback: float):
        self.fallback = fallback
        self._last_state: dict[int, SignalState] = {}
        self._observed: dict[int, float] = {}

    def observe(self, spat: SpatMessage, now_ds: int) -> None:
        for phase in spat.phases:
            previous = self._last_state.get(phase.signal_group)
            if phase.event_state is SignalState.YELLOW and previous not in (
                None,
                SignalState.YELLOW,
            ):
                self._observed[phase.signal_group] = remaining_time(phase, now_ds)
            self._last_state[phase.signal_group] = phase.event_state

    def yellow_for(self, group: int) -> float:
        return self._observed.get(group, self.fallback)


def _suppressed_row(t: float, d_int: float, v_kmh: float, light: SignalState) -> TimeSeriesRow:
    return TimeSeriesRow(
        t=t,
        d_int=d_int,
        v_kmh=v_kmh,
        light=light,
        state=NO_STATE,
        warn=False,
        v_min=NOT_APPLICABLE,
        v_max=NOT_APPLICABLE,
        time_to_green=NOT_APPLICABLE,
    )


class ScriptedCommander:
    """Wraps a driver script with the reaction latency: feedback reaches the
    script only after ``latency`` seconds, kinematics immediately."""

    def __init__(self, script: vehicle.DriverScript, latency: float, dt: float):
        self.script = script
        self.delay_ticks = int(round(latency / dt))
        self._feedback: deque = deque()
        script.reset()

    def command(
        self,
        t: float,
        veh: vehicle.VehicleState,
        d_true: float,
        crossed: bool,
        warn: bool,
        light: Optional[SignalState],
        advisory: Optional[glosa.Advisory],
    ) -> float:
        self._feedback.append((warn, light, advisory))
        if len(self._feedback) > self.delay_ticks + 1:
            self._feedback.popleft()
        if len(self._feedback) > self.delay_ticks:
            seen_warn, seen_light, seen_advisory = self._feedback[0]
        else:
            seen_warn, seen_light, seen_advisory = False, None, None
        obs = vehicle.DriverObservation(
            t=t,
            v=veh.v,
            d_int=d_true,
            crossed=crossed,
            warn=seen_warn,
            light=seen_light,
            advisory=seen_advisory,
        )
        return self.script.command(obs)


class Simulation:
    """One scenario run. ``tick()`` produces rows; the caller supplies the
    acceleration command between rows (scripted or human)."""

    def __init__(self, cfg: ScenarioConfig, transport=None, fallback_yellow: Optional[float] = None):
        cfg.validate()
        self.cfg = cfg
        self.transport = transport if transport is not None else make_transport(
            cfg.transport, cfg.udp_port
        )
        self.receiver = ObuReceiver()
        self.yellow = YellowTracker(cfg.t_yellow if fallback_yellow is None else fallback_yellow)
        self.veh = vehicle.VehicleState(s=cfg.vehicle.s0, v=cfg.vehicle.v0)
        self.vehicle_group = cfg.map_msg.lane(cfg.vehicle.lane_id).signal_group
        self.tick_index = 0
        self.total_ticks = int(round(cfg.duration / cfg.dt))
        self.map_period_ticks = max(1, int(round(MAP_PERIOD_S / cfg.dt)))
        self.log = TimeSeriesLog(scenario=cfg.name, dt=cfg.dt)
        self._last_advisory: Optional[glosa.Advisory] = None
        self._last_warn = False

    # -- one tick ------------------------------------------------------------

    def tick(self) -> TimeSeriesRow:
        cfg = self.cfg
        t = round(self.tick_index * cfg.dt, 6)
        wall_ds = int(math.floor(t * 10.0 + 0.5)) % DS_PER_HOUR
        light_truth, _ = state_at(cfg.plan, self.vehicle_group, t)

        self._publish(t, wall_ds)

        crossed = self.veh.s >= 0.0
        row, fresh, warn, advisory = self._compute_outputs(t, wall_ds, light_truth, crossed)
        self._last_warn = warn
        self._last_advisory = advisory
        self.log.rows.append(row)
        self.log.fresh.append(fresh)
        return row

    def apply_command(self, command: float) -> None:
        self.veh = vehicle.step(self.veh, command, self.cfg.dt)
        self.log.commands.append(command)
        self.tick_index += 1

    @property
    def crossed(self) -> bool:
        return self.veh.s >= 0.0

    @property
    def d_true(self) -> float:
        return max(0.0, -self.veh.s)

    @property
    def last_feedback(self):
        return self._last_warn, self._last_advisory

    def _publish(self, t: float, wall_ds: int) -> None:
        spat = spat_snapshot(self.cfg.plan, t, wall_ds, self.cfg.map_msg.intersection_id)
        if not spat_covers_map(spat, self.cfg.map_msg):
            raise ConfigError("signal plan does not cover the MAP's signal groups")
        dispatched = self.transport.send(encode(spat))
        if self.tick_index % self.map_period_ticks == 0:
            dispatched += self.transport.send(encode(self.cfg.map_msg))
        self.receiver.ingest(self.transport.receive(dispatched))

    def _compute_outputs(
        self, t: float, wall_ds: int, light_truth: SignalState, crossed: bool
    ) -> tuple[TimeSeriesRow, bool, bool, Optional[glosa.Advisory]]:
        cfg = self.cfg
        v_kmh = self.veh.v * glosa.MS_TO_KMH

        if crossed:
            return _suppressed_row(t, 0.0, v_kmh, light_truth), False, False, None
        if self.receiver.map_msg is None:
            return _suppressed_row(t, NOT_APPLICABLE, v_kmh, light_truth), False, False, None

        pos = vehicle.position_to_geo(cfg.map_msg, cfg.vehicle.lane_id, self.veh.s)
        try:
            match = lane_matcher.match_lane(self.receiver.map_msg, pos, cfg.max_lateral)
        except NoMatch:
            return _suppressed_row(t, NOT_APPLICABLE, v_kmh, light_truth), False, False, None

        age = self.receiver.spat_age_ds(wall_ds)
        if age is None or age > SPAT_FRESH_DS:
            return _suppressed_row(t, match.distance_to_intersection, v_kmh, light_truth), False, False, None

        self.yellow.observe(self.receiver.spat, wall_ds)
        try:
            phase = self.receiver.spat.phase(match.signal_group)
        except KeyError:
            return _suppressed_row(t, match.distance_to_intersection, v_kmh, light_truth), False, False, None
        t_rem = remaining_time(phase, wall_ds)
        if t_rem > EXPIRED_REMAINING_S or t_rem <= 0.0:
            # Zero remaining means the frame's phase ends at this very instant
            # and a huge remaining means its end already wrapped past: either
            # way the held frame describes an ended phase, so treat it as
            # stale rather than feeding the algorithms a dead countdown.
            return _suppressed_row(t, match.distance_to_intersection, v_kmh, light_truth), False, False, None

        t_yellow = self.yellow.yellow_for(match.signal_group)
        d_int = match.distance_to_intersection

        if cfg.application == "rlvw":
            status = rlvw.evaluate(
                rlvw.RlvwInput(
                    state=phase.event_state,
                    d_int=d_int,
                    v_veh=self.veh.v,
                    t_rem=t_rem,
                    t_yellow=t_yellow,
                ),
                v_eps=cfg.v_eps,
            )
            row = TimeSeriesRow(
                t=t,
                d_int=d_int,
                v_kmh=v_kmh,
                light=light_truth,
                state=NO_STATE,
                warn=status.warn,
                v_min=NOT_APPLICABLE,
                v_max=NOT_APPLICABLE,
                time_to_green=NOT_APPLICABLE,
            )
            return row, True, status.warn, None

        advisory = glosa.advise(
            phase.event_state, t_rem, d_int, self.veh.v, cfg.glosa_config(t_yellow=t_yellow)
        )
        row = TimeSeriesRow(
            t=t,
            d_int=d_int,
            v_kmh=v_kmh,
            light=light_truth,
            state=int(advisory.approaching_state),
            warn=advisory.warn,
            v_min=_round_interface(advisory.v_min_kmh),
            v_max=_round_interface(advisory.v_max_kmh),
            time_to_green=_round_interface(advisory.time_to_green_s),
        )
        return row, True, advisory.warn, advisory


def _round_interface(value: float) -> float:
    """Interface fields carry 0.1 precision; the -1 sentinel passes through."""
    return round(value, 1)


def run_scenario(
    cfg: ScenarioConfig,
    transport=None,
    on_frame: Optional[Callable[[TelemetryFrame], None]] = None,
) -> TimeSeriesLog:
    """Run a scripted scenario to completion and return its log."""
    if cfg.driver_script == HUMAN_DRIVER:
        raise ConfigError("human-driven scenarios run through serve(), not run_scenario()")
    sim = Simulation(cfg, transport=transport)
    commander = ScriptedCommander(
        vehicle.make_script(cfg.driver_script, cfg.driver_params),
        cfg.reaction_latency,
        cfg.dt,
    )
    try:
        for k in range(sim.total_ticks + 1):
            row = sim.tick()
            if on_frame is not None:
                on_frame(TelemetryFrame(scenario=cfg.name, tick=k, row=row))
            if k == sim.total_ticks:
                break
            warn, advisory = sim.last_feedback
            command = commander.command(
                t=row.t,
                veh=sim.veh,
                d_true=sim.d_true,
                crossed=sim.crossed,
                warn=warn,
                light=row.light,
                advisory=advisory,
            )
            sim.apply_command(command)
    finally:
        sim.transport.close()
    return sim.log
