"""Declarative scenario configuration: schema, loading, and the builtin library.

A scenario file is versioned JSON bundling the intersection (MAP object in
the canonical wire schema), the signal plan, the vehicle's starting state and
driver, the application under test, and run parameters. Builtin scenarios
ship with the package together with expectation files listing the event
sequence each run must produce.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from ..controller import PhaseInterval, SignalPlan
from ..errors import ConfigError, InvariantViolation, ParseError
from ..glosa import GlosaConfig
from ..messages import MapMessage, SignalState, decode
from ..vehicle import SCRIPTS, lane_length_m

SCHEMA_VERSION = 1
HUMAN_DRIVER = "human"
APPLICATIONS = ("rlvw", "glosa")


@dataclass(frozen=True)
class VehicleSetup:
    lane_id: int
    s0: float  # m, negative approaching
    v0: float  # m/s


@dataclass
class ScenarioConfig:
    name: str
    application: str
    map_msg: MapMessage
    plan: SignalPlan
    vehicle: VehicleSetup
    driver_script: str
    duration: float
    driver_params: dict = field(default_factory=dict)
    t_yellow: float = 0.0
    v_limit_kmh: float = 60.0
    d_near: float = 10.0
    v_eps: float = 0.5
    dt: float = 0.1
    transport: str = "inproc"
    udp_port: int = 0
    reaction_latency: float = 0.5
    max_lateral: float = 5.0

    def glosa_config(self, t_yellow: Optional[float] = None) -> GlosaConfig:
        return GlosaConfig(
            v_limit=self.v_limit_kmh / 3.6,
            v_eps=self.v_eps,
            d_near=self.d_near,
            t_yellow=self.t_yellow if t_yellow is None else t_yellow,
        )

    def validate(self) -> None:
        if self.application not in APPLICATIONS:
            raise ConfigError(f"application must be one of {APPLICATIONS}")
        if self.driver_script != HUMAN_DRIVER and self.driver_script not in SCRIPTS:
            raise ConfigError(f"unknown driver script {self.driver_script!r}")
        if not 0 < self.dt <= 0.1:
            raise ConfigError(f"dt {self.dt} outside (0, 0.1]")
        if self.transport not in ("inproc", "udp"):
            raise ConfigError(f"unknown transport {self.transport!r}")
        if self.reaction_latency < 0:
            raise ConfigError("reaction_latency must be non-negative")
        try:
            lane = self.map_msg.lane(self.vehicle.lane_id)
        except KeyError:
            raise ConfigError(f"vehicle lane {self.vehicle.lane_id} not in MAP") from None
        missing = self.map_msg.signal_groups - set(self.plan.groups)
        if missing:
            raise ConfigError(f"plan lacks signal groups referenced by MAP lanes: {missing}")
        length = lane_length_m(self.map_msg, lane.lane_id)
        if not -length <= self.vehicle.s0 <= 0:
            raise ConfigError(
                f"vehicle s0 {self.vehicle.s0} outside lane extent [-{length:.1f}, 0]"
            )
        if self.vehicle.v0 < 0:
            raise ConfigError("vehicle v0 must be non-negative")
        longest_cycle = max(
            self.plan.cycle_length(g) for g in self.map_msg.signal_groups
        )
        if self.duration < longest_cycle:
            raise ConfigError(
                f"duration {self.duration} s shorter than one signal cycle ({longest_cycle} s)"
            )


def _plan_from_obj(obj: dict) -> SignalPlan:
    groups = {}
    for key, intervals in obj.get("groups", {}).items():
        cycle = []
        for entry in intervals:
            state_name, duration = entry
            cycle.append(PhaseInterval(state=SignalState[state_name], duration=float(duration)))
        groups[int(key)] = tuple(cycle)
    return SignalPlan(groups=groups, cycle_offset=float(obj.get("cycle_offset_s", 0.0)))


def _plan_to_obj(plan: SignalPlan) -> dict:
    return {
        "cycle_offset_s": plan.cycle_offset,
        "groups": {
            str(group): [[interval.state.name, interval.duration] for interval in cycle]
            for group, cycle in plan.groups.items()
        },
    }


def scenario_from_obj(obj: dict) -> ScenarioConfig:
    if not isinstance(obj, dict):
        raise ConfigError("scenario file must contain a JSON object")
    if obj.get("version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported scenario schema version {obj.get('version')!r}")
    try:
        map_msg = decode(json.dumps(obj["map"]).encode("utf-8"))
        if not isinstance(map_msg, MapMessage):
            raise ConfigError("scenario 'map' must be a MAP message object")
        vehicle_obj = obj["vehicle"]
        glosa_obj = obj.get("glosa", {})
        driver_obj = obj["driver"]
        cfg = ScenarioConfig(
            name=str(obj["name"]),
            application=str(obj["application"]),
            map_msg=map_msg,
            plan=_plan_from_obj(obj["plan"]),
            vehicle=VehicleSetup(
                lane_id=int(vehicle_obj["lane_id"]),
                s0=float(vehicle_obj["s0_m"]),
                v0=float(vehicle_obj["v0_ms"]),
            ),
            driver_script=str(driver_obj["script"]),
            driver_params=dict(driver_obj.get("params", {})),
            duration=float(obj["duration_s"]),
            t_yellow=float(obj.get("t_yellow_s", 0.0)),
            v_limit_kmh=float(glosa_obj.get("v_limit_kmh", 60.0)),
            d_near=float(glosa_obj.get("d_near_m", 10.0)),
            v_eps=float(glosa_obj.get("v_eps_ms", 0.5)),
            dt=float(obj.get("dt_s", 0.1)),
            transport=str(obj.get("transport", "inproc")),
            udp_port=int(obj.get("udp_port", 0)),
            reaction_latency=float(obj.get("reaction_latency_s", 0.5)),
            max_lateral=float(obj.get("max_lateral_m", 5.0)),
        )
    except (KeyError, TypeError, ValueError, ParseError, InvariantViolation) as exc:
        raise ConfigError(f"bad scenario file: {exc}") from exc
    cfg.validate()
    return cfg


def scenario_to_obj(cfg: ScenarioConfig) -> dict:
    from ..messages import encode  # local import to avoid cycle at module load

    return {
        "version": SCHEMA_VERSION,
        "name": cfg.name,
        "application": cfg.application,
        "duration_s": cfg.duration,
        "dt_s": cfg.dt,
        "transport": cfg.transport,
        "map": json.loads(encode(cfg.map_msg).decode("utf-8")),
        "plan": _plan_to_obj(cfg.plan),
        "vehicle": {
            "lane_id": cfg.vehicle.lane_id,
            "s0_m": cfg.vehicle.s0,
            "v0_ms": cfg.vehicle.v0,
        },
        "driver": {"script": cfg.driver_script, "params": cfg.driver_params},
        "glosa": {
            "v_limit_kmh": cfg.v_limit_kmh,
            "d_near_m": cfg.d_near,
            "v_eps_ms": cfg.v_eps,
        },
        "t_yellow_s": cfg.t_yellow,
        "reaction_latency_s": cfg.reaction_latency,
        "max_lateral_m": cfg.max_lateral,
    }


def builtin_names() -> list[str]:
    root = resources.files("v2i_testbed").joinpath("scenarios")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_scenario(name_or_path: str) -> ScenarioConfig:
    """Load a scenario by builtin name or from a JSON file path."""
    path = Path(name_or_path)
    if path.suffix == ".json" and path.exists():
        text = path.read_text(encoding="utf-8")
    else:
        ref = resources.files("v2i_testbed").joinpath("scenarios", f"{name_or_path}.json")
        if not ref.is_file():
            raise ConfigError(
                f"no scenario named {name_or_path!r} (builtins: {', '.join(builtin_names())})"
            )
        text = ref.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario is not valid JSON: {exc}") from exc
    return scenario_from_obj(obj)


def load_expectation(name: str) -> list[dict]:
    """Ordered event list a builtin scenario is expected to produce."""
    ref = resources.files("v2i_testbed").joinpath("expectations", f"{name}.json")
    if not ref.is_file():
        raise ConfigError(f"no expectation file for scenario {name!r}")
    return json.loads(ref.read_text(encoding="utf-8"))
