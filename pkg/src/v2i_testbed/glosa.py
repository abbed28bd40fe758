"""Green-light speed advisory: four approaching states plus a speed band.

State selection, in evaluation order:

1. Red light, vehicle stopped at the intersection -> WAITING_FOR_GREEN.
2. Red light otherwise: the violation predicate decides between RLVW and a
   SPEED_ADVISORY whose v_max guarantees arrival no earlier than green onset.
3. Green light, vehicle stopped at the intersection -> NO_RECOMMENDATION.
4. Green light otherwise: the speed needed to reach the stop bar within the
   remaining green is advised when it is legal; when it is not, the violation
   predicate decides between RLVW and NO_RECOMMENDATION.
5. Yellow mirrors the green branch without the yellow-time allowance.

Speeds are computed in m/s and carried in km/h on the advisory; fields that
do not apply to the current state carry -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from . import rlvw
from .errors import InvalidInput
from .messages import SignalState

MS_TO_KMH = 3.6
NOT_APPLICABLE = -1.0


class ApproachingState(IntEnum):
    WAITING_FOR_GREEN = 1
    RLVW = 2
    SPEED_ADVISORY = 3
    NO_RECOMMENDATION = 4


@dataclass(frozen=True)
class GlosaConfig:
    """Tuning for the advisory. ``v_limit`` is the road speed limit in m/s;
    ``d_near`` is the radius in meters within which a stopped vehicle counts
    as waiting at the intersection. ``include_yellow_in_window`` widens the
    pass window by the yellow time (off by default: the advisory aims at
    green, not at squeaking through yellow)."""

    v_limit: float
    v_eps: float = rlvw.DEFAULT_V_EPS
    d_near: float = 10.0
    t_yellow: float = 0.0
    include_yellow_in_window: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.v_limit) and self.v_limit > 0):
            raise InvalidInput(f"v_limit must be positive, got {self.v_limit!r}")
        if not (math.isfinite(self.v_eps) and self.v_eps > 0):
            raise InvalidInput(f"v_eps must be positive, got {self.v_eps!r}")
        if not (math.isfinite(self.d_near) and self.d_near > 0):
            raise InvalidInput(f"d_near must be positive, got {self.d_near!r}")
        if not (math.isfinite(self.t_yellow) and self.t_yellow >= 0):
            raise InvalidInput(f"t_yellow must be non-negative, got {self.t_yellow!r}")

    @property
    def v_limit_kmh(self) -> float:
        return self.v_limit * MS_TO_KMH


@dataclass(frozen=True)
class Advisory:
    """Advisory for one tick. Speeds in km/h; -1 marks a field that does not
    apply to the current approaching state."""

    approaching_state: ApproachingState
    v_min_kmh: float = NOT_APPLICABLE
    v_max_kmh: float = NOT_APPLICABLE
    time_to_green_s: float = NOT_APPLICABLE
    warn: bool = False


def _check_inputs(t_rem: float, d_int: float, v_veh: float) -> None:
    for name, value in (("t_rem", t_rem), ("d_int", d_int), ("v_veh", v_veh)):
        if not math.isfinite(value) or value < 0:
            raise InvalidInput(f"{name} must be finite and non-negative, got {value!r}")


def advise(
    state: SignalState, t_rem: float, d_int: float, v_veh: float, cfg: GlosaConfig
) -> Advisory:
    """Compute the approaching state and speed band for one tick."""
    if not isinstance(state, SignalState):
        raise InvalidInput(f"state must be a SignalState, got {state!r}")
    _check_inputs(t_rem, d_int, v_veh)

    warning = rlvw.evaluate(
        rlvw.RlvwInput(
            state=state, d_int=d_int, v_veh=v_veh, t_rem=t_rem, t_yellow=cfg.t_yellow
        ),
        v_eps=cfg.v_eps,
    )

    if state is SignalState.RED:
        if v_veh < cfg.v_eps and d_int <= cfg.d_near:
            return Advisory(ApproachingState.WAITING_FOR_GREEN, time_to_green_s=t_rem)
        if warning.warn:
            return Advisory(ApproachingState.RLVW, time_to_green_s=t_rem, warn=True)
        # Cap the approach so the stop bar is reached no earlier than green onset.
        v_max = cfg.v_limit if t_rem <= 0 else min(d_int / t_rem, cfg.v_limit)
        return Advisory(
            ApproachingState.SPEED_ADVISORY,
            v_max_kmh=v_max * MS_TO_KMH,
            time_to_green_s=t_rem,
        )

    if state is SignalState.GREEN and v_veh < cfg.v_eps and d_int <= cfg.d_near:
        return Advisory(ApproachingState.NO_RECOMMENDATION)

    # Green or yellow with a live approach: can the stop bar be reached in time?
    window = t_rem
    if state is SignalState.GREEN and cfg.include_yellow_in_window:
        window += cfg.t_yellow
    v_req = math.inf if window <= 0 else d_int / window
    if v_req <= cfg.v_limit:
        return Advisory(
            ApproachingState.SPEED_ADVISORY,
            v_min_kmh=v_req * MS_TO_KMH,
            v_max_kmh=cfg.v_limit_kmh,
        )
    if warning.warn:
        return Advisory(ApproachingState.RLVW, warn=True)
    return Advisory(ApproachingState.NO_RECOMMENDATION)
