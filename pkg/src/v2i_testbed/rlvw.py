"""Red-light-violation warning predicate.

The warning compares the constant-speed arrival time d_int / v_veh against
the time the signal gives the driver:

    green:  warn when d_int / v_veh > t_rem + t_yellow
    yellow: warn when d_int / v_veh > t_rem
    red:    warn when d_int / v_veh < t_rem

All three comparisons are strict; landing exactly on a phase boundary is not
a violation. Below a small speed threshold the warning is suppressed: the
equations divide by speed, and a stopped or creeping vehicle is not about to
run the light.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInput
from .messages import SignalState

DEFAULT_V_EPS = 0.5  # m/s; below this the vehicle counts as stopped


@dataclass(frozen=True)
class RlvwInput:
    """Inputs to the warning predicate. Distances in meters, speeds in m/s,
    times in seconds; everything non-negative."""

    state: SignalState
    d_int: float
    v_veh: float
    t_rem: float
    t_yellow: float = 0.0

    def __post_init__(self):
        if not isinstance(self.state, SignalState):
            raise InvalidInput(f"state must be a SignalState, got {self.state!r}")
        for name in ("d_int", "v_veh", "t_rem", "t_yellow"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidInput(f"{name} must be finite and non-negative, got {value!r}")


@dataclass(frozen=True)
class WarningStatus:
    """Result of one evaluation. ``time_to_arrival`` is None when the vehicle
    is below the stopped threshold and no arrival is predicted."""

    warn: bool
    time_to_arrival: Optional[float]


def evaluate(inp: RlvwInput, v_eps: float = DEFAULT_V_EPS) -> WarningStatus:
    """Apply the violation predicate for the current signal state."""
    if not (math.isfinite(v_eps) and v_eps > 0):
        raise InvalidInput(f"v_eps must be positive, got {v_eps!r}")
    if inp.v_veh < v_eps:
        return WarningStatus(warn=False, time_to_arrival=None)
    tta = inp.d_int / inp.v_veh
    if inp.state is SignalState.GREEN:
        warn = tta > inp.t_rem + inp.t_yellow
    elif inp.state is SignalState.YELLOW:
        warn = tta > inp.t_rem
    else:
        warn = tta < inp.t_rem
    return WarningStatus(warn=warn, time_to_arrival=tta)


class WarningDebouncer:
    """Optional display-side hysteresis: the reported flag flips only after
    ``cycles`` consecutive evaluations agree. ``cycles`` of 0 or 1 passes the
    raw flag through (the default; the predicate itself stays untouched)."""

    def __init__(self, cycles: int = 0):
        if cycles < 0:
            raise InvalidInput(f"cycles must be non-negative, got {cycles!r}")
        self.cycles = cycles
        self._shown = False
        self._pending: Optional[bool] = None
        self._streak = 0

    def update(self, warn: bool) -> bool:
        if self.cycles <= 1:
            self._shown = warn
            return warn
        if warn == self._shown:
            self._pending = None
            self._streak = 0
            return self._shown
        if warn == self._pending:
            self._streak += 1
        else:
            self._pending = warn
            self._streak = 1
        if self._streak >= self.cycles:
            self._shown = warn
            self._pending = None
            self._streak = 0
        return self._shown
