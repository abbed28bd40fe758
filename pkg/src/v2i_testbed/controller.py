"""Fixed-time signal controller model and SPaT snapshot generation.

Each signal group cycles through an ordered list of (state, duration)
intervals. Interval boundaries belong to the interval being entered, so the
state at any instant is unambiguous. The controller also renders its ground
truth into SPaT messages the way a roadside unit would: minimum end time as
deci-seconds within the hour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import InvariantViolation, UnknownGroup
from .messages import DS_PER_HOUR, PhaseStatus, SignalState, SpatMessage


@dataclass(frozen=True)
class PhaseInterval:
    state: SignalState
    duration: float  # seconds

    def __post_init__(self):
        if not isinstance(self.state, SignalState):
            raise InvariantViolation(f"interval state must be a SignalState, got {self.state!r}")
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise InvariantViolation(f"interval duration must be positive, got {self.duration!r}")


@dataclass(frozen=True)
class SignalPlan:
    """Per-group phase cycles plus a shared start offset."""

    groups: Mapping[int, tuple[PhaseInterval, ...]]
    cycle_offset: float = 0.0

    def __post_init__(self):
        if not self.groups:
            raise InvariantViolation("plan needs at least one signal group")
        if not math.isfinite(self.cycle_offset):
            raise InvariantViolation("cycle_offset must be finite")
        for group, cycle in self.groups.items():
            states = {interval.state for interval in cycle}
            if SignalState.GREEN not in states or SignalState.RED not in states:
                raise InvariantViolation(
                    f"group {group} cycle must contain at least one GREEN and one RED interval"
                )
            total = sum(interval.duration for interval in cycle)
            if not 0 < total < 3600.0:
                raise InvariantViolation(
                    f"group {group} cycle length {total} outside (0, 3600) s"
                )

    def cycle(self, group: int) -> tuple[PhaseInterval, ...]:
        try:
            return self.groups[group]
        except KeyError:
            raise UnknownGroup(f"signal group {group} not in plan") from None

    def cycle_length(self, group: int) -> float:
        return sum(interval.duration for interval in self.cycle(group))


def state_at(plan: SignalPlan, group: int, t: float) -> tuple[SignalState, float]:
    """Signal state of ``group`` at simulation time ``t``, plus the exact time
    remaining in the current interval."""
    cycle = plan.cycle(group)
    length = plan.cycle_length(group)
    tau = (t + plan.cycle_offset) % length
    if tau >= length:  # float edge: x % y can equal y
        tau = 0.0
    elapsed = 0.0
    for interval in cycle:
        end = elapsed + interval.duration
        if tau < end:
            return interval.state, end - tau
        elapsed = end
    # Unreachable except through float rounding at the cycle end.
    last = cycle[-1]
    return last.state, 0.0


def spat_snapshot(
    plan: SignalPlan, t: float, wall_clock_ds: int, intersection_id: int
) -> SpatMessage:
    """Render the controller's current ground truth as a SPaT message.

    min_end_time rounds half-up to the deci-second; half-up (rather than
    half-even) keeps the encoded end time constant across consecutive
    snapshots within one phase.
    """
    phases = []
    for group in sorted(plan.groups):
        state, t_rem = state_at(plan, group, t)
        min_end = (wall_clock_ds + int(math.floor(t_rem * 10.0 + 0.5))) % DS_PER_HOUR
        phases.append(
            PhaseStatus(signal_group=group, event_state=state, min_end_time_ds=min_end)
        )
    return SpatMessage(
        intersection_id=intersection_id, timestamp_ds=wall_clock_ds, phases=tuple(phases)
    )
