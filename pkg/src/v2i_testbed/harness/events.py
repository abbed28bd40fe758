"""Turn a time-series log into its ordered event sequence.

The builtin scenarios are checked against expectation files listing these
events, because the reference runs are plots rather than numeric tables:
the sequence of transitions is what a run must reproduce, not exact timing.

Event kinds:
  warn_on / warn_off  warning flag transitions
  stop / go           speed reaching zero / leaving zero
  state               advisory approaching-state changes (GLOSA runs)
  cross               first tick at the stop bar; detail carries ``moving``
Each event records the ground-truth light at that tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .runner import NO_STATE, TimeSeriesLog


@dataclass(frozen=True)
class Event:
    kind: str
    light: str
    t: float
    detail: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        obj = {"event": self.kind, "light": self.light}
        obj.update(self.detail)
        return obj


def extract_events(log: TimeSeriesLog) -> list[Event]:
    events: list[Event] = []
    prev_warn = False
    prev_v = None
    prev_state = None
    crossed = False
    for row in log.rows:
        light = row.light.name
        if row.warn and not prev_warn:
            events.append(Event("warn_on", light, row.t))
        elif prev_warn and not row.warn:
            events.append(Event("warn_off", light, row.t))
        prev_warn = row.warn

        if prev_v is not None:
            if row.v_kmh == 0.0 and prev_v > 0.0:
                events.append(Event("stop", light, row.t))
            elif row.v_kmh > 0.0 and prev_v == 0.0:
                events.append(Event("go", light, row.t))
        prev_v = row.v_kmh

        if row.state != NO_STATE and row.state != prev_state:
            events.append(Event("state", light, row.t, {"state": row.state}))
            prev_state = row.state

        if not crossed and row.d_int == 0.0:
            crossed = True
            events.append(Event("cross", light, row.t, {"moving": row.v_kmh > 0.0}))
    return events


def events_to_obj(events: list[Event]) -> list[dict]:
    """Comparable form (kind, light, detail) used by expectation files; time
    is deliberately excluded."""
    return [e.to_obj() for e in events]


def contains_subsequence(events: list[dict], required: list[dict]) -> bool:
    """True when ``required`` appears in order within ``events``; a required
    entry matches an event that has at least its key/value pairs, and a
    ``light`` given as a list matches any of the listed states."""
    it = iter(events)
    for want in required:
        for have in it:
            if _matches(have, want):
                break
        else:
            return False
    return True


def _matches(have: dict, want: dict) -> bool:
    for key, value in want.items():
        if isinstance(value, list):
            if have.get(key) not in value:
                return False
        elif have.get(key) != value:
            return False
    return True
