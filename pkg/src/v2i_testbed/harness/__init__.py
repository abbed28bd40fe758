"""Scenario harness: runner, transports, logging, serving, and the CLI."""

from .runner import Simulation, TelemetryFrame, TimeSeriesLog, TimeSeriesRow, run_scenario
from .scenario import ScenarioConfig, builtin_names, load_expectation, load_scenario

__all__ = [
    "ScenarioConfig",
    "Simulation",
    "TelemetryFrame",
    "TimeSeriesLog",
    "TimeSeriesRow",
    "builtin_names",
    "load_expectation",
    "load_scenario",
    "run_scenario",
]
