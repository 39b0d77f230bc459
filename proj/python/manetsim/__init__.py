"""Python bindings for the manet simulator."""

import json
from dataclasses import dataclass

from ._core import (
    BadDuration,
    DegenerateTrajectory,
    InconsistentLedger,
    OutOfOrder,
    ScenarioSemanticError,
    ScenarioSyntaxError,
    UnknownScenario,
    ZeroLength,
    builtin_names,
    builtin_text,
    canonical,
    control_overhead,
    delay_series,
    delivery_ratio,
    density,
    flow_rate,
    load,
    mean_speed,
    route_sequence,
    throughput_series,
    transmission_efficiency,
    write_outputs,
)
from . import _core


@dataclass
class RunOutput:
    report: dict
    trace: str
    loops: int
    loop_checks: int
    buffered_at_end: int
    in_flight_at_end: int


def run(scenario, protocol="aodv", seed=1, *, check_loops=False, hello_interval=None, update_interval=None):
    """Run a builtin name, a scenario file path or scenario text."""
    if "\n" in scenario:
        text, name = scenario, "scenario"
    else:
        text, name = load(scenario), scenario
    raw = _core.run(text, name, protocol, seed, check_loops, hello_interval, update_interval)
    raw["report"] = json.loads(raw["report"])
    return RunOutput(**raw)


__all__ = [name for name in dir() if not name.startswith("_")]
