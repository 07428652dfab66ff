"""Scenario I/O, sweeps, simulation runs and the command line."""
from .results import ResultTable, read_provenance
from .runner import compare, simulate
from .scenario import parse_scenario, preset_names, scenario_from_dict, serialize_scenario
from .sweep import Quantity, SweepSpec, sweep

__all__ = [
    "Quantity", "ResultTable", "SweepSpec", "compare", "parse_scenario", "preset_names",
    "read_provenance", "scenario_from_dict", "serialize_scenario", "simulate", "sweep",
]
