"""Deterministic slot-stepped simulator of the airborne TDMA relay chain."""
from .config import ScenarioConfig
from .engine import (
    GS,
    AircraftNode,
    Mode,
    Packet,
    PiggybackAck,
    SimState,
    Verdict,
    begin_frame,
    bernoulli_loss,
    build_scenario,
    reserve_slots,
    run,
    simulate,
    step_slot,
)
from .metrics import Delivery, HopRecord, RunMetrics, SlotConflict, TraceRecord, trace_to_csv

__all__ = [
    "GS", "AircraftNode", "Delivery", "HopRecord", "Mode", "Packet", "PiggybackAck",
    "RunMetrics", "ScenarioConfig", "SimState", "SlotConflict", "TraceRecord", "Verdict",
    "begin_frame", "bernoulli_loss", "build_scenario", "reserve_slots", "run", "simulate",
    "step_slot", "trace_to_csv",
]
