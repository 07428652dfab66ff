from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..exceptions import ConfigError, InvalidArgumentError
from ..timing import (
    GUARD_MS,
    LINE_OF_SIGHT_KM,
    SPEED_OF_LIGHT,
    FrameLayout,
    MacVariant,
    SlotLayout,
    guard_time,
    make_slot_layout,
)

ORIGINATORS = ("tail", "all")


@dataclass(frozen=True)
class ScenarioConfig:
    """One relay-chain experiment.

    The ground station sits at position 0 and aircraft at multiples of
    ``node_interval_km`` out to (at least) ``chain_length_km``. With
    ``originators="tail"`` only the farthest aircraft generates reports;
    with ``"all"`` every aircraft does.
    """

    variant: MacVariant = MacVariant.PROPOSED
    frame: FrameLayout = field(default_factory=FrameLayout)
    guard_ms: float = GUARD_MS
    payload_bits: int | None = None
    chain_length_km: float = 4900.0
    node_interval_km: float = LINE_OF_SIGHT_KM
    rho: float = 0.0
    report_interval_frames: int = 3
    sim_frames: int = 300
    rng_seed: int = 0
    aircraft_speed_kmh: float = 1000.0
    weather_enabled: bool = True
    retry_limit: int = 8
    originators: str = "tail"
    max_range_km: float = LINE_OF_SIGHT_KM
    propagation_speed: float = SPEED_OF_LIGHT
    queue_limit: int | None = None
    slot_assignment: dict | None = None
    drain: bool = True

    def __post_init__(self):
        try:
            object.__setattr__(self, "variant", MacVariant.parse(self.variant))
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from None

        def need(cond, message):
            if not cond:
                raise ConfigError(message)

        def finite(name, value):
            need(isinstance(value, (int, float)) and not isinstance(value, bool)
                 and math.isfinite(value), f"{name} must be a finite number")

        for name in ("guard_ms", "chain_length_km", "node_interval_km", "rho",
                     "aircraft_speed_kmh", "max_range_km", "propagation_speed"):
            finite(name, getattr(self, name))
        need(self.chain_length_km > 0, "chain_length_km must be > 0")
        need(self.node_interval_km > 0, "node_interval_km must be > 0")
        need(self.node_interval_km <= self.max_range_km,
             f"node_interval_km={self.node_interval_km} exceeds the line-of-sight limit "
             f"max_range_km={self.max_range_km}")
        need(0.0 <= self.rho <= 1.0, "rho must lie in [0, 1]")
        need(isinstance(self.report_interval_frames, int) and self.report_interval_frames >= 1,
             "report_interval_frames must be an integer >= 1")
        need(isinstance(self.sim_frames, int) and self.sim_frames >= 1,
             "sim_frames must be an integer >= 1")
        need(isinstance(self.retry_limit, int) and self.retry_limit >= 1,
             "retry_limit must be an integer >= 1")
        need(isinstance(self.rng_seed, int) and 0 <= self.rng_seed < 2 ** 64,
             "seed must be an unsigned 64-bit integer")
        need(self.originators in ORIGINATORS, f"originators must be one of {ORIGINATORS}")
        need(self.queue_limit is None or (isinstance(self.queue_limit, int) and self.queue_limit >= 1),
             "queue_limit must be null or an integer >= 1")
        need(self.propagation_speed > 0, "propagation_speed must be > 0")
        propagation = guard_time(self.node_interval_km, self.propagation_speed)
        need(propagation <= self.guard_ms + 1e-9,
             f"guard_ms={self.guard_ms} does not cover the {propagation:.4f} ms propagation "
             f"delay of a {self.node_interval_km} km link")
        try:
            self.layout  # noqa: B018 - validates the slot split
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from None
        if self.slot_assignment is not None:
            assignment = {int(k): int(v) for k, v in self.slot_assignment.items()}
            region = self.frame.reserved_slots
            for node, slot in assignment.items():
                need(1 <= node <= self.n_aircraft, f"slot_assignment names unknown aircraft {node}")
                need(slot in region, f"slot_assignment slot {slot} is outside the reserved region")
            object.__setattr__(self, "slot_assignment", assignment)

    @property
    def layout(self) -> SlotLayout:
        bits = self.payload_bits if self.payload_bits is not None else self.variant.default_payload_bits
        return make_slot_layout(self.variant, self.frame.slot_duration, self.guard_ms,
                                payload_override=bits)

    @property
    def n_aircraft(self) -> int:
        ratio = Fraction(repr(float(self.chain_length_km))) / Fraction(repr(float(self.node_interval_km)))
        return math.ceil(ratio)

    @property
    def n_nodes(self) -> int:
        return self.n_aircraft + 1

    @property
    def frame_duration(self) -> float:
        return self.frame.frame_duration

    def originator_ids(self) -> list[int]:
        if self.originators == "tail":
            return [self.n_aircraft]
        return list(range(1, self.n_aircraft + 1))
