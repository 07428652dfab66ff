"""Frame and slot timing for the legacy and proposed airborne TDMA MACs.

Durations are held as integer nanoseconds so that frame arithmetic is exact;
milliseconds (slots) and seconds (frames) appear only at the API boundary.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import InvalidArgumentError, LayoutInfeasibleError

NS_PER_MS = 1_000_000
NS_PER_S = 1_000_000_000

SPEED_OF_LIGHT = 3.0e8  # m/s, free-space propagation
LINE_OF_SIGHT_KM = 678.0

SLOTS_PER_FRAME = 256
SLOT_DURATION_MS = 7.8125
GUARD_MS = 2.3
RANDOM_ACCESS_SLOTS = 16
# In-slot ACK interval of the legacy scheme. With this value the legacy data
# part is exactly 3.2 ms, i.e. 100 bits at 31.25 kb/s.
LEGACY_ACK_MS = 0.0125
LAYOUT_DATA_RATE = 31_250  # bit/s; floor(data * rate) gives 172 / 100 bits


class MacVariant(enum.Enum):
    LEGACY = "legacy"
    PROPOSED = "proposed"

    @property
    def guard_count(self) -> int:
        return 2 if self is MacVariant.LEGACY else 1

    @property
    def has_inslot_ack(self) -> bool:
        return self is MacVariant.LEGACY

    @property
    def default_payload_bits(self) -> int:
        return 100 if self is MacVariant.LEGACY else 172

    @classmethod
    def parse(cls, value) -> "MacVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidArgumentError(
                f"unknown MAC variant {value!r}; expected 'legacy' or 'proposed'"
            ) from None


def ms_to_ns(ms) -> int:
    if not math.isfinite(ms):
        raise InvalidArgumentError(f"duration must be finite, got {ms!r}")
    return round(ms * NS_PER_MS)


def _check_nonneg_finite(name, value):
    if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 0:
        raise InvalidArgumentError(f"{name} must be a finite non-negative number, got {value!r}")


def guard_time(max_range_km: float, propagation_speed: float = SPEED_OF_LIGHT) -> float:
    """One-way propagation delay over ``max_range_km``, in milliseconds."""
    _check_nonneg_finite("max_range", max_range_km)
    _check_nonneg_finite("propagation_speed", propagation_speed)
    if propagation_speed == 0:
        raise InvalidArgumentError("propagation_speed must be > 0")
    return max_range_km * 1000.0 / propagation_speed * 1000.0


@dataclass(frozen=True)
class SlotLayout:
    variant: MacVariant
    slot_ns: int
    guard_ns: int
    data_ns: int
    ack_ns: int
    payload_bits: int

    def __post_init__(self):
        if self.slot_ns <= 0 or self.data_ns <= 0:
            raise InvalidArgumentError("slot and data durations must be > 0")
        if self.guard_ns < 0 or self.ack_ns < 0:
            raise InvalidArgumentError("guard and ack durations must be >= 0")
        if self.variant is MacVariant.PROPOSED and self.ack_ns != 0:
            raise InvalidArgumentError("the proposed slot carries no in-slot ACK")
        used = self.variant.guard_count * self.guard_ns + self.data_ns + self.ack_ns
        if abs(used - self.slot_ns) > 1_000:  # 1 us
            raise InvalidArgumentError(
                f"slot parts sum to {used} ns, slot is {self.slot_ns} ns"
            )
        if self.payload_bits < 1:
            raise InvalidArgumentError("payload_bits must be >= 1")

    @property
    def slot_duration(self) -> float:
        return self.slot_ns / NS_PER_MS

    @property
    def guard(self) -> float:
        return self.guard_ns / NS_PER_MS

    @property
    def data(self) -> float:
        return self.data_ns / NS_PER_MS

    @property
    def ack(self) -> float:
        return self.ack_ns / NS_PER_MS


def make_slot_layout(
    variant,
    slot_duration: float = SLOT_DURATION_MS,
    guard: float = GUARD_MS,
    payload_override: int | None = None,
    data_rate: float | None = None,
    ack: float | None = None,
) -> SlotLayout:
    """Split one slot into guard(s), data and (legacy only) an ACK interval.

    ``payload_bits`` is ``payload_override`` when given, otherwise
    ``floor(data * data_rate)``.
    """
    variant = MacVariant.parse(variant)
    slot_ns = ms_to_ns(slot_duration)
    guard_ns = ms_to_ns(guard)
    if slot_ns <= 0 or guard_ns < 0:
        raise InvalidArgumentError("slot_duration must be > 0 and guard >= 0")
    if variant is MacVariant.LEGACY:
        ack_ns = ms_to_ns(LEGACY_ACK_MS if ack is None else ack)
    else:
        if ack:
            raise InvalidArgumentError("the proposed slot carries no in-slot ACK")
        ack_ns = 0
    budget = variant.guard_count * guard_ns + ack_ns
    if budget >= slot_ns:
        raise LayoutInfeasibleError(
            f"{variant.value}: guards+ack ({budget / NS_PER_MS} ms) leave no data time "
            f"in a {slot_ns / NS_PER_MS} ms slot"
        )
    data_ns = slot_ns - budget
    if payload_override is not None:
        payload = int(payload_override)
    else:
        if data_rate is None or not data_rate > 0:
            raise InvalidArgumentError("data_rate > 0 is required without payload_override")
        payload = math.floor(Fraction(data_ns) * Fraction(data_rate) / NS_PER_S)
    return SlotLayout(variant, slot_ns, guard_ns, data_ns, ack_ns, payload)


def reference_slot_layout(variant) -> SlotLayout:
    """7.8125 ms slot, 2.3 ms guard(s), 100 / 172 payload bits."""
    variant = MacVariant.parse(variant)
    return make_slot_layout(variant, payload_override=variant.default_payload_bits)


def guard_overhead_fraction(layout: SlotLayout, variant=None) -> float:
    """Share of the slot spent in guard intervals."""
    variant = layout.variant if variant is None else MacVariant.parse(variant)
    return variant.guard_count * layout.guard_ns / layout.slot_ns


@dataclass(frozen=True)
class FrameLayout:
    slots_per_frame: int = SLOTS_PER_FRAME
    slot_ns: int = ms_to_ns(SLOT_DURATION_MS)
    random_access_slots: int = RANDOM_ACCESS_SLOTS

    def __post_init__(self):
        if self.slots_per_frame < 2:
            raise InvalidArgumentError("a frame needs at least two slots")
        if self.slot_ns <= 0:
            raise InvalidArgumentError("slot duration must be > 0")
        if not 0 < self.random_access_slots < self.slots_per_frame:
            raise InvalidArgumentError(
                "random_access_slots must satisfy 0 < n < slots_per_frame"
            )

    @classmethod
    def from_ms(cls, slots_per_frame=SLOTS_PER_FRAME, slot_duration=SLOT_DURATION_MS,
                random_access_slots=RANDOM_ACCESS_SLOTS) -> "FrameLayout":
        return cls(slots_per_frame, ms_to_ns(slot_duration), random_access_slots)

    @property
    def frame_ns(self) -> int:
        return self.slots_per_frame * self.slot_ns

    @property
    def slot_duration(self) -> float:
        return self.slot_ns / NS_PER_MS

    @property
    def frame_duration(self) -> float:
        return self.frame_ns / NS_PER_S

    @property
    def reserved_slots(self) -> range:
        """Slot indices of the reserved-access region (after random access)."""
        return range(self.random_access_slots, self.slots_per_frame)
