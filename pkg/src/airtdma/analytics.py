"""Closed-form performance model: link utilization, notification delay and
end-to-end throughput for the legacy and proposed MACs."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .exceptions import DivergenceError, InvalidArgumentError
from .timing import LINE_OF_SIGHT_KM, SPEED_OF_LIGHT, MacVariant

DATA_RATE = 31_500  # bit/s
FRAME_DURATION_S = 2.0
GS_DISTANCE_KM = 4900.0
MIN_INTERVAL_KM = 90.0
MAX_INTERVAL_KM = LINE_OF_SIGHT_KM
MAX_RHO = 0.1


class HopRounding(enum.Enum):
    FRACTIONAL = "fractional"
    CEILING = "ceiling"

    @classmethod
    def parse(cls, value) -> "HopRounding":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidArgumentError(
                f"unknown hop rounding {value!r}; expected 'fractional' or 'ceiling'"
            ) from None


def _finite(name, value, *, positive=False):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be a finite number, got {value!r}")
    if positive and value <= 0:
        raise InvalidArgumentError(f"{name} must be > 0, got {value!r}")
    if value < 0:
        raise InvalidArgumentError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class LinkParams:
    bits: int  # L
    data_rate: float = DATA_RATE  # R, bit/s
    distance_km: float = LINE_OF_SIGHT_KM  # d
    propagation_speed: float = SPEED_OF_LIGHT  # v, m/s
    max_range_km: float = LINE_OF_SIGHT_KM

    def __post_init__(self):
        _finite("bits", self.bits, positive=True)
        _finite("data_rate", self.data_rate, positive=True)
        _finite("distance_km", self.distance_km)
        _finite("propagation_speed", self.propagation_speed, positive=True)
        if self.distance_km > self.max_range_km:
            raise InvalidArgumentError(
                f"link distance {self.distance_km} km exceeds line of sight {self.max_range_km} km"
            )

    @property
    def propagation_s(self) -> float:
        return self.distance_km * 1000.0 / self.propagation_speed

    @property
    def transmission_s(self) -> float:
        return self.bits / self.data_rate


def link_throughput(p: LinkParams) -> float:
    """Bits per second: L / (d/v + L/R)."""
    return p.bits / (p.propagation_s + p.transmission_s)


def utilization(variant, p: LinkParams) -> float:
    """Throughput over data rate. The legacy slot pays the propagation delay
    twice, once for the data and once for its in-slot ACK."""
    variant = MacVariant.parse(variant)
    tx = p.transmission_s
    return tx / (variant.guard_count * p.propagation_s + tx)


def expected_transmissions(rho: float) -> float:
    """Mean attempts per link under i.i.d. loss ``rho``: 1 / (1 - rho)."""
    _finite("rho", rho)
    if rho >= 1:
        raise DivergenceError(f"expected transmissions diverge for rho={rho} >= 1")
    return 1.0 / (1.0 - rho)


def _exact(x) -> Fraction:
    # decimal reading of the float, so 4900/700 is exactly 7
    return Fraction(repr(float(x)))


def hop_count(d_gs: float, d_int: float, mode=HopRounding.FRACTIONAL) -> float:
    _finite("d_gs", d_gs)
    _finite("d_int", d_int, positive=True)
    mode = HopRounding.parse(mode)
    if mode is HopRounding.FRACTIONAL:
        return d_gs / d_int
    return float(math.ceil(_exact(d_gs) / _exact(d_int)))


@dataclass(frozen=True)
class DelayParams:
    rho: float = 0.0
    d_gs: float = GS_DISTANCE_KM
    d_int: float = MIN_INTERVAL_KM
    frame_duration: float = FRAME_DURATION_S  # T_f, seconds
    slot_bits: int = 172  # T_d
    hop_rounding: HopRounding = HopRounding.FRACTIONAL
    interval_bounds: tuple = (MIN_INTERVAL_KM, MAX_INTERVAL_KM)
    max_rho: float = MAX_RHO

    def __post_init__(self):
        _finite("rho", self.rho)
        if self.rho > self.max_rho:
            raise InvalidArgumentError(f"rho={self.rho} outside [0, {self.max_rho}]")
        _finite("d_gs", self.d_gs, positive=True)
        _finite("d_int", self.d_int, positive=True)
        lo, hi = self.interval_bounds
        if not lo <= self.d_int <= hi:
            raise InvalidArgumentError(f"d_int={self.d_int} km outside [{lo}, {hi}] km")
        _finite("frame_duration", self.frame_duration, positive=True)
        _finite("slot_bits", self.slot_bits, positive=True)
        object.__setattr__(self, "hop_rounding", HopRounding.parse(self.hop_rounding))

    def with_interval(self, d_int) -> "DelayParams":
        return DelayParams(self.rho, self.d_gs, d_int, self.frame_duration, self.slot_bits,
                           self.hop_rounding, self.interval_bounds, self.max_rho)


def notification_delay(p: DelayParams) -> float:
    """Seconds for a report to reach the ground station: N * H * T_f."""
    return (expected_transmissions(p.rho)
            * hop_count(p.d_gs, p.d_int, p.hop_rounding)
            * p.frame_duration)


def averaged_notification_delay(rho, d_gs, d_int_min=MIN_INTERVAL_KM, d_int_max=MAX_INTERVAL_KM,
                                frame_duration=FRAME_DURATION_S,
                                mode=HopRounding.FRACTIONAL) -> float:
    """Mean of the delays at the densest and the sparsest aircraft spacing."""
    if not 0 < d_int_min <= d_int_max:
        raise InvalidArgumentError("need 0 < d_int_min <= d_int_max")
    base = DelayParams(rho, d_gs, d_int_min, frame_duration, hop_rounding=mode,
                       interval_bounds=(d_int_min, d_int_max))
    return (notification_delay(base) + notification_delay(base.with_interval(d_int_max))) / 2


def end_to_end_throughput(p: DelayParams, d_int_min=MIN_INTERVAL_KM,
                          d_int_max=MAX_INTERVAL_KM) -> float:
    """S = T_d * H_avg / d_t, with H_avg and d_t averaged over the two spacings.

    With fractional hops the hop count cancels and S reduces to
    T_d / (N * T_f), independent of the distance to the ground station.
    """
    h_avg = (hop_count(p.d_gs, d_int_min, p.hop_rounding)
             + hop_count(p.d_gs, d_int_max, p.hop_rounding)) / 2
    d_t = averaged_notification_delay(p.rho, p.d_gs, d_int_min, d_int_max,
                                      p.frame_duration, p.hop_rounding)
    return p.slot_bits * h_avg / d_t


class HfBand(NamedTuple):
    low: float
    high: float
    mid: float

    @property
    def width(self) -> float:
        return self.high - self.low


def hf_voice_baseline() -> HfBand:
    """HF voice weather notification takes one to two minutes."""
    return HfBand(60.0, 120.0, 90.0)


def per_hop_frames(variant, rho: float) -> float:
    """Expected frames one hop occupies in the slot-stepped protocol.

    Each failed proposed-MAC attempt costs the ACK-wait frame plus the
    retransmission frame; the legacy in-slot ACK allows a retry next frame.
    """
    variant = MacVariant.parse(variant)
    failures = expected_transmissions(rho) - 1.0
    return 1.0 + (2.0 if variant is MacVariant.PROPOSED else 1.0) * failures
