from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

CONFLICT_REASONS = ("receiver_collision", "own_slot_relay")


class HopRecord(NamedTuple):
    node: int  # sender of the successful hop
    frame: int
    slot: int
    attempt: int


class TraceRecord(NamedTuple):
    frame: int
    slot: int
    sender: int
    receiver: int
    kind: str  # data | relay | ack
    packet: str
    attempt: int
    outcome: str  # ok | lost | collision | deaf


class SlotConflict(NamedTuple):
    frame: int
    slot: int
    node: int
    reason: str
    transmitters: tuple


class Delivery(NamedTuple):
    packet: object
    end_to_end_frames: int
    end_to_end_seconds: float


def trace_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TraceRecord._fields)
    writer.writerows(records)
    return buf.getvalue()


@dataclass
class RunMetrics:
    delivered: list = field(default_factory=list)
    undelivered_count: int = 0
    generated: int = 0
    attempts_per_hop: Counter = field(default_factory=Counter)
    hop_delay_frames: Counter = field(default_factory=Counter)
    gs_goodput_bits_per_s: float = 0.0
    measured_utilization: float = 0.0
    slot_conflicts: list = field(default_factory=list)
    transmissions: int = 0
    frames_run: int = 0
    reservation_frames: int = 0
    tdd_checks: int = 0
    frame_duration_s: float = 2.0

    @property
    def delivered_count(self) -> int:
        return len(self.delivered)

    @staticmethod
    def _mean(hist: Counter) -> float:
        n = sum(hist.values())
        return sum(k * v for k, v in hist.items()) / n if n else float("nan")

    @property
    def mean_attempts(self) -> float:
        return self._mean(self.attempts_per_hop)

    @property
    def mean_hop_delay_frames(self) -> float:
        return self._mean(self.hop_delay_frames)

    @property
    def mean_end_to_end_s(self) -> float:
        if not self.delivered:
            return float("nan")
        return sum(d.end_to_end_seconds for d in self.delivered) / len(self.delivered)

    def conflicts_by_reason(self) -> Counter:
        return Counter(c.reason for c in self.slot_conflicts)

    def summary(self) -> dict:
        return {
            "generated": self.generated,
            "delivered": self.delivered_count,
            "undelivered": self.undelivered_count,
            "mean_end_to_end_s": self.mean_end_to_end_s,
            "mean_attempts_per_hop": self.mean_attempts,
            "mean_hop_delay_frames": self.mean_hop_delay_frames,
            "gs_goodput_bits_per_s": self.gs_goodput_bits_per_s,
            "measured_utilization": self.measured_utilization,
            "transmissions": self.transmissions,
            "slot_conflicts": len(self.slot_conflicts),
            "frames_run": self.frames_run,
            "reservation_frames": self.reservation_frames,
        }
