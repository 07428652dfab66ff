"""Parameter sweeps over the closed-form model (utilization, notification
delay versus ground-station distance and versus spacing, end-to-end
throughput)."""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .. import analytics
from ..analytics import HopRounding
from ..estimators import EndToEndThroughputModel, LinkUtilizationModel, NotificationDelayModel
from ..exceptions import ConfigError, InvalidArgumentError
from ..timing import LINE_OF_SIGHT_KM, SPEED_OF_LIGHT, MacVariant
from .results import ResultTable, provenance


class Quantity(enum.Enum):
    UTILIZATION = "utilization"
    DELAY_VS_GS = "delay-vs-gs"
    DELAY_VS_INTERVAL = "delay-vs-interval"
    THROUGHPUT = "throughput"


DEFAULT_AXES = {
    Quantity.UTILIZATION: (1.0, 678.0, 1.0),
    Quantity.DELAY_VS_GS: (500.0, 4900.0, 100.0),
    Quantity.DELAY_VS_INTERVAL: (90.0, 678.0, 1.0),
    Quantity.THROUGHPUT: (500.0, 4900.0, 100.0),
}


@dataclass(frozen=True)
class SweepSpec:
    quantity: Quantity
    axis_min: float | None = None
    axis_max: float | None = None
    axis_step: float | None = None
    rhos: tuple = (0.0, 0.1)
    variants: tuple = ("proposed", "legacy")
    frame_duration: float = analytics.FRAME_DURATION_S
    propagation_speed: float = SPEED_OF_LIGHT
    data_rate: float = analytics.DATA_RATE
    payload_bits: dict | None = None  # variant name -> bits
    d_gs: float = analytics.GS_DISTANCE_KM
    d_int_min: float = analytics.MIN_INTERVAL_KM
    d_int_max: float = analytics.MAX_INTERVAL_KM
    max_range_km: float = LINE_OF_SIGHT_KM
    hop_rounding: HopRounding = HopRounding.FRACTIONAL

    def __post_init__(self):
        try:
            object.__setattr__(self, "quantity", Quantity(getattr(self.quantity, "value", self.quantity)))
        except ValueError:
            raise ConfigError(f"unknown sweep quantity {self.quantity!r}") from None
        lo, hi, step = DEFAULT_AXES[self.quantity]
        for name, default in (("axis_min", lo), ("axis_max", hi), ("axis_step", step)):
            if getattr(self, name) is None:
                object.__setattr__(self, name, default)
        try:
            object.__setattr__(self, "hop_rounding", HopRounding.parse(self.hop_rounding))
            object.__setattr__(self, "variants",
                               tuple(MacVariant.parse(v).value for v in self.variants))
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from None
        object.__setattr__(self, "rhos", tuple(float(r) for r in self.rhos))
        if not self.axis_min < self.axis_max:
            raise ConfigError("axis min must be < max")
        if not self.axis_step > 0:
            raise ConfigError("axis step must be > 0")
        if not self.rhos or not self.variants:
            raise ConfigError("need at least one rho and one variant")
        for rho in self.rhos:
            if not 0 <= rho <= analytics.MAX_RHO:
                raise ConfigError(f"rho={rho} outside [0, {analytics.MAX_RHO}]")
        if not 0 < self.d_int_min <= self.d_int_max <= self.max_range_km:
            raise ConfigError("need 0 < d_int_min <= d_int_max <= max_range_km")
        if self.quantity is Quantity.UTILIZATION and not (
                self.axis_min >= 0 and self.axis_max <= self.max_range_km):
            raise ConfigError(f"distance axis must lie within [0, {self.max_range_km}] km")
        if self.quantity is Quantity.DELAY_VS_INTERVAL and not (
                self.axis_min > 0 and self.axis_max <= self.max_range_km):
            raise ConfigError(f"interval axis must lie within (0, {self.max_range_km}] km")
        if self.quantity in (Quantity.DELAY_VS_GS, Quantity.THROUGHPUT) and self.axis_min <= 0:
            raise ConfigError("distance to ground station must be > 0")

    def axis(self) -> np.ndarray:
        count = math.floor((self.axis_max - self.axis_min) / self.axis_step + 1e-9) + 1
        return np.round(self.axis_min + self.axis_step * np.arange(count), 9)

    def bits(self, variant) -> int:
        if self.payload_bits and variant in self.payload_bits:
            return int(self.payload_bits[variant])
        return MacVariant.parse(variant).default_payload_bits

    def to_dict(self) -> dict:
        out = asdict(self)
        out["quantity"] = self.quantity.value
        out["hop_rounding"] = self.hop_rounding.value
        out["rhos"] = list(self.rhos)
        out["variants"] = list(self.variants)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        data = dict(data)
        data["rhos"] = tuple(data.get("rhos", (0.0, 0.1)))
        data["variants"] = tuple(data.get("variants", ("proposed", "legacy")))
        return cls(**data)


def _rho_label(rho) -> str:
    return f"rho={rho:g}"


def _hf_columns():
    band = analytics.hf_voice_baseline()
    return [band.low, band.mid, band.high]


def sweep(spec: SweepSpec) -> ResultTable:
    """Evaluate the model along the axis; one row per axis sample per series,
    ordered by axis value then series label."""
    axis = spec.axis()
    X = axis.reshape(-1, 1)
    series = {}  # label -> list of per-sample value tuples
    q = spec.quantity
    if q is Quantity.UTILIZATION:
        columns = ["distance_km", "series", "utilization", "throughput_bps"]
        for variant in spec.variants:
            model = LinkUtilizationModel(variant, spec.bits(variant), spec.data_rate,
                                         spec.propagation_speed, spec.max_range_km).fit(X)
            series[variant] = list(zip(model.predict(X), model.throughput(X)))
    elif q is Quantity.DELAY_VS_GS:
        columns = ["d_gs_km", "series", "delay_s", "hf_low_s", "hf_mid_s", "hf_high_s"]
        lo = np.column_stack([axis, np.full_like(axis, spec.d_int_min)])
        hi = np.column_stack([axis, np.full_like(axis, spec.d_int_max)])
        for rho in spec.rhos:
            model = NotificationDelayModel(rho, spec.frame_duration, spec.hop_rounding.value,
                                           (spec.d_int_min, spec.d_int_max)).fit(lo)
            delay = (model.predict(lo) + model.predict(hi)) / 2
            series[_rho_label(rho)] = [(d, *_hf_columns()) for d in delay]
    elif q is Quantity.DELAY_VS_INTERVAL:
        columns = ["d_int_km", "series", "delay_s", "hf_low_s", "hf_mid_s", "hf_high_s"]
        rows = np.column_stack([np.full_like(axis, spec.d_gs), axis])
        bounds = (min(spec.d_int_min, spec.axis_min), spec.max_range_km)
        for rho in spec.rhos:
            model = NotificationDelayModel(rho, spec.frame_duration, spec.hop_rounding.value,
                                           bounds).fit(rows)
            series[_rho_label(rho)] = [(d, *_hf_columns()) for d in model.predict(rows)]
    else:
        columns = ["d_gs_km", "series", "throughput_bps"]
        for variant in spec.variants:
            for rho in spec.rhos:
                model = EndToEndThroughputModel(variant, spec.bits(variant), rho,
                                                spec.frame_duration, spec.d_int_min,
                                                spec.d_int_max, spec.hop_rounding.value).fit(X)
                series[f"{variant} {_rho_label(rho)}"] = [(s,) for s in model.predict(X)]
    rows = []
    for i, x in enumerate(axis):
        for label in sorted(series):
            rows.append([float(x), label, *(float(v) for v in series[label][i])])
    return ResultTable(columns, rows, provenance(f"sweep/{q.value}", spec.to_dict()))
