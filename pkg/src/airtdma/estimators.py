"""scikit-learn compatible wrappers around the closed-form model.

The models have nothing to learn; ``fit`` validates the input shape and
hyper-parameters so the objects drop into pipelines, grid searches and
``score`` calls against simulated measurements.
"""
import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import analytics
from .analytics import DelayParams, HopRounding, LinkParams
from .timing import LINE_OF_SIGHT_KM, SPEED_OF_LIGHT, MacVariant


class _ClosedFormModel(RegressorMixin, BaseEstimator):
    n_columns = 1

    def _validate(self, X, reset):
        X = check_array(X, dtype=np.float64, ensure_2d=True)
        if X.shape[1] != self.n_columns:
            raise ValueError(
                f"{type(self).__name__} expects {self.n_columns} column(s), got {X.shape[1]}"
            )
        if reset:
            self.n_features_in_ = X.shape[1]
        return X

    def fit(self, X, y=None):
        self._check_params()
        self._validate(X, reset=True)
        return self

    def predict(self, X):
        check_is_fitted(self, "n_features_in_")
        X = self._validate(X, reset=False)
        return np.array([self._predict_row(row) for row in X], dtype=np.float64)

    def _check_params(self):
        pass


class LinkUtilizationModel(_ClosedFormModel):
    """Predict link utilization from inter-aircraft distance (km).

    Parameters
    ----------
    variant : {"proposed", "legacy"}
    payload_bits : int, optional
        Bits per transmission; defaults to 172 (proposed) or 100 (legacy).
    data_rate : float
        Channel rate in bit/s.
    propagation_speed : float
        Signal speed in m/s.
    """

    def __init__(self, variant="proposed", payload_bits=None, data_rate=analytics.DATA_RATE,
                 propagation_speed=SPEED_OF_LIGHT, max_range_km=LINE_OF_SIGHT_KM):
        self.variant = variant
        self.payload_bits = payload_bits
        self.data_rate = data_rate
        self.propagation_speed = propagation_speed
        self.max_range_km = max_range_km

    def _bits(self):
        if self.payload_bits is not None:
            return self.payload_bits
        return MacVariant.parse(self.variant).default_payload_bits

    def _check_params(self):
        MacVariant.parse(self.variant)
        LinkParams(self._bits(), self.data_rate, 0.0, self.propagation_speed, self.max_range_km)

    def _link(self, distance_km):
        return LinkParams(self._bits(), self.data_rate, float(distance_km),
                          self.propagation_speed, self.max_range_km)

    def _predict_row(self, row):
        return analytics.utilization(self.variant, self._link(row[0]))

    def throughput(self, X):
        """Link throughput in bit/s for each distance in ``X``."""
        check_is_fitted(self, "n_features_in_")
        X = self._validate(X, reset=False)
        return np.array([analytics.link_throughput(self._link(r[0])) for r in X])


class NotificationDelayModel(_ClosedFormModel):
    """Predict weather notification delay (s) from ``[d_gs_km, d_int_km]`` rows."""

    n_columns = 2

    def __init__(self, rho=0.0, frame_duration=analytics.FRAME_DURATION_S,
                 hop_rounding="fractional",
                 interval_bounds=(analytics.MIN_INTERVAL_KM, analytics.MAX_INTERVAL_KM)):
        self.rho = rho
        self.frame_duration = frame_duration
        self.hop_rounding = hop_rounding
        self.interval_bounds = interval_bounds

    def _params(self, d_gs=analytics.GS_DISTANCE_KM, d_int=None):
        d_int = self.interval_bounds[0] if d_int is None else d_int
        return DelayParams(self.rho, float(d_gs), float(d_int), self.frame_duration,
                           hop_rounding=HopRounding.parse(self.hop_rounding),
                           interval_bounds=tuple(self.interval_bounds))

    def _check_params(self):
        self._params()

    def _predict_row(self, row):
        return analytics.notification_delay(self._params(row[0], row[1]))


class EndToEndThroughputModel(_ClosedFormModel):
    """Predict end-to-end throughput (bit/s) from distance to the ground station (km)."""

    def __init__(self, variant="proposed", payload_bits=None, rho=0.0,
                 frame_duration=analytics.FRAME_DURATION_S, d_int_min=analytics.MIN_INTERVAL_KM,
                 d_int_max=analytics.MAX_INTERVAL_KM, hop_rounding="fractional"):
        self.variant = variant
        self.payload_bits = payload_bits
        self.rho = rho
        self.frame_duration = frame_duration
        self.d_int_min = d_int_min
        self.d_int_max = d_int_max
        self.hop_rounding = hop_rounding

    def _params(self, d_gs=analytics.GS_DISTANCE_KM):
        bits = self.payload_bits
        if bits is None:
            bits = MacVariant.parse(self.variant).default_payload_bits
        return DelayParams(self.rho, float(d_gs), self.d_int_min, self.frame_duration, bits,
                           HopRounding.parse(self.hop_rounding),
                           interval_bounds=(self.d_int_min, self.d_int_max))

    def _check_params(self):
        self._params()

    def _predict_row(self, row):
        return analytics.end_to_end_throughput(self._params(row[0]), self.d_int_min, self.d_int_max)
