"""Bit-exact codecs for the 100-bit position report and 72-bit weather block.

Wire format: fields are packed big-endian, most significant bit first, in
declaration order. Weather reports are 9 octets; position reports and
composed slot payloads are bit strings (``str`` of ``'0'``/``'1'``) since
100 and 172 are not octet multiples.

Weather layout (72 bits)::

    time 17 | wind_dir 9 | wind_speed 7 | vis_dir 9 | vis_dist 7 |
    cloud_amount 3 | cloud_height 9 | cloud_type 3 | special 8

Position layout (100 bits)::

    aircraft_id 20 | latitude 24 | longitude 24 | altitude 15 | timestamp 17
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields

from .exceptions import CapacityError, DecodeValidationError, EncodeRangeError, LengthError
from .timing import MacVariant

SECONDS_PER_DAY = 86_400
WEATHER_BITS = 72
WEATHER_OCTETS = 9
POSITION_BITS = 100

LAT_SCALE = 2 ** 23 / 90.0
LON_SCALE = 2 ** 23 / 180.0
ALTITUDE_STEP_FT = 10


class SpecialWeather(enum.IntFlag):
    NONE = 0
    HEAVY_RAIN = 1 << 0
    SEVERE_TURBULENCE = 1 << 1
    HIGH_WINDS_GUSTS = 1 << 2
    HAIL = 1 << 3
    ICING = 1 << 4
    LIGHTNING = 1 << 5
    SEVERE_DOWNDRAFTS = 1 << 6
    MICROBURST = 1 << 7

    @classmethod
    def from_names(cls, text: str) -> "SpecialWeather":
        """Parse ``"hail,icing"`` style flag lists (case-insensitive)."""
        flags = cls.NONE
        for name in filter(None, (part.strip() for part in text.split(","))):
            key = name.upper().replace("-", "_").replace(" ", "_")
            if key not in cls.__members__:
                raise ValueError(f"unknown special weather flag {name!r}")
            flags |= cls[key]
        return flags

    def names(self) -> list[str]:
        return [m.name.lower() for m in SpecialWeather if m and m in self]


@dataclass(frozen=True)
class WeatherReport:
    time: int = 0
    wind_dir: int = 0
    wind_speed: int = 0
    vis_dir: int = 0
    vis_dist: int = 0
    cloud_amount: int = 0
    cloud_height: int = 0  # hundreds of feet
    cloud_type: int = 0
    special: SpecialWeather = SpecialWeather.NONE

    def to_dict(self) -> dict:
        out = {f.name: int(getattr(self, f.name)) for f in fields(self)}
        out["special"] = ",".join(SpecialWeather(self.special).names())
        return out


# (field, width, exclusive upper bound or None for full width, saturating)
_WEATHER_FIELDS = (
    ("time", 17, SECONDS_PER_DAY, False),
    ("wind_dir", 9, 360, False),
    ("wind_speed", 7, None, True),
    ("vis_dir", 9, 360, False),
    ("vis_dist", 7, None, True),
    ("cloud_amount", 3, None, False),
    ("cloud_height", 9, None, False),
    ("cloud_type", 3, None, False),
    ("special", 8, None, False),
)


def _pack(values_widths) -> int:
    word = 0
    for value, width in values_widths:
        word = (word << width) | value
    return word


def _unpack(word: int, widths, total: int) -> list[int]:
    out = []
    shift = total
    for width in widths:
        shift -= width
        out.append((word >> shift) & ((1 << width) - 1))
    return out


def _as_int(name, value):
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise EncodeRangeError(name, value, "int", "int")
    return int(value)


def encode_weather(report: WeatherReport) -> bytes:
    packed = []
    for name, width, bound, saturating in _WEATHER_FIELDS:
        value = _as_int(name, getattr(report, name))
        hi = (bound if bound is not None else 1 << width) - 1
        if saturating and value > hi:
            value = hi
        if not 0 <= value <= hi:
            raise EncodeRangeError(name, value, 0, hi)
        packed.append((value, width))
    return _pack(packed).to_bytes(WEATHER_OCTETS, "big")


def decode_weather(data: bytes) -> WeatherReport:
    data = bytes(data)
    if len(data) != WEATHER_OCTETS:
        raise LengthError(f"weather block must be {WEATHER_OCTETS} octets, got {len(data)}")
    values = _unpack(int.from_bytes(data, "big"), [w for _, w, _, _ in _WEATHER_FIELDS], WEATHER_BITS)
    kwargs = {}
    for (name, _, bound, _), value in zip(_WEATHER_FIELDS, values):
        if bound is not None and value >= bound:
            raise DecodeValidationError(name, value)
        kwargs[name] = value
    kwargs["special"] = SpecialWeather(kwargs["special"])
    return WeatherReport(**kwargs)


def weather_to_hex(report: WeatherReport) -> str:
    return encode_weather(report).hex()


def weather_from_hex(text: str) -> WeatherReport:
    text = text.strip()
    if len(text) != 2 * WEATHER_OCTETS:
        raise LengthError(f"weather hex must be {2 * WEATHER_OCTETS} characters, got {len(text)}")
    try:
        raw = bytes.fromhex(text)
    except ValueError as exc:
        raise LengthError(f"not a hex string: {text!r}") from exc
    return decode_weather(raw)


@dataclass(frozen=True)
class PositionReport:
    aircraft_id: int = 0
    latitude: float = 0.0  # degrees, [-90, 90]
    longitude: float = 0.0  # degrees, [-180, 180)
    altitude: int = 0  # feet, 10 ft resolution
    timestamp: int = 0  # seconds since midnight UTC

    def quantized(self) -> "PositionReport":
        """The report as it reads back after a trip through the wire format."""
        return decode_position(encode_position(self))


def _lat_code(lat: float) -> int:
    if not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
        raise EncodeRangeError("latitude", lat, -90.0, 90.0)
    # +90 deg is one LSB past the signed 24-bit range; saturate instead of wrapping
    return min(round(lat * LAT_SCALE), (1 << 23) - 1)


def _lon_code(lon: float) -> int:
    if not math.isfinite(lon) or not -180.0 <= lon < 180.0:
        raise EncodeRangeError("longitude", lon, -180.0, 180.0)
    code = round(lon * LON_SCALE)
    if code == 1 << 23:  # rounds up to +180, which is -180
        code = -(1 << 23)
    return code


def _signed(code: int, width: int) -> int:
    return code - (1 << width) if code & (1 << (width - 1)) else code


def encode_position(report: PositionReport) -> str:
    ident = _as_int("aircraft_id", report.aircraft_id)
    if not 0 <= ident < 1 << 20:
        raise EncodeRangeError("aircraft_id", ident, 0, (1 << 20) - 1)
    altitude = report.altitude
    if not math.isfinite(altitude) or altitude < 0:
        raise EncodeRangeError("altitude", altitude, 0, ((1 << 15) - 1) * ALTITUDE_STEP_FT)
    alt_code = round(altitude / ALTITUDE_STEP_FT)
    if alt_code >= 1 << 15:
        raise EncodeRangeError("altitude", altitude, 0, ((1 << 15) - 1) * ALTITUDE_STEP_FT)
    ts = _as_int("timestamp", report.timestamp)
    if not 0 <= ts < SECONDS_PER_DAY:
        raise EncodeRangeError("timestamp", ts, 0, SECONDS_PER_DAY - 1)
    word = _pack([
        (ident, 20),
        (_lat_code(report.latitude) & 0xFFFFFF, 24),
        (_lon_code(report.longitude) & 0xFFFFFF, 24),
        (alt_code, 15),
        (ts, 17),
    ])
    return format(word, f"0{POSITION_BITS}b")


def decode_position(bits: str) -> PositionReport:
    if len(bits) != POSITION_BITS or set(bits) - {"0", "1"}:
        raise LengthError(f"position report must be {POSITION_BITS} bits of '0'/'1'")
    ident, lat, lon, alt, ts = _unpack(int(bits, 2), (20, 24, 24, 15, 17), POSITION_BITS)
    latitude = _signed(lat, 24) / LAT_SCALE
    if not -90.0 <= latitude <= 90.0:
        raise DecodeValidationError("latitude", latitude)
    if ts >= SECONDS_PER_DAY:
        raise DecodeValidationError("timestamp", ts)
    return PositionReport(
        aircraft_id=ident,
        latitude=latitude,
        longitude=_signed(lon, 24) / LON_SCALE,
        altitude=alt * ALTITUDE_STEP_FT,
        timestamp=ts,
    )


def payload_bits(variant) -> int:
    return MacVariant.parse(variant).default_payload_bits


def compose_payload(pos: PositionReport, wx: WeatherReport | None, variant) -> str:
    """Slot payload: the position report, plus the weather block under the proposed MAC."""
    variant = MacVariant.parse(variant)
    head = encode_position(pos)
    if variant is MacVariant.LEGACY:
        if wx is not None:
            raise CapacityError("the legacy slot has no room for a weather block")
        return head
    block = encode_weather(wx) if wx is not None else bytes(WEATHER_OCTETS)
    return head + format(int.from_bytes(block, "big"), f"0{WEATHER_BITS}b")


def split_payload(bits: str) -> tuple[PositionReport, WeatherReport | None]:
    """Inverse of :func:`compose_payload`; an all-zero weather block reads as ``None``."""
    if len(bits) == POSITION_BITS:
        return decode_position(bits), None
    if len(bits) != POSITION_BITS + WEATHER_BITS:
        raise LengthError(f"payload must be {POSITION_BITS} or {POSITION_BITS + WEATHER_BITS} bits")
    tail = int(bits[POSITION_BITS:], 2)
    wx = decode_weather(tail.to_bytes(WEATHER_OCTETS, "big")) if tail else None
    return decode_position(bits[:POSITION_BITS]), wx
