import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from airtdma.codec import (
    LAT_SCALE,
    LON_SCALE,
    PositionReport,
    SpecialWeather,
    WeatherReport,
    compose_payload,
    decode_position,
    decode_weather,
    encode_position,
    encode_weather,
    split_payload,
    weather_from_hex,
    weather_to_hex,
)
from airtdma.exceptions import CapacityError, DecodeValidationError, EncodeRangeError, LengthError

weather_reports = st.builds(
    WeatherReport,
    time=st.integers(0, 86_399),
    wind_dir=st.integers(0, 359),
    wind_speed=st.integers(0, 127),
    vis_dir=st.integers(0, 359),
    vis_dist=st.integers(0, 127),
    cloud_amount=st.integers(0, 7),
    cloud_height=st.integers(0, 511),
    cloud_type=st.integers(0, 7),
    special=st.integers(0, 255).map(SpecialWeather),
)

position_reports = st.builds(
    PositionReport,
    aircraft_id=st.integers(0, 2 ** 20 - 1),
    latitude=st.floats(-90, 90),
    longitude=st.floats(-180, 180, exclude_max=True),
    altitude=st.integers(0, 327_670),
    timestamp=st.integers(0, 86_399),
)


def test_zero_weather_is_nine_zero_octets():
    assert encode_weather(WeatherReport()) == bytes(9)
    assert decode_weather(bytes(9)) == WeatherReport()


def test_hail_and_icing_set_bits_3_and_4():
    data = encode_weather(WeatherReport(special=SpecialWeather.HAIL | SpecialWeather.ICING))
    assert data[-1] == 0x18
    assert data[:-1] == bytes(8)


def test_special_bit_order_matches_table():
    order = ["heavy_rain", "severe_turbulence", "high_winds_gusts", "hail", "icing",
             "lightning", "severe_downdrafts", "microburst"]
    for bit, name in enumerate(order):
        assert SpecialWeather.from_names(name) == 1 << bit


def test_field_order_msb_first():
    # time occupies the top 17 bits: time=1 -> bit 55 of the 72-bit word
    assert int.from_bytes(encode_weather(WeatherReport(time=1)), "big") == 1 << 55
    assert int.from_bytes(encode_weather(WeatherReport(cloud_type=1)), "big") == 1 << 8


def test_weather_roundtrip_seeded_10k():
    rng = random.Random(2011)
    for _ in range(10_000):
        r = WeatherReport(rng.randrange(86_400), rng.randrange(360), rng.randrange(128),
                          rng.randrange(360), rng.randrange(128), rng.randrange(8),
                          rng.randrange(512), rng.randrange(8), SpecialWeather(rng.randrange(256)))
        data = encode_weather(r)
        assert len(data) == 9
        assert decode_weather(data) == r


@given(weather_reports)
def test_weather_roundtrip_property(r):
    assert decode_weather(encode_weather(r)) == r


@pytest.mark.parametrize("octet", range(256))
def test_every_special_octet_roundtrips(octet):
    r = WeatherReport(special=SpecialWeather(octet))
    data = encode_weather(r)
    assert data[-1] == octet
    assert decode_weather(data) == r


def test_saturating_fields():
    r = decode_weather(encode_weather(WeatherReport(wind_speed=300, vis_dist=999)))
    assert (r.wind_speed, r.vis_dist) == (127, 127)


@pytest.mark.parametrize("field, value", [
    ("time", 86_400), ("wind_dir", 360), ("vis_dir", 400), ("cloud_amount", 8),
    ("cloud_height", 512), ("cloud_type", -1), ("wind_speed", -3),
])
def test_encode_range_error_names_field(field, value):
    with pytest.raises(EncodeRangeError) as info:
        encode_weather(WeatherReport(**{field: value}))
    assert info.value.field == field


def test_decode_rejects_wrong_length():
    for n in (0, 8, 10):
        with pytest.raises(LengthError):
            decode_weather(bytes(n))


def test_decode_rejects_time_past_midnight():
    data = (90_000 << 55).to_bytes(9, "big")
    with pytest.raises(DecodeValidationError) as info:
        decode_weather(data)
    assert info.value.field == "time"


def test_decode_rejects_bad_direction():
    data = (400 << 46).to_bytes(9, "big")
    with pytest.raises(DecodeValidationError):
        decode_weather(data)


def test_hex_interface():
    assert weather_to_hex(WeatherReport()) == "000000000000000000"
    r = WeatherReport(time=43_200, wind_dir=270, wind_speed=35, special=SpecialWeather.MICROBURST)
    text = weather_to_hex(r)
    assert len(text) == 18 and text == text.lower()
    assert weather_from_hex(text) == r
    with pytest.raises(LengthError):
        weather_from_hex("00")
    with pytest.raises(LengthError):
        weather_from_hex("zz0000000000000000")


def test_zero_position_is_100_zero_bits():
    assert encode_position(PositionReport()) == "0" * 100


@given(position_reports)
def test_position_roundtrip_at_resolution(p):
    bits = encode_position(p)
    assert len(bits) == 100
    q = decode_position(bits)
    assert q.aircraft_id == p.aircraft_id
    assert q.timestamp == p.timestamp
    assert abs(q.altitude - p.altitude) <= 5
    assert abs(q.latitude - p.latitude) <= 1 / LAT_SCALE  # +90 saturates one LSB low
    lon_err = (q.longitude - p.longitude + 180) % 360 - 180
    assert abs(lon_err) <= 0.5 / LON_SCALE + 1e-12
    # quantized values are a fixed point of the codec
    assert encode_position(q) == bits
    assert decode_position(encode_position(q)) == q


def test_latitude_plus_90_does_not_overflow():
    q = decode_position(encode_position(PositionReport(latitude=90.0)))
    assert 89.9999 < q.latitude < 90.0
    q = decode_position(encode_position(PositionReport(latitude=-90.0)))
    assert q.latitude == -90.0


@pytest.mark.parametrize("kwargs", [
    {"latitude": 90.5}, {"longitude": 180.0}, {"aircraft_id": 2 ** 20}, {"altitude": -10},
    {"altitude": 400_000}, {"timestamp": 86_400},
])
def test_position_range_errors(kwargs):
    with pytest.raises(EncodeRangeError):
        encode_position(PositionReport(**kwargs))


def test_decode_position_length():
    with pytest.raises(LengthError):
        decode_position("0" * 99)


def test_compose_payload_sizes():
    pos = PositionReport(aircraft_id=7, latitude=37.5, longitude=127.0, altitude=35_000,
                         timestamp=3600)
    wx = WeatherReport(time=3600, wind_dir=180, wind_speed=20)
    proposed = compose_payload(pos, wx, "proposed")
    legacy = compose_payload(pos, None, "legacy")
    assert len(proposed) == 172
    assert len(legacy) == 100
    assert len(proposed) / len(legacy) == 1.72
    assert proposed[:100] == legacy
    assert split_payload(proposed) == (pos.quantized(), wx)
    assert compose_payload(pos, None, "proposed")[100:] == "0" * 72


def test_compose_payload_legacy_has_no_room_for_weather():
    with pytest.raises(CapacityError):
        compose_payload(PositionReport(), WeatherReport(), "legacy")
