import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from airtdma.exceptions import InvalidArgumentError, LayoutInfeasibleError
from airtdma.timing import (
    FrameLayout,
    MacVariant,
    guard_overhead_fraction,
    guard_time,
    make_slot_layout,
    reference_slot_layout,
)


@pytest.mark.parametrize("range_km, expected_ms", [
    (0, 0.0),
    (678, 2.26),   # 678000 m / 3e8 m/s
    (690, 2.30),
])
def test_guard_time(range_km, expected_ms):
    assert guard_time(range_km, 3e8) == pytest.approx(expected_ms, abs=1e-12)


@pytest.mark.parametrize("args", [(-1, 3e8), (math.inf, 3e8), (math.nan, 3e8), (10, 0), (10, -3e8)])
def test_guard_time_rejects_bad_input(args):
    with pytest.raises(InvalidArgumentError):
        guard_time(*args)


@given(st.floats(min_value=0, max_value=1e6, allow_nan=False))
def test_guard_time_linear_in_range(d):
    assert guard_time(2 * d) == 2 * guard_time(d)


def test_proposed_layout_reference_values():
    layout = make_slot_layout(MacVariant.PROPOSED, 7.8125, 2.3, payload_override=172)
    assert layout.data == pytest.approx(5.5125, abs=1e-9)
    assert layout.payload_bits == 172
    assert layout.ack == 0
    assert layout.guard_ns + layout.data_ns == layout.slot_ns


def test_legacy_layout_reference_values():
    layout = make_slot_layout(MacVariant.LEGACY, 7.8125, 2.3, payload_override=100)
    assert layout.payload_bits == 100
    assert layout.ack > 0
    assert 2 * layout.guard_ns + layout.data_ns + layout.ack_ns == layout.slot_ns


def test_infeasible_layout():
    with pytest.raises(LayoutInfeasibleError):
        make_slot_layout(MacVariant.PROPOSED, 7.8125, 7.9, data_rate=31500)
    with pytest.raises(LayoutInfeasibleError):
        make_slot_layout(MacVariant.LEGACY, 7.8125, 3.95, data_rate=31500)


def test_derived_payload_bits_at_31250():
    # 5.5125 ms * 31250 b/s = 172.27; 3.2 ms * 31250 b/s = 100
    assert make_slot_layout("proposed", data_rate=31_250).payload_bits == 172
    assert make_slot_layout("legacy", data_rate=31_250).payload_bits == 100


def test_payload_requires_rate_or_override():
    with pytest.raises(InvalidArgumentError):
        make_slot_layout("proposed")


@given(
    slot=st.floats(min_value=5.0, max_value=20.0),
    guard=st.floats(min_value=0.0, max_value=2.4),
    rate=st.integers(min_value=1_000, max_value=100_000),
)
def test_proposed_never_carries_fewer_bits(slot, guard, rate):
    legacy = make_slot_layout("legacy", slot, guard, data_rate=rate)
    proposed = make_slot_layout("proposed", slot, guard, data_rate=rate)
    assert proposed.payload_bits >= legacy.payload_bits


def test_guard_overhead_fraction():
    legacy = reference_slot_layout("legacy")
    proposed = reference_slot_layout("proposed")
    assert guard_overhead_fraction(legacy) == pytest.approx(2 * 2.3 / 7.8125)
    assert guard_overhead_fraction(legacy) == pytest.approx(0.5888, abs=1e-12)
    assert guard_overhead_fraction(proposed) == pytest.approx(0.2944, abs=1e-12)
    for variant in MacVariant:
        zero = make_slot_layout(variant, 7.8125, 0.0, payload_override=1)
        assert guard_overhead_fraction(zero, variant) == 0


def test_frame_is_exactly_two_seconds():
    frame = FrameLayout()
    assert frame.slots_per_frame == 256
    assert frame.frame_ns == 2_000_000_000
    assert frame.frame_duration == 2.0
    assert len(frame.reserved_slots) == 240


@pytest.mark.parametrize("ra", [0, 256, 300])
def test_frame_random_access_bounds(ra):
    with pytest.raises(InvalidArgumentError):
        FrameLayout(random_access_slots=ra)
