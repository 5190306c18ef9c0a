"""Battery model: remaining-voltage scale, thrust curves, discharge."""

import math

import pytest
from hypothesis import given, strategies as st

from hexprint.power import (
    BatteryExhaustedError,
    BatteryState,
    DischargeCurve,
    ThrustCurve,
    discharge_step,
    thrust_command,
    v_remaining,
    voltage_gain,
)

# Frozen values of the stock cubic -60*(v/100 - 0.62)^3 + 47, worked out
# by hand in exact decimal arithmetic.
CURVE_POINTS = [
    (40.0, 47.63888),
    (62.0, 47.0),
    (100.0, 43.70768),
]


@pytest.mark.parametrize("v, expected", CURVE_POINTS)
def test_stock_thrust_curve_values(v, expected):
    assert thrust_command(v) == pytest.approx(expected, abs=1e-12)


def test_thrust_curve_is_decreasing_over_operating_range():
    curve = ThrustCurve()
    values = [curve(v) for v in range(35, 101)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_thrust_command_warns_outside_operating_range(caplog):
    with caplog.at_level("WARNING", logger="hexprint.power"):
        thrust_command(20.0)
    assert any("extrapolating" in r.message for r in caplog.records)
    caplog.clear()
    with caplog.at_level("WARNING", logger="hexprint.power"):
        thrust_command(62.0)
    assert not caplog.records


def test_v_remaining_endpoints_and_midpoint():
    battery = BatteryState(v_max=16.8, v_min=13.2, v_measured=16.8)
    assert v_remaining(battery) == pytest.approx(100.0)
    battery.v_measured = 13.2
    assert v_remaining(battery) == pytest.approx(0.0)
    battery.v_measured = 15.0
    assert v_remaining(battery) == pytest.approx(50.0)


@given(
    v_min=st.floats(5.0, 20.0),
    span=st.floats(0.5, 10.0),
    fraction=st.floats(0.0, 1.0),
)
def test_v_remaining_matches_affine_form(v_min, span, fraction):
    v_max = v_min + span
    measured = v_min + fraction * span
    battery = BatteryState(v_max=v_max, v_min=v_min, v_measured=measured)
    expected = 100.0 * (measured - v_min) / (v_max - v_min)
    assert v_remaining(battery) == expected
    assert -1e-9 <= v_remaining(battery) <= 100.0 + 1e-9


def test_v_remaining_rejects_degenerate_pack():
    with pytest.raises(ValueError):
        v_remaining(BatteryState(v_max=12.0, v_min=12.0, v_measured=12.0))


def test_discharge_curve_hits_endpoints_and_knots():
    battery = BatteryState(capacity=1000.0)
    curve = DischargeCurve()
    span = battery.v_max - battery.v_min
    assert curve.voltage(battery, 0.0) == pytest.approx(battery.v_max)
    assert curve.voltage(battery, 1000.0) == pytest.approx(battery.v_min)
    assert curve.voltage(battery, 100.0) == pytest.approx(battery.v_min + 0.80 * span)
    assert curve.voltage(battery, 600.0) == pytest.approx(battery.v_min + 0.55 * span)


def test_discharge_curve_is_monotone():
    battery = BatteryState(capacity=1000.0)
    curve = DischargeCurve()
    voltages = [curve.voltage(battery, c) for c in range(0, 1001, 5)]
    assert all(a >= b for a, b in zip(voltages, voltages[1:]))


def test_discharge_curve_rejects_bad_knots():
    battery = BatteryState()
    with pytest.raises(ValueError):
        DischargeCurve(knot_consumed_fractions=(0.6, 0.1)).voltage(battery, 0.0)
    with pytest.raises(ValueError):
        DischargeCurve(knot_voltage_fractions=(0.55, 0.80)).voltage(battery, 0.0)


def test_discharge_step_books_charge_and_updates_voltage():
    battery = BatteryState(capacity=1000.0)
    curve = DischargeCurve()
    after = discharge_step(battery, thrust_percent=50.0, dt=0.02, curve=curve,
                           current_per_percent=0.4)
    # 0.4 A/% * 50% * 0.02 s = 0.4 C
    assert after.consumed == pytest.approx(0.4)
    assert after.v_measured == pytest.approx(curve.voltage(battery, 0.4))
    assert after.v_measured < battery.v_max


def test_discharge_step_raises_when_exhausted():
    battery = BatteryState(capacity=10.0, consumed=9.9)
    with pytest.raises(BatteryExhaustedError):
        discharge_step(battery, thrust_percent=50.0, dt=1.0)


def test_discharge_step_validates_arguments():
    battery = BatteryState()
    with pytest.raises(ValueError):
        discharge_step(battery, thrust_percent=50.0, dt=0.0)
    with pytest.raises(ValueError):
        discharge_step(battery, thrust_percent=-1.0, dt=0.02)


def test_voltage_gain_is_one_at_full_charge():
    assert voltage_gain(100.0) == 1.0


def test_voltage_gain_droops_with_voltage():
    # sag(100)/sag(40) with the stock cubic, frozen by hand
    assert voltage_gain(40.0) == pytest.approx(43.70768 / 47.63888, abs=1e-12)
    gains = [voltage_gain(v) for v in range(35, 101)]
    assert all(a < b for a, b in zip(gains, gains[1:]))


def test_flat_sag_curve_means_no_droop():
    flat = ThrustCurve(a=0.0, b=47.0)
    assert all(voltage_gain(v, flat) == 1.0 for v in (35.0, 50.0, 80.0, 100.0))


def test_voltage_gain_rejects_nonpositive_curve():
    with pytest.raises(ValueError):
        voltage_gain(40.0, ThrustCurve(a=0.0, b=-1.0))


def test_exhaustion_message_reports_coulombs():
    battery = BatteryState(capacity=10.0, consumed=9.9)
    with pytest.raises(BatteryExhaustedError, match="10.0 C"):
        discharge_step(battery, thrust_percent=100.0, dt=1.0)


def test_discharge_step_does_not_mutate_input():
    battery = BatteryState(capacity=1000.0)
    discharge_step(battery, thrust_percent=50.0, dt=0.02)
    assert battery.consumed == 0.0
    assert battery.v_measured == battery.v_max


def test_full_discharge_reaches_forty_percent():
    """Integrate a constant draw until v_remaining crosses 40%."""
    battery = BatteryState(capacity=1000.0)
    curve = DischargeCurve()
    t = 0.0
    while v_remaining(battery) > 40.0:
        battery = discharge_step(battery, thrust_percent=47.0, dt=0.5, curve=curve)
        t += 0.5
        assert t < 120.0, "discharge never reached 40% remaining"
    # 40% remaining should take well over half the capacity
    assert battery.consumed > 0.5 * battery.capacity
    assert math.isclose(v_remaining(battery),
                        100.0 * (battery.v_measured - battery.v_min)
                        / (battery.v_max - battery.v_min))
