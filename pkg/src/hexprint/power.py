"""Battery discharge and voltage-compensated thrust commands.

A constant thrust command produces sagging motor output as the battery
voltage drops, which raises the normal force on the nozzle guard and
with it the sliding friction.  The compensation law raises the
commanded thrust percent as the remaining voltage falls, following a
cubic of the remaining-voltage percentage, so the achieved thrust (and
the friction) stays roughly constant over a discharge.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from scipy.interpolate import PchipInterpolator

log = logging.getLogger(__name__)

OPERATING_RANGE = (35.0, 100.0)  # % remaining voltage the compensation curve covers


class BatteryExhaustedError(RuntimeError):
    """Raised when the battery is drained past its capacity or minimum voltage."""


@dataclass(frozen=True)
class ThrustCurve:
    """Cubic thrust-vs-remaining-voltage law: a*(v/100 - center)^3 + b.

    The defaults trace the stock compensation curve (43.5-49% commanded
    thrust over the 35-100% voltage range, centered at 62%/47%); other
    vehicles can retune all three coefficients.
    """

    a: float = -60.0
    b: float = 47.0
    center: float = 0.62

    def __call__(self, v_remaining: float) -> float:
        return self.a * (v_remaining / 100.0 - self.center) ** 3 + self.b


@dataclass
class BatteryState:
    """Pack voltage bounds and charge bookkeeping.

    Defaults are a 4S pack placeholder (16.8 V full, 13.2 V minimum
    safe); capacity and draw scale are config knobs, not measurements.
    """

    v_max: float = 16.8          # V, fully charged
    v_min: float = 13.2          # V, minimum safe
    v_measured: float = 16.8     # V
    capacity: float = 18000.0    # C
    consumed: float = 0.0        # C

    def validate(self) -> None:
        if not self.v_max > self.v_min:
            raise ValueError("v_max must exceed v_min")
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if not (0.0 <= self.consumed <= self.capacity):
            raise ValueError("consumed must lie in [0, capacity]")


@dataclass
class DischargeCurve:
    """Monotone voltage-vs-consumed-charge curve with the usual LiPo shape.

    Steep near full charge, flat through the middle, steep again toward
    empty.  Interior knots are given as (fraction of capacity consumed,
    fraction of the v_min..v_max span remaining) and joined by a
    monotone piecewise-cubic spline.
    """

    knot_consumed_fractions: tuple[float, ...] = (0.1, 0.6)
    knot_voltage_fractions: tuple[float, ...] = (0.80, 0.55)
    _splines: dict = field(default_factory=dict, repr=False, compare=False)

    def _spline(self, battery: BatteryState) -> PchipInterpolator:
        key = (battery.v_max, battery.v_min, battery.capacity)
        spline = self._splines.get(key)
        if spline is None:
            span = battery.v_max - battery.v_min
            xs = [0.0, *(f * battery.capacity for f in self.knot_consumed_fractions),
                  battery.capacity]
            ys = [battery.v_max,
                  *(battery.v_min + f * span for f in self.knot_voltage_fractions),
                  battery.v_min]
            if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])):
                raise ValueError("knot consumed fractions must be strictly increasing in (0, 1)")
            if any(y2 >= y1 for y1, y2 in zip(ys, ys[1:])):
                raise ValueError("knot voltages must decrease strictly from v_max to v_min")
            spline = PchipInterpolator(xs, ys)
            self._splines[key] = spline
        return spline

    def voltage(self, battery: BatteryState, consumed: float) -> float:
        return float(self._spline(battery)(consumed))


def v_remaining(battery: BatteryState) -> float:
    """Remaining voltage percentage: 100 * (measured - min) / (max - min)."""
    if battery.v_max == battery.v_min:
        raise ValueError("invalid battery: v_max equals v_min")
    return 100.0 * (battery.v_measured - battery.v_min) / (battery.v_max - battery.v_min)


def thrust_command(v_rem: float, curve: ThrustCurve = ThrustCurve()) -> float:
    """Commanded thrust percent for the given remaining voltage percent.

    Values outside the curve's operating range are extrapolated with a
    warning; the cubic itself is monotone non-increasing for a < 0.
    """
    if not OPERATING_RANGE[0] <= v_rem <= OPERATING_RANGE[1]:
        log.warning(
            "remaining voltage %.1f%% outside the compensation range %s; extrapolating",
            v_rem, OPERATING_RANGE,
        )
    return curve(v_rem)


def voltage_gain(v_rem: float, sag_curve: ThrustCurve = ThrustCurve()) -> float:
    """Thrust effectiveness of a commanded percent at the given voltage level.

    Normalized to 1 at full charge and decreasing as the voltage falls,
    this is the motor-side droop that the compensation law was tuned
    against: commanding sag_curve(v) at effectiveness gain(v) yields the
    same achieved thrust at every voltage.  A flat sag curve (a = 0)
    means no droop and the gain is identically 1.
    """
    full = sag_curve(100.0)
    now = sag_curve(v_rem)
    if full <= 0 or now <= 0:
        raise ValueError("sag curve must stay positive over the discharge range")
    return full / now


def discharge_step(
    battery: BatteryState,
    thrust_percent: float,
    dt: float,
    curve: DischargeCurve = DischargeCurve(),
    current_per_percent: float = 0.4,
) -> BatteryState:
    """Drain charge proportional to the thrust demand and update the voltage.

    Raises BatteryExhaustedError once the capacity is spent (the voltage
    has reached v_min).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if thrust_percent < 0:
        raise ValueError("thrust_percent must be non-negative")
    consumed = battery.consumed + current_per_percent * thrust_percent * dt
    if consumed >= battery.capacity:
        raise BatteryExhaustedError(
            f"battery exhausted after {consumed:.1f} C of {battery.capacity:.1f} C"
        )
    voltage = curve.voltage(battery, consumed)
    return replace(battery, consumed=consumed, v_measured=voltage)
