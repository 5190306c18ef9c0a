"""Horizontal position controller for the sliding print phase.

A PID on each horizontal axis turns position error into small roll and
pitch commands, with three modifications over a textbook PID:

- commands are clamped to a band of +/- alpha_lim around a per-axis bias,
- the bias terms compensate a constant attitude-estimation offset,
- the position reference is a setpoint ramped toward the current corner
  at the sliding speed, so the controller is never asked for a jump.

The roll axis uses the same law as pitch with the sign of the computed
angle flipped (a positive north error needs a negative roll).  Yaw is
commanded to zero at all times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class ControllerConfig:
    """Gains, limits and cadence of the position controller.

    Gains are artifact-tuned against the bundled square scenario, not
    measured values.  Units: kp deg/m, ki deg/(m s), kd deg s/m.
    """

    kp: float = 260.0
    ki: float = 180.0
    kd: float = 110.0
    alpha_lim: float = 5.0        # deg, attitude clamp half-width
    beta_theta: float = 0.0       # deg, pitch bias
    beta_phi: float = 0.0         # deg, roll bias
    control_dt: float = 0.02      # s
    sliding_speed: float = 0.02   # m/s

    def validate(self) -> None:
        if self.alpha_lim <= 0:
            raise ValueError("alpha_lim must be positive")
        if self.control_dt <= 0:
            raise ValueError("control_dt must be positive")
        if self.sliding_speed <= 0:
            raise ValueError("sliding_speed must be positive")
        for g in (self.kp, self.ki, self.kd):
            if not math.isfinite(g):
                raise ValueError("gains must be finite")


@dataclass
class AxisState:
    """Integral and derivative memory for one horizontal axis."""

    integral: float = 0.0        # m s
    previous_error: float = 0.0  # m
    primed: bool = False         # first step seeds previous_error = error


@dataclass
class ControllerState:
    """Mutable controller memory: PID state, ramp position, corner queue."""

    axis_x: AxisState = field(default_factory=AxisState)
    axis_y: AxisState = field(default_factory=AxisState)
    current_setpoint: tuple[float, float] = (0.0, 0.0)
    destination: tuple[float, float] = (0.0, 0.0)
    corner_queue: list[tuple[float, float]] = field(default_factory=list)
    mission_complete: bool = False


def pid_step(error: float, axis: AxisState, config: ControllerConfig, bias: float) -> float:
    """One PID update for one axis; returns the unclamped angle in degrees.

    The integral accumulates the current error (i += dt * e) and the
    derivative differences against the stored previous error; on the
    first step the previous error is seeded with the current one so the
    derivative term starts at zero.  Updates axis in place.
    """
    if not math.isfinite(error):
        raise ValueError("error must be finite")
    dt = config.control_dt
    if dt <= 0:
        raise ValueError("control_dt must be positive")
    if not axis.primed:
        axis.previous_error = error
        axis.primed = True
    axis.integral += dt * error
    derivative = (error - axis.previous_error) / dt
    axis.previous_error = error
    return config.kp * error + config.ki * axis.integral + config.kd * derivative + bias


def clamp_attitude(unclamped: float, config: ControllerConfig, bias: float) -> float:
    """Clamp an angle command to the band bias +/- alpha_lim."""
    return min(bias + config.alpha_lim, max(bias - config.alpha_lim, unclamped))


def compute_attitude_command(
    measured: tuple[float, float],
    config: ControllerConfig,
    state: ControllerState,
) -> tuple[float, float]:
    """Roll and pitch commands (degrees) for the current measured position.

    Pitch follows the east-axis error; roll follows the north-axis error
    with the computed angle negated.  While an axis command sits on its
    clamp the integral contribution of that step is rolled back
    (conditional anti-windup), so the integral cannot wind up against
    the attitude limit.
    """
    ex = state.current_setpoint[0] - measured[0]
    ey = state.current_setpoint[1] - measured[1]

    pitch = _clamped_axis(ex, state.axis_x, config, config.beta_theta, flip=False)
    roll = _clamped_axis(ey, state.axis_y, config, config.beta_phi, flip=True)
    return roll, pitch


def _clamped_axis(
    error: float,
    axis: AxisState,
    config: ControllerConfig,
    bias: float,
    flip: bool,
) -> float:
    integral_before = axis.integral
    raw = pid_step(error, axis, config, bias=0.0)
    unclamped = -raw + bias if flip else raw + bias
    command = clamp_attitude(unclamped, config, bias)
    if command != unclamped:
        axis.integral = integral_before  # freeze integral while clamped
    return command


def ramp_setpoint(state: ControllerState, config: ControllerConfig) -> tuple[float, float]:
    """Advance the setpoint toward the destination by one sliding step.

    Moves exactly sliding_speed * control_dt along the straight segment
    and lands on the destination without overshoot.
    """
    sx, sy = state.current_setpoint
    dx = state.destination[0] - sx
    dy = state.destination[1] - sy
    dist = math.hypot(dx, dy)
    step = config.sliding_speed * config.control_dt
    if dist <= step:
        state.current_setpoint = state.destination
    else:
        state.current_setpoint = (sx + dx / dist * step, sy + dy / dist * step)
    return state.current_setpoint


def advance_corner(
    state: ControllerState,
    measured: tuple[float, float],
    tolerance: float,
) -> bool:
    """Pop the next corner once the setpoint and the vehicle have arrived.

    Requires the ramped setpoint to sit on the destination and the
    measured position to be within tolerance of it.  An empty queue at
    arrival marks the mission complete.  Returns whether a new corner
    was loaded.

    Loading a corner resets both integrals: the along-track integral of
    the finished edge (wound up against sliding friction) would
    otherwise push the vehicle off the new edge until it unwinds.
    """
    if state.current_setpoint != state.destination:
        return False
    dx = measured[0] - state.destination[0]
    dy = measured[1] - state.destination[1]
    if math.hypot(dx, dy) > tolerance:
        return False
    if not state.corner_queue:
        state.mission_complete = True
        return False
    state.destination = state.corner_queue.pop(0)
    state.axis_x.integral = 0.0
    state.axis_y.integral = 0.0
    return True
