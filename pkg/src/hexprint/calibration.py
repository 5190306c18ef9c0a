"""Hover calibration of the roll/pitch bias terms.

Repeats short hover trials well above the surface: command a fixed
roll/pitch, let the vehicle settle, measure the horizontal drift
velocity, and correct the commanded angles against the drift.  The
commands that leave the vehicle drift-free are the biases that cancel
the attitude-estimation offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .world import HexState, WorldParams, initial_state, step_world

HOVER_ALTITUDE = 3.0  # m above the surface, outside the ground-effect band


@dataclass
class CalibrationResult:
    beta_phi: float              # deg, roll bias
    beta_theta: float            # deg, pitch bias
    iterations: int
    converged: bool
    drift_history: list[float] = field(default_factory=list)  # m/s per accepted iterate


def hover_drift(
    params: WorldParams,
    command: tuple[float, float],
    settle_s: float,
) -> tuple[float, float]:
    """Drift velocity (vx, vy) after holding a fixed attitude command from rest."""
    state = initial_state(
        params, (0.0, 0.0, params.surface_height + HOVER_ALTITUDE)
    )
    steps = max(1, round(settle_s / params.physics_dt))
    for _ in range(steps):
        state = step_world(state, params.hover_percent, command, params)
    return state.velocity[0], state.velocity[1]


def calibrate_bias(
    params: WorldParams,
    initial_command: tuple[float, float] = (0.0, 0.0),
    drift_tolerance: float = 0.01,
    max_iterations: int = 20,
    settle_s: float = 3.0,
) -> CalibrationResult:
    """Find the (beta_phi, beta_theta) commands that stop hover drift.

    Each iteration runs a fresh hover trial and applies a proportional
    correction derived from constant-acceleration kinematics: a residual
    command error of delta degrees produces a drift of roughly
    g * sin(delta) * (settle - tau) after the attitude lag tau.
    Non-convergence within max_iterations is reported, not raised.
    """
    if drift_tolerance <= 0:
        raise ValueError("drift_tolerance must be positive")
    if settle_s <= 2 * params.attitude_time_constant:
        raise ValueError("settle window too short for the attitude lag")

    cmd_roll, cmd_pitch = initial_command
    effective = settle_s - params.attitude_time_constant
    g = params.gravity
    history: list[float] = []

    for iteration in range(1, max_iterations + 1):
        vx, vy = hover_drift(params, (cmd_roll, cmd_pitch), settle_s)
        speed = math.hypot(vx, vy)
        history.append(speed)
        if speed < drift_tolerance:
            return CalibrationResult(
                beta_phi=cmd_roll,
                beta_theta=cmd_pitch,
                iterations=iteration,
                converged=True,
                drift_history=history,
            )
        # vx responds to pitch, vy to roll with opposite sign.
        ratio_x = max(-1.0, min(1.0, vx / (g * effective)))
        ratio_y = max(-1.0, min(1.0, vy / (g * effective)))
        cmd_pitch -= math.degrees(math.asin(ratio_x))
        cmd_roll += math.degrees(math.asin(ratio_y))

    return CalibrationResult(
        beta_phi=cmd_roll,
        beta_theta=cmd_pitch,
        iterations=max_iterations,
        converged=False,
        drift_history=history,
    )
