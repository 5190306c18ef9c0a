"""Rigid-body world model for a hexacopter sliding on a build surface.

Fixed-timestep point-mass dynamics (semi-implicit Euler) with:
- an inner attitude loop abstracted as a first-order lag toward the
  commanded roll/pitch (yaw is fixed at zero),
- a constant roll/pitch offset between true and estimated attitude,
- Coulomb stiction + kinetic friction against the build surface,
- an exponentially correlated (Ornstein-Uhlenbeck) lateral disturbance
  representing turbulent air near the surface.

Conventions: east-north-up world frame, angles in degrees.  Positive
pitch tilts thrust toward +x (east); positive roll tilts thrust toward
-y (south), so a negative roll command moves the vehicle north.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass
class WorldParams:
    """Physical and numerical parameters of the simulated world.

    Friction, mass, attitude lag and disturbance magnitudes are
    placeholders exposed for tuning; none are measured values.
    """

    mass: float = 2.5                        # kg
    gravity: float = 9.81                    # m/s^2
    surface_height: float = 0.0              # m, build surface z
    mu_static: float = 0.45                  # nozzle-guard stiction coefficient
    mu_kinetic: float = 0.35                 # nozzle-guard sliding coefficient
    attitude_time_constant: float = 0.15     # s, inner-loop first-order lag
    estimation_offset_roll: float = 0.0      # deg, estimated minus true roll
    estimation_offset_pitch: float = 0.0     # deg, estimated minus true pitch
    ground_effect_amplitude: float = 0.15    # N, stationary std of lateral disturbance
    ground_effect_correlation_time: float = 0.5   # s
    ground_effect_height: float = 0.3        # m, band above surface where the disturbance acts
    com_offset: tuple[float, float] = (0.0, 0.0)  # m, residual horizontal CoM offset;
                                                  # equivalent lateral force mass*gravity N per m
    hover_percent: float = 50.0              # thrust % that balances weight at full charge
    stiction_speed: float = 1e-3             # m/s, below this speed contact may stick
    penetration_tolerance: float = 1e-9      # m
    physics_dt: float = 1e-3                 # s

    def validate(self) -> None:
        if not (self.mu_static >= self.mu_kinetic >= 0.0):
            raise ValueError("require mu_static >= mu_kinetic >= 0")
        if self.mass <= 0 or self.gravity <= 0:
            raise ValueError("mass and gravity must be positive")
        if self.physics_dt <= 0:
            raise ValueError("physics_dt must be positive")
        if not (0 < self.hover_percent <= 100):
            raise ValueError("hover_percent must be in (0, 100]")

    def thrust_newtons(self, thrust_percent: float) -> float:
        """Map a thrust command in percent to newtons (hover_percent <-> weight)."""
        return self.mass * self.gravity * thrust_percent / self.hover_percent


@dataclass
class HexState:
    """Full kinematic state of the vehicle at one instant."""

    position: tuple[float, float, float] = (0.0, 0.0, 0.0)   # m, ENU
    velocity: tuple[float, float, float] = (0.0, 0.0, 0.0)   # m/s
    attitude_true: tuple[float, float, float] = (0.0, 0.0, 0.0)       # roll, pitch, yaw deg
    attitude_estimated: tuple[float, float, float] = (0.0, 0.0, 0.0)  # roll, pitch, yaw deg
    in_contact: bool = False
    normal_force: float = 0.0    # N, surface reaction, >= 0
    time: float = 0.0            # s

    def is_finite(self) -> bool:
        vals = (*self.position, *self.velocity, *self.attitude_true, self.normal_force)
        return all(math.isfinite(v) for v in vals)


def initial_state(params: WorldParams, position: tuple[float, float, float]) -> HexState:
    """Vehicle at rest, level, with the estimated attitude reflecting the offset."""
    return HexState(
        position=position,
        attitude_true=(0.0, 0.0, 0.0),
        attitude_estimated=(params.estimation_offset_roll, params.estimation_offset_pitch, 0.0),
    )


def ground_effect(
    rng: np.random.Generator,
    params: WorldParams,
    dt: float,
    previous: tuple[float, float],
) -> tuple[float, float]:
    """Advance the correlated lateral disturbance force by dt.

    Exact Ornstein-Uhlenbeck update: zero mean, stationary standard
    deviation ground_effect_amplitude, correlation time
    ground_effect_correlation_time.  Deterministic for a given rng state.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    sigma = params.ground_effect_amplitude
    if sigma == 0.0:
        return (0.0, 0.0)
    tau = params.ground_effect_correlation_time
    rho = math.exp(-dt / tau) if tau > 0 else 0.0
    kick = sigma * math.sqrt(1.0 - rho * rho)
    return (
        rho * previous[0] + kick * rng.standard_normal(),
        rho * previous[1] + kick * rng.standard_normal(),
    )


def resolve_contact(
    state: HexState,
    net_lateral_force: tuple[float, float],
    params: WorldParams,
    vertical_thrust: float,
    dt: float,
) -> HexState:
    """Resolve surface contact: clamp to the surface and apply Coulomb friction.

    The surface supports the vehicle with normal_force = max(0, weight -
    vertical thrust component).  A slow vehicle under sub-threshold
    lateral force sticks (velocity zeroed); otherwise kinetic friction
    mu_kinetic * N opposes the motion (or the applied force when starting
    from rest).  N = 0 degrades gracefully to frictionless contact.
    """
    x, y, z = state.position
    vx, vy, _ = state.velocity
    weight = params.mass * params.gravity

    if z > params.surface_height + params.penetration_tolerance:
        raise ValueError("resolve_contact called above the surface")

    z = params.surface_height
    normal = max(0.0, weight - vertical_thrust)

    fx, fy = net_lateral_force
    f_mag = math.hypot(fx, fy)
    speed = math.hypot(vx, vy)

    if speed <= params.stiction_speed and f_mag <= params.mu_static * normal:
        vx = vy = 0.0  # stiction holds
    else:
        # Kinetic friction opposes motion, or impending motion when at rest.
        if speed > params.stiction_speed:
            ux, uy = vx / speed, vy / speed
        elif f_mag > 0.0:
            ux, uy = fx / f_mag, fy / f_mag
        else:
            ux = uy = 0.0
        fric = params.mu_kinetic * normal
        ax = (fx - fric * ux) / params.mass
        ay = (fy - fric * uy) / params.mass
        nvx = vx + ax * dt
        nvy = vy + ay * dt
        # Friction must not reverse the slide within one step; if it would,
        # and the applied force cannot sustain sliding, the vehicle sticks.
        if speed > params.stiction_speed and (nvx * vx + nvy * vy) < 0.0 \
                and f_mag <= params.mu_static * normal:
            nvx = nvy = 0.0
        vx, vy = nvx, nvy

    return replace(
        state,
        position=(x, y, z),
        velocity=(vx, vy, 0.0),
        in_contact=True,
        normal_force=normal,
    )


def step_world(
    state: HexState,
    thrust_command: float,
    attitude_command: tuple[float, float],
    params: WorldParams,
    lateral_disturbance: tuple[float, float] = (0.0, 0.0),
) -> HexState:
    """Advance the world by one physics_dt under the given commands.

    thrust_command is in percent of the calibrated scale (see
    WorldParams.thrust_newtons); attitude_command is (roll, pitch) in
    degrees.  The inner loop drives the *estimated* attitude toward the
    command, so the true attitude settles at command minus the
    estimation offset.  The lateral disturbance force (newtons) applies
    only within ground_effect_height of the surface.
    """
    if not (0.0 <= thrust_command <= 100.0):
        raise ValueError(f"thrust_command {thrust_command!r} outside [0, 100]")
    if not all(math.isfinite(c) for c in attitude_command):
        raise ValueError("attitude_command must be finite")
    if not state.is_finite():
        raise ValueError("state is not finite")
    dt = params.physics_dt
    if dt <= 0:
        raise ValueError("physics_dt must be positive")

    # Inner attitude loop: first-order lag of the true attitude toward the
    # command as seen through the estimation offset.
    roll, pitch, _ = state.attitude_true
    target_roll = attitude_command[0] - params.estimation_offset_roll
    target_pitch = attitude_command[1] - params.estimation_offset_pitch
    tau = params.attitude_time_constant
    alpha = 1.0 - math.exp(-dt / tau) if tau > 0 else 1.0
    roll += alpha * (target_roll - roll)
    pitch += alpha * (target_pitch - pitch)

    thrust = params.thrust_newtons(thrust_command)
    cr, sr = math.cos(math.radians(roll)), math.sin(math.radians(roll))
    cp, sp = math.cos(math.radians(pitch)), math.sin(math.radians(pitch))
    thrust_x = thrust * cr * sp
    thrust_y = -thrust * sr * cp
    thrust_z = thrust * cr * cp

    x, y, z = state.position
    vx, vy, vz = state.velocity
    weight = params.mass * params.gravity

    near_surface = (z - params.surface_height) < params.ground_effect_height
    dx, dy = lateral_disturbance if near_surface else (0.0, 0.0)
    com_fx = weight * params.com_offset[0]
    com_fy = weight * params.com_offset[1]
    fx = thrust_x + dx + com_fx
    fy = thrust_y + dy + com_fy
    fz = thrust_z - weight

    vz += (fz / params.mass) * dt
    new_state = replace(
        state,
        velocity=(vx, vy, vz),
        attitude_true=(roll, pitch, 0.0),
        attitude_estimated=(
            roll + params.estimation_offset_roll,
            pitch + params.estimation_offset_pitch,
            0.0,
        ),
        time=state.time + dt,
    )

    if z + vz * dt <= params.surface_height + params.penetration_tolerance:
        new_state = resolve_contact(
            replace(new_state, position=(x, y, min(z, params.surface_height))),
            (fx, fy),
            params,
            vertical_thrust=thrust_z,
            dt=dt,
        )
        if new_state.normal_force == 0.0 and thrust_z > weight:
            # Thrust exceeds weight: the surface no longer supports the
            # vehicle and it lifts off on the next step.
            new_state = replace(new_state, velocity=(*new_state.velocity[:2], vz))
    else:
        vx += (fx / params.mass) * dt
        vy += (fy / params.mass) * dt
        new_state = replace(
            new_state,
            velocity=(vx, vy, vz),
            in_contact=False,
            normal_force=0.0,
        )

    nx, ny, nz = new_state.position
    vvx, vvy, vvz = new_state.velocity
    new_state = replace(
        new_state,
        position=(nx + vvx * dt, ny + vvy * dt, nz + vvz * dt),
    )
    if new_state.in_contact:
        new_state = replace(
            new_state,
            position=(new_state.position[0], new_state.position[1], params.surface_height),
        )
    return new_state
