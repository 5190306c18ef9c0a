"""World dynamics: thrust scale, contact friction, disturbance, stepping."""

import math

import numpy as np
import pytest

from hexprint.world import (
    HexState,
    WorldParams,
    ground_effect,
    initial_state,
    resolve_contact,
    step_world,
)


def contact_state(params, velocity=(0.0, 0.0, 0.0), x=0.0, y=0.0):
    return HexState(
        position=(x, y, params.surface_height),
        velocity=velocity,
        in_contact=True,
    )


def test_thrust_scale_balances_weight_at_hover_percent():
    params = WorldParams()
    assert params.thrust_newtons(params.hover_percent) == pytest.approx(
        params.mass * params.gravity, rel=1e-15)
    assert params.thrust_newtons(100.0) == pytest.approx(2 * params.mass * params.gravity)
    assert params.thrust_newtons(0.0) == 0.0


def test_params_validation():
    with pytest.raises(ValueError):
        WorldParams(mu_static=0.2, mu_kinetic=0.3).validate()
    with pytest.raises(ValueError):
        WorldParams(mass=0.0).validate()
    with pytest.raises(ValueError):
        WorldParams(hover_percent=0.0).validate()
    WorldParams().validate()


def test_initial_state_reflects_estimation_offset():
    params = WorldParams(estimation_offset_roll=1.5, estimation_offset_pitch=-0.5)
    state = initial_state(params, (0.0, 0.0, 1.0))
    assert state.attitude_true == (0.0, 0.0, 0.0)
    assert state.attitude_estimated == (1.5, -0.5, 0.0)
    assert not state.in_contact


# --- correlated disturbance ---------------------------------------------


def test_ground_effect_matches_exact_update():
    params = WorldParams(ground_effect_amplitude=0.2, ground_effect_correlation_time=0.5)
    dt = 0.02
    rng = np.random.default_rng(5)
    got = ground_effect(rng, params, dt, (0.1, -0.05))

    check = np.random.default_rng(5)
    rho = math.exp(-dt / 0.5)
    kick = 0.2 * math.sqrt(1.0 - rho * rho)
    expected = (
        rho * 0.1 + kick * check.standard_normal(),
        rho * -0.05 + kick * check.standard_normal(),
    )
    assert got == expected


def test_ground_effect_zero_amplitude_draws_nothing():
    params = WorldParams(ground_effect_amplitude=0.0)
    rng = np.random.default_rng(9)
    assert ground_effect(rng, params, 0.02, (1.0, 1.0)) == (0.0, 0.0)
    # the generator must be untouched so later draws are unaffected
    assert rng.standard_normal() == np.random.default_rng(9).standard_normal()


def test_ground_effect_stationary_spread():
    params = WorldParams(ground_effect_amplitude=0.15, ground_effect_correlation_time=0.5)
    rng = np.random.default_rng(0)
    value, xs = (0.0, 0.0), []
    for _ in range(20000):
        value = ground_effect(rng, params, 0.02, value)
        xs.append(value[0])
    std = float(np.std(xs[2000:]))
    assert std == pytest.approx(0.15, rel=0.10)


def test_ground_effect_rejects_bad_dt():
    with pytest.raises(ValueError):
        ground_effect(np.random.default_rng(0), WorldParams(), 0.0, (0.0, 0.0))


# --- contact and friction -----------------------------------------------


def test_stiction_holds_below_breakaway():
    params = WorldParams()
    normal = params.mass * params.gravity        # no vertical thrust
    force = 0.9 * params.mu_static * normal
    state = resolve_contact(contact_state(params), (force, 0.0), params,
                            vertical_thrust=0.0, dt=1e-3)
    assert state.velocity == (0.0, 0.0, 0.0)
    assert state.normal_force == pytest.approx(normal)
    assert state.in_contact


def test_breakaway_accelerates_with_kinetic_friction():
    params = WorldParams()
    normal = params.mass * params.gravity
    force = 1.1 * params.mu_static * normal
    dt = 1e-3
    state = resolve_contact(contact_state(params), (force, 0.0), params,
                            vertical_thrust=0.0, dt=dt)
    expected_vx = (force - params.mu_kinetic * normal) / params.mass * dt
    assert state.velocity[0] == pytest.approx(expected_vx)
    assert state.velocity[0] > 0.0


def test_kinetic_friction_opposes_motion():
    params = WorldParams()
    normal = params.mass * params.gravity
    dt = 1e-3
    state = resolve_contact(contact_state(params, velocity=(0.1, 0.0, 0.0)),
                            (0.0, 0.0), params, vertical_thrust=0.0, dt=dt)
    expected_vx = 0.1 - params.mu_kinetic * normal / params.mass * dt
    assert state.velocity[0] == pytest.approx(expected_vx)


def test_sliding_restick_instead_of_reversal():
    # One friction step would reverse this crawl; with no applied force the
    # vehicle must stop dead, not bounce backwards.
    params = WorldParams()
    state = resolve_contact(contact_state(params, velocity=(0.002, 0.0, 0.0)),
                            (0.0, 0.0), params, vertical_thrust=0.0, dt=1e-2)
    assert state.velocity == (0.0, 0.0, 0.0)


def test_normal_force_shrinks_with_vertical_thrust():
    params = WorldParams()
    weight = params.mass * params.gravity
    state = resolve_contact(contact_state(params), (0.0, 0.0), params,
                            vertical_thrust=0.6 * weight, dt=1e-3)
    assert state.normal_force == pytest.approx(0.4 * weight)
    state = resolve_contact(contact_state(params), (0.0, 0.0), params,
                            vertical_thrust=1.5 * weight, dt=1e-3)
    assert state.normal_force == 0.0


def test_resolve_contact_rejects_airborne_state():
    params = WorldParams()
    state = HexState(position=(0.0, 0.0, 0.5))
    with pytest.raises(ValueError):
        resolve_contact(state, (0.0, 0.0), params, vertical_thrust=0.0, dt=1e-3)


# --- full steps ----------------------------------------------------------


def test_step_world_free_fall_is_semi_implicit():
    params = WorldParams()
    state = initial_state(params, (0.0, 0.0, 1.0))
    dt = params.physics_dt
    after = step_world(state, 0.0, (0.0, 0.0), params)
    assert after.velocity[2] == pytest.approx(-params.gravity * dt)
    # position integrates the *new* velocity
    assert after.position[2] == pytest.approx(1.0 - params.gravity * dt * dt)
    assert after.time == pytest.approx(dt)
    assert not after.in_contact


def test_step_world_attitude_first_order_lag():
    params = WorldParams(estimation_offset_pitch=0.4)
    state = initial_state(params, (0.0, 0.0, 3.0))
    after = step_world(state, params.hover_percent, (0.0, 5.0), params)
    alpha = 1.0 - math.exp(-params.physics_dt / params.attitude_time_constant)
    # the true attitude chases command - offset
    assert after.attitude_true[1] == pytest.approx(alpha * (5.0 - 0.4))
    assert after.attitude_estimated[1] == pytest.approx(after.attitude_true[1] + 0.4)
    assert after.attitude_true[2] == 0.0  # yaw never commanded


def test_step_world_hover_is_stationary():
    params = WorldParams()
    state = initial_state(params, (0.0, 0.0, 2.0))
    for _ in range(200):
        state = step_world(state, params.hover_percent, (0.0, 0.0), params)
    assert state.velocity == pytest.approx((0.0, 0.0, 0.0))
    assert state.position[2] == pytest.approx(2.0)


def test_step_world_pitch_drives_east_roll_drives_south():
    params = WorldParams()
    pitched = initial_state(params, (0.0, 0.0, 2.0))
    for _ in range(500):
        pitched = step_world(pitched, params.hover_percent, (0.0, 2.0), params)
    assert pitched.velocity[0] > 0.0
    assert abs(pitched.velocity[1]) < 1e-12

    rolled = initial_state(params, (0.0, 0.0, 2.0))
    for _ in range(500):
        rolled = step_world(rolled, params.hover_percent, (2.0, 0.0), params)
    assert rolled.velocity[1] < 0.0
    assert abs(rolled.velocity[0]) < 1e-12


def test_step_world_lands_and_stays_on_surface():
    params = WorldParams()
    state = initial_state(params, (0.0, 0.0, 0.05))
    for _ in range(2000):
        state = step_world(state, 0.8 * params.hover_percent, (0.0, 0.0), params)
    assert state.in_contact
    assert state.position[2] == params.surface_height
    assert state.normal_force > 0.0


def test_step_world_lifts_off_with_excess_thrust():
    params = WorldParams()
    state = contact_state(params)
    for _ in range(200):
        state = step_world(state, 80.0, (0.0, 0.0), params)
    assert not state.in_contact
    assert state.position[2] > params.surface_height


def test_disturbance_only_acts_near_surface():
    params = WorldParams()
    high = initial_state(params, (0.0, 0.0, 2.0))
    a = step_world(high, params.hover_percent, (0.0, 0.0), params, (5.0, 5.0))
    b = step_world(high, params.hover_percent, (0.0, 0.0), params, (0.0, 0.0))
    assert a == b

    low = contact_state(params)
    pushed = step_world(low, params.hover_percent * 0.9, (0.0, 0.0), params, (50.0, 0.0))
    assert pushed.velocity[0] > 0.0


def test_step_world_validates_inputs():
    params = WorldParams()
    state = initial_state(params, (0.0, 0.0, 1.0))
    with pytest.raises(ValueError):
        step_world(state, -1.0, (0.0, 0.0), params)
    with pytest.raises(ValueError):
        step_world(state, 101.0, (0.0, 0.0), params)
    with pytest.raises(ValueError):
        step_world(state, 50.0, (math.nan, 0.0), params)


def test_com_offset_adds_lateral_force():
    params = WorldParams(com_offset=(0.01, 0.0))
    state = initial_state(params, (0.0, 0.0, 2.0))
    for _ in range(100):
        state = step_world(state, params.hover_percent, (0.0, 0.0), params)
    assert state.velocity[0] > 0.0
