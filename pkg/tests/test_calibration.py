"""Hover-trial calibration of the attitude bias terms."""

import math

import pytest

from hexprint.calibration import calibrate_bias, hover_drift
from hexprint.world import WorldParams


def test_level_vehicle_does_not_drift():
    params = WorldParams()
    vx, vy = hover_drift(params, (0.0, 0.0), settle_s=2.0)
    assert math.hypot(vx, vy) < 1e-9


def test_hover_drift_matches_tilt_kinematics():
    # after the attitude lag settles, a pitch command of theta accelerates
    # the vehicle at g*sin(theta) for roughly (settle - tau) seconds
    params = WorldParams()
    theta = 1.0
    settle = 3.0
    vx, vy = hover_drift(params, (0.0, theta), settle_s=settle)
    expected = params.gravity * math.sin(math.radians(theta)) * (settle - params.attitude_time_constant)
    assert vx == pytest.approx(expected, rel=0.02)
    assert vy == 0.0


def test_drift_signs_follow_conventions():
    params = WorldParams()
    vx, _ = hover_drift(params, (0.0, 1.0), settle_s=2.0)
    _, vy = hover_drift(params, (1.0, 0.0), settle_s=2.0)
    assert vx > 0.0   # pitch forward drifts east
    assert vy < 0.0   # roll right drifts south


def test_calibration_with_no_offset_returns_zero_biases():
    result = calibrate_bias(WorldParams())
    assert result.converged
    assert result.iterations == 1
    assert result.beta_phi == 0.0
    assert result.beta_theta == 0.0


def test_calibration_recovers_known_offsets():
    params = WorldParams(estimation_offset_roll=0.8, estimation_offset_pitch=-1.3)
    result = calibrate_bias(params)
    assert result.converged
    assert result.iterations <= 5
    assert result.beta_phi == pytest.approx(0.8, abs=1e-3)
    assert result.beta_theta == pytest.approx(-1.3, abs=1e-3)
    assert result.drift_history[-1] < 0.01


def test_recovered_biases_cancel_the_drift():
    params = WorldParams(estimation_offset_roll=-1.7, estimation_offset_pitch=0.6)
    result = calibrate_bias(params)
    vx, vy = hover_drift(params, (result.beta_phi, result.beta_theta), settle_s=3.0)
    assert math.hypot(vx, vy) < 0.01


def test_drift_history_is_decreasing_for_clean_offsets():
    params = WorldParams(estimation_offset_roll=1.5, estimation_offset_pitch=1.5)
    result = calibrate_bias(params)
    assert result.converged
    assert result.drift_history == sorted(result.drift_history, reverse=True)


def test_nonconvergence_is_reported_not_raised():
    params = WorldParams(estimation_offset_roll=2.0)
    result = calibrate_bias(params, drift_tolerance=1e-12, max_iterations=2)
    assert not result.converged
    assert result.iterations == 2
    assert len(result.drift_history) == 2


def test_calibration_validates_arguments():
    with pytest.raises(ValueError):
        calibrate_bias(WorldParams(), drift_tolerance=0.0)
    with pytest.raises(ValueError):
        calibrate_bias(WorldParams(), settle_s=0.1)
