"""Scenario execution: the coupled control / physics / battery loop.

A run has three phases: a scripted vertical descent onto the start
corner, a one-time controller handoff at first surface contact, and the
sliding print mission.  The controller, battery and disturbance advance
at control_dt; the world integrates at physics_dt in between.  The
correlated disturbance is drawn once per control step and held across
the physics substeps, so refining physics_dt does not change the noise
sequence a seed produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import power
from .controller import ControllerState, advance_corner, compute_attitude_command, ramp_setpoint
from .deposition import deposit_step, nozzle_gap
from .scenario import Scenario, ScenarioError
from .trace import ControlRecord, RunTrace, write_bead_json, write_trace_csv
from .world import ground_effect, initial_state, step_world


@dataclass
class ComparisonReport:
    """Friction variation of a compensated vs a constant-command run."""

    compensated_variation: float | None   # percent
    constant_variation: float | None      # percent
    compensated_status: str
    constant_status: str
    verdict: bool | None                  # True when compensation reduced variation

    def to_dict(self) -> dict:
        return {
            "compensated_variation_pct": self.compensated_variation,
            "constant_variation_pct": self.constant_variation,
            "compensated_status": self.compensated_status,
            "constant_status": self.constant_status,
            "compensation_reduces_variation": self.verdict,
        }


def _substeps(scenario: Scenario) -> int:
    n = max(1, round(scenario.controller.control_dt / scenario.world.physics_dt))
    if abs(n * scenario.world.physics_dt - scenario.controller.control_dt) > 1e-9:
        raise ScenarioError("control_dt must be a whole multiple of physics_dt")
    return n


def run_scenario(
    scenario: Scenario,
    out_dir: Path | str | None = None,
    seed: int | None = None,
) -> RunTrace:
    """Execute one scenario and return (and optionally write) its trace.

    seed overrides the scenario's seed; out_dir (or scenario.outputs)
    receives trace.csv and bead.json.
    """
    scenario.validate()
    world = scenario.world
    config = scenario.controller
    mission = scenario.mission
    geometry = scenario.deposition.geometry()
    substeps = _substeps(scenario)
    rng = np.random.default_rng(scenario.seed if seed is None else seed)

    start, legs = mission.start_and_legs()
    state = initial_state(
        world, (start[0], start[1], world.surface_height + mission.start_height_m))
    ctrl = ControllerState(
        current_setpoint=start,
        destination=start,
        corner_queue=[leg.target for leg in legs],
    )
    battery = scenario.battery
    trace = RunTrace()

    print_phase = False
    constant_cmd: float | None = None
    leg_index = -1            # -1: still heading to the start corner, nothing printed
    mode = "slide"
    dwell_until = 0.0
    wait_for_motion = False   # gated extrusion: hold until sliding resumes
    contact_lost_since: float | None = None
    disturbance = (0.0, 0.0)
    status, detail = "timeout", ""

    while state.time < scenario.max_duration:
        v_rem = power.v_remaining(battery)
        measured = (state.position[0], state.position[1])

        if print_phase:
            if mission.stop_at_v_remaining is not None and v_rem <= mission.stop_at_v_remaining:
                status = "voltage_target_reached"
                detail = f"reached {v_rem:.2f}% remaining voltage"
                break

            if mode == "slide":
                at_destination = (
                    ctrl.current_setpoint == ctrl.destination
                    and math.dist(measured, ctrl.destination) <= mission.corner_tolerance_m
                )
                if at_destination:
                    mode = "dwell"
                    dwell_until = state.time + mission.corner_dwell_s
            if mode == "dwell" and state.time >= dwell_until:
                if advance_corner(ctrl, measured, mission.corner_tolerance_m):
                    leg_index += 1
                    mode = "slide"
                    if mission.gate_extrusion:
                        wait_for_motion = True
                elif ctrl.mission_complete:
                    status = "complete"
                    break

            ramp_setpoint(ctrl, config)
            roll_cmd, pitch_cmd = compute_attitude_command(measured, config, ctrl)
            if scenario.compensation_enabled:
                thrust_cmd = power.thrust_command(v_rem, scenario.compensation)
            else:
                if constant_cmd is None:
                    constant_cmd = power.thrust_command(v_rem, scenario.compensation)
                thrust_cmd = constant_cmd
        else:
            # Scripted descent: hold level attitude (through the biases) and
            # track the descent rate with a proportional thrust trim.
            roll_cmd, pitch_cmd = config.beta_phi, config.beta_theta
            rate_error = -mission.descent_speed - state.velocity[2]
            thrust_cmd = world.hover_percent * min(1.1, max(0.5, 1.0 + 1.5 * rate_error))

        speed = math.hypot(state.velocity[0], state.velocity[1])
        if wait_for_motion and speed >= 0.5 * config.sliding_speed:
            wait_for_motion = False
        # Gate window: from corner arrival until the vehicle is sliding
        # again at speed, covering the dwell and the restart stall.
        gated_off = mission.gate_extrusion and (mode == "dwell" or wait_for_motion)
        extruding = (
            print_phase
            and leg_index >= 0
            and legs[min(leg_index, len(legs) - 1)].extrude
            and not gated_off
        )

        disturbance = ground_effect(rng, world, config.control_dt, disturbance)
        achieved = thrust_cmd * power.voltage_gain(v_rem, scenario.sag)
        achieved = min(100.0, max(0.0, achieved))
        for _ in range(substeps):
            state = step_world(state, achieved, (roll_cmd, pitch_cmd), world, disturbance)
        if not state.is_finite():
            status, detail = "non_finite", "simulation state diverged"
            break

        try:
            battery = power.discharge_step(
                battery, thrust_cmd, config.control_dt,
                scenario.discharge, scenario.current_per_percent)
        except power.BatteryExhaustedError as exc:
            status, detail = "battery_exhausted", str(exc)
            break

        if not print_phase and state.in_contact:
            print_phase = True          # one-time controller handoff
            trace.bead.clock = state.time

        if print_phase:
            if state.in_contact:
                contact_lost_since = None
                deposit_step(
                    nozzle_position=(state.position[0], state.position[1]),
                    gap=nozzle_gap(state, geometry),
                    extruding=extruding and state.in_contact,
                    flow_rate=scenario.deposition.flow_rate,
                    dt=config.control_dt,
                    trace=trace.bead,
                    adhesion_limit_mm=scenario.deposition.adhesion_limit_mm,
                )
            else:
                if contact_lost_since is None:
                    contact_lost_since = state.time
                elif state.time - contact_lost_since > mission.contact_grace_s:
                    status, detail = "contact_lost", "contact lost beyond the grace period"
                    break

        trace.records.append(ControlRecord(
            time=state.time,
            position=state.position,
            setpoint=ctrl.current_setpoint,
            roll_cmd=roll_cmd,
            pitch_cmd=pitch_cmd,
            thrust_cmd=thrust_cmd,
            normal_force=state.normal_force,
            voltage=battery.v_measured,
            v_remaining=power.v_remaining(battery),
            in_contact=state.in_contact,
            extruding=extruding and state.in_contact,
        ))

    trace.status = status
    trace.detail = detail

    target = out_dir if out_dir is not None else scenario.outputs
    if target is not None:
        directory = Path(target)
        directory.mkdir(parents=True, exist_ok=True)
        write_trace_csv(trace, directory / "trace.csv")
        write_bead_json(trace, directory / "bead.json")
    return trace


def compare_discharge(
    scenario: Scenario,
    seed: int | None = None,
) -> tuple[ComparisonReport, RunTrace, RunTrace]:
    """Run the same mission compensated and with a constant thrust command.

    The runs share the scenario, seed and noise sequence; only the
    thrust law differs.  Returns the report plus both traces.
    """
    from .analysis import friction_variation

    compensated = replace(scenario, compensation_enabled=True)
    constant = replace(scenario, compensation_enabled=False)

    trace_comp = run_scenario(compensated, out_dir=None, seed=seed)
    trace_const = run_scenario(constant, out_dir=None, seed=seed)

    def variation(trace: RunTrace) -> float | None:
        if not trace.succeeded:
            return None
        try:
            return friction_variation(trace)
        except ValueError:
            return None

    var_comp = variation(trace_comp)
    var_const = variation(trace_const)
    verdict = var_comp < var_const if (var_comp is not None and var_const is not None) else None
    report = ComparisonReport(
        compensated_variation=var_comp,
        constant_variation=var_const,
        compensated_status=trace_comp.status,
        constant_status=trace_const.status,
        verdict=verdict,
    )
    return report, trace_comp, trace_const
