"""Simulator and analysis tooling for a surface-sliding 3D-printing hexacopter.

The vehicle descends onto a build surface, slides on a friction-bearing
nozzle guard under a clamped PID position controller with
voltage-compensated thrust, and deposits a bead along commanded
contours.  Everything is deterministic for a given scenario and seed.
"""

from .analysis import (
    PrintReport,
    build_report,
    corner_clump_ratio,
    friction_variation,
    gap_constancy,
    path_deviation,
)
from .calibration import CalibrationResult, calibrate_bias
from .controller import (
    ControllerConfig,
    ControllerState,
    advance_corner,
    clamp_attitude,
    compute_attitude_command,
    pid_step,
    ramp_setpoint,
)
from .deposition import BeadTrace, NozzleGeometry, deposit_step, nozzle_gap
from .paths import PrintPath, UnknownPathError, builtin_paths, get_path
from .power import (
    BatteryExhaustedError,
    BatteryState,
    DischargeCurve,
    ThrustCurve,
    discharge_step,
    thrust_command,
    v_remaining,
    voltage_gain,
)
from .run import ComparisonReport, compare_discharge, run_scenario
from .scenario import Scenario, ScenarioError, default_scenario, load_scenario, save_scenario
from .trace import ControlRecord, RunTrace
from .world import HexState, WorldParams, ground_effect, initial_state, resolve_contact, step_world

__version__ = "0.1.0"

__all__ = [
    "BatteryExhaustedError",
    "BatteryState",
    "BeadTrace",
    "CalibrationResult",
    "ComparisonReport",
    "ControlRecord",
    "ControllerConfig",
    "ControllerState",
    "DischargeCurve",
    "HexState",
    "NozzleGeometry",
    "PrintPath",
    "PrintReport",
    "RunTrace",
    "Scenario",
    "ScenarioError",
    "ThrustCurve",
    "UnknownPathError",
    "WorldParams",
    "advance_corner",
    "build_report",
    "builtin_paths",
    "calibrate_bias",
    "clamp_attitude",
    "compare_discharge",
    "compute_attitude_command",
    "corner_clump_ratio",
    "default_scenario",
    "deposit_step",
    "discharge_step",
    "friction_variation",
    "gap_constancy",
    "get_path",
    "ground_effect",
    "initial_state",
    "load_scenario",
    "nozzle_gap",
    "path_deviation",
    "pid_step",
    "ramp_setpoint",
    "resolve_contact",
    "run_scenario",
    "save_scenario",
    "step_world",
    "thrust_command",
    "v_remaining",
    "voltage_gain",
]
