"""Scenario configuration: the single description of one simulated run.

Scenarios are TOML files with units spelled in the key names
(mass_kg, sliding_speed_mps, ...).  Parsing is strict: unknown keys are
rejected so typos fail loudly, and serialize(parse(file)) is canonical,
so round-tripping a file is idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import tomli

from .controller import ControllerConfig
from .deposition import NozzleGeometry
from .paths import PathLeg, builtin_paths, get_path
from .power import BatteryState, DischargeCurve, ThrustCurve
from .world import WorldParams


class ScenarioError(ValueError):
    """Invalid scenario file or parameter set."""


@dataclass
class DepositionConfig:
    flow_rate: float = 20.0        # mm^3/s, constant while extruding
    design_gap_mm: float = 0.5
    guard_radius_mm: float = 8.0
    adhesion_limit_mm: float = 1.0

    def geometry(self) -> NozzleGeometry:
        return NozzleGeometry(self.design_gap_mm, self.guard_radius_mm)

    def validate(self) -> None:
        if self.flow_rate < 0:
            raise ScenarioError("flow rate must be non-negative")
        if self.design_gap_mm < 0 or self.guard_radius_mm < 0:
            raise ScenarioError("nozzle geometry must be non-negative")


@dataclass
class MissionConfig:
    path_name: str | None = "square10cm"
    waypoints: list[tuple[float, float]] | None = None   # inline path, overrides path_name
    extrude: list[bool] | None = None                    # per-leg flags for inline paths
    loops: int = 1
    corner_dwell_s: float = 2.5       # hold at each corner before the next setpoint
    corner_tolerance_m: float = 0.01
    gate_extrusion: bool = False      # extruder off while dwelling / restarting
    start_height_m: float = 0.5       # scripted descent begins here, above the start corner
    descent_speed: float = 0.25       # m/s
    contact_grace_s: float = 0.5      # tolerated loss of contact during the print
    stop_at_v_remaining: float | None = None   # %, end the mission early on discharge

    def validate(self) -> None:
        if self.waypoints is None and not self.path_name:
            raise ScenarioError("mission needs a path name or inline waypoints")
        if self.waypoints is not None and len(self.waypoints) < 2:
            raise ScenarioError("a print mission needs at least 2 waypoints")
        if self.extrude is not None:
            if self.waypoints is None:
                raise ScenarioError("extrude flags require inline waypoints")
            if len(self.extrude) != len(self.waypoints) - 1:
                raise ScenarioError("need one extrude flag per leg (waypoints - 1)")
        if not isinstance(self.loops, int) or self.loops < 1:
            raise ScenarioError("loops must be an integer >= 1")
        if self.corner_dwell_s < 0 or self.corner_tolerance_m <= 0:
            raise ScenarioError("corner dwell/tolerance out of range")
        if self.start_height_m <= 0 or self.descent_speed <= 0:
            raise ScenarioError("descent parameters must be positive")

    def start_and_legs(self) -> tuple[tuple[float, float], list[PathLeg]]:
        if self.waypoints is not None:
            start = tuple(self.waypoints[0])
            flags = self.extrude or [True] * (len(self.waypoints) - 1)
            legs = [PathLeg(tuple(w), bool(f))
                    for w, f in zip(self.waypoints[1:], flags)]
        else:
            path = get_path(self.path_name)
            start, legs = path.start, list(path.legs)
        if self.loops > 1:
            if legs[-1].target != start:
                raise ScenarioError("looped missions need a closed path")
            legs = legs * self.loops
        return start, legs

    def target_polylines(self) -> list[list[tuple[float, float]]]:
        start, legs = self.start_and_legs()
        runs, current, position = [], [], start
        for leg in legs:
            if leg.extrude:
                if not current:
                    current = [position]
                current.append(leg.target)
            elif current:
                runs.append(current)
                current = []
            position = leg.target
        if current:
            runs.append(current)
        return runs

    def corners(self) -> list[tuple[float, float]]:
        _, legs = self.start_and_legs()
        seen: list[tuple[float, float]] = []
        for leg in legs:
            if leg.target not in seen:
                seen.append(leg.target)
        return seen


@dataclass
class Scenario:
    name: str = "scenario"
    seed: int = 0
    max_duration: float = 120.0    # s
    outputs: str | None = None     # directory; CLI default applies when None
    world: WorldParams = field(default_factory=WorldParams)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    battery: BatteryState = field(default_factory=BatteryState)
    discharge: DischargeCurve = field(default_factory=DischargeCurve)
    compensation: ThrustCurve = field(default_factory=ThrustCurve)
    sag: ThrustCurve = field(default_factory=ThrustCurve)
    compensation_enabled: bool = True
    current_per_percent: float = 0.4   # A per thrust percent
    deposition: DepositionConfig = field(default_factory=DepositionConfig)
    mission: MissionConfig = field(default_factory=MissionConfig)

    def validate(self) -> None:
        try:
            self.world.validate()
            self.controller.validate()
            self.battery.validate()
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
        self.deposition.validate()
        self.mission.validate()
        if self.max_duration <= 0:
            raise ScenarioError("max_duration must be positive")
        if self.current_per_percent < 0:
            raise ScenarioError("current_per_percent must be non-negative")
        self.mission.start_and_legs()   # resolves the path, may raise


# TOML key (with units) -> dataclass field, per section.
_WORLD_KEYS = {
    "mass_kg": "mass",
    "gravity_mps2": "gravity",
    "surface_height_m": "surface_height",
    "mu_static": "mu_static",
    "mu_kinetic": "mu_kinetic",
    "attitude_time_constant_s": "attitude_time_constant",
    "estimation_offset_roll_deg": "estimation_offset_roll",
    "estimation_offset_pitch_deg": "estimation_offset_pitch",
    "ground_effect_amplitude_n": "ground_effect_amplitude",
    "ground_effect_correlation_time_s": "ground_effect_correlation_time",
    "ground_effect_height_m": "ground_effect_height",
    "com_offset_m": "com_offset",
    "hover_pct": "hover_percent",
    "stiction_speed_mps": "stiction_speed",
    "physics_dt_s": "physics_dt",
}
_CONTROLLER_KEYS = {
    "kp": "kp",
    "ki": "ki",
    "kd": "kd",
    "alpha_lim_deg": "alpha_lim",
    "beta_theta_deg": "beta_theta",
    "beta_phi_deg": "beta_phi",
    "control_dt_s": "control_dt",
    "sliding_speed_mps": "sliding_speed",
}
_BATTERY_KEYS = {
    "v_max_v": "v_max",
    "v_min_v": "v_min",
    "capacity_c": "capacity",
}
_DEPOSITION_KEYS = {
    "flow_rate_mm3ps": "flow_rate",
    "design_gap_mm": "design_gap_mm",
    "guard_radius_mm": "guard_radius_mm",
    "adhesion_limit_mm": "adhesion_limit_mm",
}
_MISSION_KEYS = {
    "path": "path_name",
    "waypoints_m": "waypoints",
    "extrude": "extrude",
    "loops": "loops",
    "corner_dwell_s": "corner_dwell_s",
    "corner_tolerance_m": "corner_tolerance_m",
    "gate_extrusion": "gate_extrusion",
    "start_height_m": "start_height_m",
    "descent_speed_mps": "descent_speed",
    "contact_grace_s": "contact_grace_s",
    "stop_at_v_remaining_pct": "stop_at_v_remaining",
}
_CURVE_KEYS = {"a": "a", "b": "b", "center": "center"}


def _apply(section: dict, keymap: dict[str, str], target, where: str):
    float_fields = {f.name for f in fields(target)
                    if f.type in ("float", "float | None")}
    updates = {}
    for key, value in section.items():
        if key not in keymap:
            raise ScenarioError(f"unknown key {key!r} in [{where}]")
        name = keymap[key]
        if name in float_fields and isinstance(value, (int, float)):
            value = float(value)
        updates[name] = value
    return replace(target, **updates)


def parse_scenario(data: dict) -> Scenario:
    scenario = Scenario()
    known = {"name", "seed", "max_duration_s", "outputs",
             "world", "controller", "battery", "deposition", "mission"}
    for key in data:
        if key not in known:
            raise ScenarioError(f"unknown top-level key {key!r}")

    scenario.name = str(data.get("name", scenario.name))
    seed = data.get("seed", scenario.seed)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError("seed must be an integer")
    scenario.seed = seed
    scenario.max_duration = float(data.get("max_duration_s", scenario.max_duration))
    scenario.outputs = data.get("outputs", scenario.outputs)

    if "world" in data:
        section = dict(data["world"])
        if "com_offset_m" in section:
            off = section["com_offset_m"]
            if not (isinstance(off, list) and len(off) == 2):
                raise ScenarioError("com_offset_m must be a 2-element list")
            section["com_offset_m"] = (float(off[0]), float(off[1]))
        scenario.world = _apply(section, _WORLD_KEYS, scenario.world, "world")
    if "controller" in data:
        scenario.controller = _apply(
            data["controller"], _CONTROLLER_KEYS, scenario.controller, "controller")
    if "battery" in data:
        section = dict(data["battery"])
        if "compensation" in section:
            scenario.compensation = _apply(
                section.pop("compensation"), _CURVE_KEYS,
                scenario.compensation, "battery.compensation")
        if "sag" in section:
            scenario.sag = _apply(
                section.pop("sag"), _CURVE_KEYS, scenario.sag, "battery.sag")
        if "compensation_enabled" in section:
            scenario.compensation_enabled = bool(section.pop("compensation_enabled"))
        if "current_per_percent_a" in section:
            scenario.current_per_percent = float(section.pop("current_per_percent_a"))
        if "discharge_knots_consumed" in section:
            scenario.discharge = replace(
                scenario.discharge,
                knot_consumed_fractions=tuple(
                    float(v) for v in section.pop("discharge_knots_consumed")))
        if "discharge_knots_voltage" in section:
            scenario.discharge = replace(
                scenario.discharge,
                knot_voltage_fractions=tuple(
                    float(v) for v in section.pop("discharge_knots_voltage")))
        scenario.battery = _apply(section, _BATTERY_KEYS, scenario.battery, "battery")
        scenario.battery = replace(scenario.battery, v_measured=scenario.battery.v_max)
    if "deposition" in data:
        scenario.deposition = _apply(
            data["deposition"], _DEPOSITION_KEYS, scenario.deposition, "deposition")
    if "mission" in data:
        section = dict(data["mission"])
        if "waypoints_m" in section:
            pts = section["waypoints_m"]
            if not (isinstance(pts, list)
                    and all(isinstance(p, list) and len(p) == 2 for p in pts)):
                raise ScenarioError("waypoints_m must be a list of [x, y] pairs")
            section["waypoints_m"] = [(float(p[0]), float(p[1])) for p in pts]
            section.setdefault("path", None)
        if "extrude" in section:
            section["extrude"] = [bool(v) for v in section["extrude"]]
        scenario.mission = _apply(section, _MISSION_KEYS, scenario.mission, "mission")

    scenario.validate()
    return scenario


def load_scenario(path: Path | str) -> Scenario:
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except tomli.TOMLDecodeError as exc:
        raise ScenarioError(f"malformed scenario file {path}: {exc}")
    return parse_scenario(data)


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {value!r}")


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical TOML text for a scenario (full explicit parameter set)."""
    w, c, b, d, m = (scenario.world, scenario.controller, scenario.battery,
                     scenario.deposition, scenario.mission)
    lines = [
        f"name = {_toml_value(scenario.name)}",
        f"seed = {scenario.seed}",
        f"max_duration_s = {_toml_value(scenario.max_duration)}",
    ]
    if scenario.outputs is not None:
        lines.append(f"outputs = {_toml_value(scenario.outputs)}")

    def section(header: str, keymap: dict[str, str], obj) -> None:
        lines.append("")
        lines.append(f"[{header}]")
        for key, name in keymap.items():
            value = getattr(obj, name)
            if value is None:
                continue
            lines.append(f"{key} = {_toml_value(value)}")

    section("world", _WORLD_KEYS, w)
    section("controller", _CONTROLLER_KEYS, c)
    section("battery", _BATTERY_KEYS, b)
    lines.append(f"current_per_percent_a = {_toml_value(scenario.current_per_percent)}")
    lines.append(f"compensation_enabled = {_toml_value(scenario.compensation_enabled)}")
    lines.append("discharge_knots_consumed = "
                 + _toml_value(list(scenario.discharge.knot_consumed_fractions)))
    lines.append("discharge_knots_voltage = "
                 + _toml_value(list(scenario.discharge.knot_voltage_fractions)))
    section("battery.compensation", _CURVE_KEYS, scenario.compensation)
    section("battery.sag", _CURVE_KEYS, scenario.sag)
    section("deposition", _DEPOSITION_KEYS, d)

    lines.append("")
    lines.append("[mission]")
    for key, name in _MISSION_KEYS.items():
        value = getattr(m, name)
        if value is None:
            continue
        if key == "waypoints_m":
            value = [list(p) for p in value]
        lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"


def save_scenario(scenario: Scenario, path: Path | str) -> None:
    Path(path).write_text(serialize_scenario(scenario))


def default_scenario(path_name: str = "square10cm", seed: int = 0) -> Scenario:
    if path_name not in builtin_paths():
        get_path(path_name)   # raises UnknownPathError with alternatives
    scenario = Scenario(name=path_name, seed=seed)
    scenario.mission = replace(scenario.mission, path_name=path_name)
    return scenario
