"""Run trace records and their file formats.

Per-control-step records go to CSV with a fixed column order; the bead
trace and the report go to JSON sidecars.  Floats are written with
repr, which round-trips exactly, so identical runs produce byte
identical files and a report recomputed from disk matches the
in-memory one.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .deposition import BeadSegment, BeadTrace, GapSample

CSV_COLUMNS = [
    "time_s",
    "x_m",
    "y_m",
    "z_m",
    "setpoint_x_m",
    "setpoint_y_m",
    "roll_cmd_deg",
    "pitch_cmd_deg",
    "thrust_cmd_pct",
    "normal_force_n",
    "voltage_v",
    "v_remaining_pct",
    "in_contact",
    "extruding",
]


@dataclass
class ControlRecord:
    """State and commands at one control step."""

    time: float
    position: tuple[float, float, float]
    setpoint: tuple[float, float]
    roll_cmd: float
    pitch_cmd: float
    thrust_cmd: float        # percent
    normal_force: float      # N
    voltage: float           # V
    v_remaining: float       # percent
    in_contact: bool
    extruding: bool


@dataclass
class RunTrace:
    """Everything one run produced: control records, bead, termination."""

    records: list[ControlRecord] = field(default_factory=list)
    bead: BeadTrace = field(default_factory=BeadTrace)
    status: str = "incomplete"
    detail: str = ""

    @property
    def succeeded(self) -> bool:
        return self.status in ("complete", "voltage_target_reached")


def _fmt(value: float) -> str:
    return repr(float(value))


def write_trace_csv(trace: RunTrace, path: Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in trace.records:
        writer.writerow([
            _fmt(r.time),
            _fmt(r.position[0]), _fmt(r.position[1]), _fmt(r.position[2]),
            _fmt(r.setpoint[0]), _fmt(r.setpoint[1]),
            _fmt(r.roll_cmd), _fmt(r.pitch_cmd), _fmt(r.thrust_cmd),
            _fmt(r.normal_force),
            _fmt(r.voltage), _fmt(r.v_remaining),
            int(r.in_contact), int(r.extruding),
        ])
    path.write_text(buf.getvalue())


def read_trace_csv(path: Path) -> list[ControlRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected trace columns in {path}")
        for row in reader:
            records.append(ControlRecord(
                time=float(row["time_s"]),
                position=(float(row["x_m"]), float(row["y_m"]), float(row["z_m"])),
                setpoint=(float(row["setpoint_x_m"]), float(row["setpoint_y_m"])),
                roll_cmd=float(row["roll_cmd_deg"]),
                pitch_cmd=float(row["pitch_cmd_deg"]),
                thrust_cmd=float(row["thrust_cmd_pct"]),
                normal_force=float(row["normal_force_n"]),
                voltage=float(row["voltage_v"]),
                v_remaining=float(row["v_remaining_pct"]),
                in_contact=row["in_contact"] == "1",
                extruding=row["extruding"] == "1",
            ))
    return records


def bead_to_dict(bead: BeadTrace) -> dict:
    return {
        "segments": [
            {
                "start": list(s.start),
                "end": list(s.end),
                "volume_mm3": s.volume,
                "timestamp_s": s.timestamp,
                "extruding": s.extruding,
                "adhered": s.adhered,
            }
            for s in bead.segments
        ],
        "nozzle_gap_series": [
            {"time_s": g.time, "gap_mm": g.gap, "extruding": g.extruding}
            for g in bead.nozzle_gap_series
        ],
    }


def bead_from_dict(data: dict) -> BeadTrace:
    bead = BeadTrace()
    for s in data["segments"]:
        bead.segments.append(BeadSegment(
            start=tuple(s["start"]),
            end=tuple(s["end"]),
            volume=s["volume_mm3"],
            timestamp=s["timestamp_s"],
            extruding=s["extruding"],
            adhered=s["adhered"],
        ))
    for g in data["nozzle_gap_series"]:
        bead.nozzle_gap_series.append(GapSample(
            time=g["time_s"], gap=g["gap_mm"], extruding=g["extruding"],
        ))
    if bead.segments:
        bead.clock = bead.segments[-1].timestamp
    return bead


def write_bead_json(trace: RunTrace, path: Path) -> None:
    payload = bead_to_dict(trace.bead)
    payload["status"] = trace.status
    payload["detail"] = trace.detail
    path.write_text(json.dumps(payload, indent=2) + "\n")


def read_bead_json(path: Path) -> tuple[BeadTrace, str]:
    data = json.loads(path.read_text())
    return bead_from_dict(data), data.get("status", "unknown")
