"""Bead deposition bookkeeping on the build surface.

Material is tracked volumetrically at the nozzle's ground projection:
each step appends a segment from the previous nozzle position to the
current one carrying flow_rate * dt of material when extruding.  A
dwelling vehicle therefore piles volume onto co-located segments (the
mechanism behind corner clumps), while steady sliding lays a uniform
bead.  No melt-flow or spread physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .world import HexState


@dataclass(frozen=True)
class NozzleGeometry:
    """Geometry linking vehicle attitude to the nozzle-surface gap.

    design_gap_mm is the nozzle tip's recess above the guard's resting
    plane (guard sheet and weather stripping included).  guard_radius_mm
    is the lever arm from the nozzle axis to the guard's support rim:
    tilting the guard plane lifts the nozzle by that radius times the
    tilt slope.
    """

    design_gap_mm: float = 0.5
    guard_radius_mm: float = 8.0


@dataclass(frozen=True)
class BeadSegment:
    start: tuple[float, float]   # m, on the build surface
    end: tuple[float, float]     # m
    volume: float                # mm^3
    timestamp: float             # s, end of the deposit interval
    extruding: bool
    adhered: bool = True         # False when laid with the gap past the adhesion limit


@dataclass(frozen=True)
class GapSample:
    time: float       # s
    gap: float        # mm
    extruding: bool


@dataclass
class BeadTrace:
    """Ordered, spatially continuous record of deposited material."""

    segments: list[BeadSegment] = field(default_factory=list)
    nozzle_gap_series: list[GapSample] = field(default_factory=list)
    clock: float = 0.0   # s, set to the sim time at which deposition starts

    @property
    def total_volume(self) -> float:
        return math.fsum(s.volume for s in self.segments)

    def endpoint(self) -> tuple[float, float] | None:
        return self.segments[-1].end if self.segments else None


def deposit_step(
    nozzle_position: tuple[float, float],
    gap: float,
    extruding: bool,
    flow_rate: float,
    dt: float,
    trace: BeadTrace,
    adhesion_limit_mm: float = 1.0,
) -> BeadTrace:
    """Append one deposit interval ending at the given nozzle position.

    The segment starts at the previous segment's end (or at the current
    position for the first call), carries flow_rate * dt of material
    when extruding, and is flagged non-adhered rather than dropped when
    the gap exceeds the adhesion limit.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if flow_rate < 0:
        raise ValueError("flow_rate must be non-negative")
    start = trace.segments[-1].end if trace.segments else nozzle_position
    trace.clock += dt
    trace.segments.append(
        BeadSegment(
            start=start,
            end=nozzle_position,
            volume=flow_rate * dt if extruding else 0.0,
            timestamp=trace.clock,
            extruding=extruding,
            adhered=gap <= adhesion_limit_mm,
        )
    )
    trace.nozzle_gap_series.append(
        GapSample(time=trace.clock, gap=gap, extruding=extruding)
    )
    return trace


def nozzle_gap(state: HexState, geometry: NozzleGeometry) -> float:
    """Nozzle-to-surface distance in mm with the guard resting on the surface.

    Upright the gap equals the design gap; tilting by roll/pitch lifts
    the nozzle by guard_radius * sqrt(tan^2 roll + tan^2 pitch), the
    small-angle rise of the guard plane's center over its support rim.
    """
    if not state.in_contact:
        raise ValueError("nozzle gap is defined only in surface contact")
    roll, pitch, _ = state.attitude_true
    tilt = math.sqrt(
        math.tan(math.radians(roll)) ** 2 + math.tan(math.radians(pitch)) ** 2
    )
    return geometry.design_gap_mm + geometry.guard_radius_mm * tilt
