"""Print-quality and controller-performance metrics over run traces.

All metrics are pure functions of trace data, so a report recomputed
from a serialized trace matches the in-memory one exactly.  Deviation
is geometric (nearest point on the target polyline) rather than
time-aligned: the question is where the bead ended up, not when.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deposition import BeadTrace
from .trace import RunTrace


@dataclass
class GapStats:
    minimum: float | None   # mm; None when no in-contact extruding samples exist
    maximum: float | None
    range: float | None
    samples: int


@dataclass
class PrintReport:
    """Summary metrics for one print run."""

    max_deviation: float            # m
    rms_deviation: float            # m
    clump_ratios: list[float]       # per corner, 1.0 = uniform bead
    gap: GapStats
    normal_force_variation: float | None   # percent; None when never in contact
    mission_time: float             # s

    def to_dict(self) -> dict:
        return {
            "max_deviation_m": self.max_deviation,
            "rms_deviation_m": self.rms_deviation,
            "clump_ratios": self.clump_ratios,
            "gap_min_mm": self.gap.minimum,
            "gap_max_mm": self.gap.maximum,
            "gap_range_mm": self.gap.range,
            "gap_samples": self.gap.samples,
            "normal_force_variation_pct": self.normal_force_variation,
            "mission_time_s": self.mission_time,
        }


def _polyline_arcs(target: list[tuple[float, float]]) -> np.ndarray:
    pts = np.asarray(target, dtype=float)
    return np.concatenate(([0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))))


def _nearest_on_polyline(
    points: np.ndarray, target: list[tuple[float, float]]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distance, arc position, and distance-into-edge of each point's nearest
    point on the polyline."""
    pts = np.asarray(target, dtype=float)
    if len(pts) < 2:
        raise ValueError("target polyline needs at least 2 points")
    a = pts[:-1]                       # (E, 2) edge starts
    d = pts[1:] - a                    # (E, 2) edge vectors
    lengths = np.linalg.norm(d, axis=1)
    lengths[lengths == 0] = 1e-300
    arcs = _polyline_arcs(target)

    rel = points[:, None, :] - a[None, :, :]            # (N, E, 2)
    t = np.clip(np.einsum("nej,ej->ne", rel, d) / lengths**2, 0.0, 1.0)
    nearest = a[None, :, :] + t[..., None] * d[None, :, :]
    dist = np.linalg.norm(points[:, None, :] - nearest, axis=2)   # (N, E)
    edge = np.argmin(dist, axis=1)
    n = np.arange(len(points))
    along = t[n, edge] * lengths[edge]
    return dist[n, edge], arcs[edge] + along, along


def _as_polylines(target) -> list[list[tuple[float, float]]]:
    """Accept one polyline (list of points) or several (list of polylines)."""
    if not target:
        raise ValueError("empty target path")
    first = target[0]
    if isinstance(first[0], (int, float)):
        return [list(target)]
    return [list(line) for line in target]


def path_deviation(
    trace: BeadTrace,
    target_path,
    exclude_edge_start: float = 0.0,
) -> tuple[float, float]:
    """Max and RMS distance of deposited segment midpoints to the target.

    target_path is a polyline or a list of polylines (for prints with
    travel moves between strokes).  exclude_edge_start drops midpoints
    whose nearest point lies within that arc distance of an edge's
    starting corner, for judging steady sliding separately from
    slide-start transients.
    """
    mids = np.array(
        [((s.start[0] + s.end[0]) / 2, (s.start[1] + s.end[1]) / 2)
         for s in trace.segments if s.extruding],
        dtype=float,
    )
    if mids.size == 0:
        raise ValueError("trace has no deposited segments")
    polylines = _as_polylines(target_path)
    dists = np.empty((len(polylines), len(mids)))
    alongs = np.empty_like(dists)
    for i, line in enumerate(polylines):
        dists[i], _, alongs[i] = _nearest_on_polyline(mids, line)
    best = np.argmin(dists, axis=0)
    n = np.arange(len(mids))
    dist, along = dists[best, n], alongs[best, n]
    if exclude_edge_start > 0.0:
        keep = along >= exclude_edge_start
        if not keep.any():
            raise ValueError("exclusion window removed every segment")
        dist = dist[keep]
    return float(dist.max()), float(math.sqrt(np.mean(dist**2)))


def corner_clump_ratio(
    trace: BeadTrace,
    corners: list[tuple[float, float]],
    radius: float = 0.015,
) -> list[float]:
    """Deposited volume density near each corner over the straight-bead density.

    The per-area density inside a disk around the corner is divided by
    the density a single constant-speed pass lays through that disk, so
    a clean pass scores about 1 and a dwell of n traversal times scores
    about n + 1.  Corners with no nearby deposition score 0.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    segs = [s for s in trace.segments if s.extruding]
    if not segs:
        return [0.0 for _ in corners]
    mids = np.array(
        [((s.start[0] + s.end[0]) / 2, (s.start[1] + s.end[1]) / 2) for s in segs]
    )
    volumes = np.array([s.volume for s in segs])
    lengths = np.array([math.dist(s.start, s.end) for s in segs])
    moving = lengths > 1e-6
    if not moving.any():
        raise ValueError("trace has no moving deposition to set the bead reference")
    linear_density = float(np.median(volumes[moving] / lengths[moving]))  # mm^3 per m

    ratios = []
    for corner in corners:
        inside = np.linalg.norm(mids - np.asarray(corner), axis=1) <= radius
        disk_volume = float(volumes[inside].sum())
        one_pass = linear_density * 2.0 * radius
        ratios.append(disk_volume / one_pass if one_pass > 0 else 0.0)
    return ratios


def gap_constancy(trace: BeadTrace) -> GapStats:
    """Extrema and range of the nozzle gap while extruding."""
    gaps = [g.gap for g in trace.nozzle_gap_series if g.extruding]
    if not gaps:
        return GapStats(minimum=None, maximum=None, range=None, samples=0)
    lo, hi = min(gaps), max(gaps)
    return GapStats(minimum=lo, maximum=hi, range=hi - lo, samples=len(gaps))


def friction_variation(run_trace: RunTrace, settle_s: float = 0.5) -> float:
    """(max - min) / mean of the contact normal force, in percent.

    Friction is proportional to the normal force at fixed mu, so this is
    the friction variation over the print.  The first settle_s after
    touchdown are skipped; the descent-phase thrust still acts there and
    would dominate the extrema.
    """
    contact = [(r.time, r.normal_force) for r in run_trace.records if r.in_contact]
    if not contact:
        raise ValueError("run has no contact phase")
    t0 = contact[0][0]
    forces = np.array([n for t, n in contact if t >= t0 + settle_s])
    if forces.size == 0 or forces.mean() == 0.0:
        raise ValueError("run has no contact phase after the settle window")
    return float((forces.max() - forces.min()) / forces.mean() * 100.0)


def build_report(
    run_trace: RunTrace,
    target_path: list[tuple[float, float]],
    corners: list[tuple[float, float]],
    corner_radius: float = 0.015,
    exclude_edge_start: float = 0.0,
) -> PrintReport:
    """Compute the full report for one run against its target geometry."""
    max_dev, rms_dev = path_deviation(run_trace.bead, target_path, exclude_edge_start)
    try:
        variation = friction_variation(run_trace)
    except ValueError:
        variation = None
    mission_time = run_trace.records[-1].time if run_trace.records else 0.0
    return PrintReport(
        max_deviation=max_dev,
        rms_deviation=rms_dev,
        clump_ratios=corner_clump_ratio(run_trace.bead, corners, corner_radius),
        gap=gap_constancy(run_trace.bead),
        normal_force_variation=variation,
        mission_time=mission_time,
    )


def connected_components(
    segments: list[tuple[tuple[float, float], tuple[float, float]]],
    tolerance: float = 1e-3,
) -> int:
    """Number of spatially connected groups among the given segments.

    Two segments connect when any endpoint of one lies within tolerance
    of the other segment (touching mid-span counts, so a T-stem meeting
    its bar mid-way is one component).
    """
    n = len(segments)
    if n == 0:
        return 0
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    def point_seg_dist(p, seg) -> float:
        (ax, ay), (bx, by) = seg
        dx, dy = bx - ax, by - ay
        den = dx * dx + dy * dy
        t = 0.0 if den == 0 else max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / den))
        return math.dist(p, (ax + t * dx, ay + t * dy))

    for i in range(n):
        for j in range(i + 1, n):
            si, sj = segments[i], segments[j]
            if (point_seg_dist(si[0], sj) <= tolerance
                    or point_seg_dist(si[1], sj) <= tolerance
                    or point_seg_dist(sj[0], si) <= tolerance
                    or point_seg_dist(sj[1], si) <= tolerance):
                union(i, j)
    return len({find(i) for i in range(n)})
