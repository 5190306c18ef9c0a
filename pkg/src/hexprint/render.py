"""SVG rendering of a printed bead against its target contour.

The bead is drawn as stroked polylines whose width is proportional to
the implied cross-section (volume per length), dwell clumps as filled
circles scaled by their accumulated volume, and the target path as a
dashed overlay.  An empty bead still renders the overlay plus a notice.
"""

from __future__ import annotations

import math

from .trace import RunTrace

SCALE = 2000.0          # px per metre
MARGIN = 40.0           # px
WIDTH_PER_MM2 = 4.0     # px of stroke per mm^2 of bead cross-section
CLUMP_GRID = 0.005      # m, clustering pitch for dwell volume
MIN_MOVE = 1e-4         # m, segments shorter than this count as dwelling


def _bounds(points: list[tuple[float, float]]) -> tuple[float, float, float, float]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return min(xs), min(ys), max(xs), max(ys)


def render_trace(trace: RunTrace, target, title: str | None = None) -> str:
    """Return an SVG document for the run's bead and target geometry.

    target is a polyline or list of polylines in metres.
    """
    if target and isinstance(target[0][0], (int, float)):
        target = [target]
    target = [list(line) for line in (target or [])]

    segments = [s for s in trace.bead.segments if s.extruding]
    points = [p for line in target for p in line]
    points += [s.start for s in segments] + [s.end for s in segments]
    if not points:
        points = [(0.0, 0.0), (0.1, 0.1)]
    x0, y0, x1, y1 = _bounds(points)

    def to_px(p: tuple[float, float]) -> tuple[float, float]:
        return (
            MARGIN + (p[0] - x0) * SCALE,
            MARGIN + (y1 - p[1]) * SCALE,   # flip: north is up
        )

    width = 2 * MARGIN + (x1 - x0) * SCALE
    height = 2 * MARGIN + (y1 - y0) * SCALE
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{MARGIN}" y="{MARGIN * 0.6:.0f}" font-size="14" '
            f'fill="#333">{title}</text>')

    for line in target:
        pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in map(to_px, line))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#888" '
            f'stroke-width="1.5" stroke-dasharray="6 4"/>')

    if not segments:
        parts.append(
            f'<text x="{width / 2:.0f}" y="{height / 2:.0f}" font-size="16" '
            f'fill="#b00" text-anchor="middle">no material deposited</text>')
        parts.append("</svg>")
        return "\n".join(parts)

    # Moving bead: group consecutive segments into polylines per width bin.
    moving = [(s, math.dist(s.start, s.end)) for s in segments]
    runs: list[tuple[float, bool, list[tuple[float, float]]]] = []
    for seg, length in moving:
        if length < MIN_MOVE:
            continue
        cross_section = seg.volume / (length * 1000.0)   # mm^2
        binned = round(cross_section * 10) / 10
        if runs and runs[-1][0] == binned and runs[-1][1] == seg.adhered \
                and runs[-1][2][-1] == seg.start:
            runs[-1][2].append(seg.end)
        else:
            runs.append((binned, seg.adhered, [seg.start, seg.end]))
    for cross_section, adhered, pts in runs:
        px = " ".join(f"{x:.1f},{y:.1f}" for x, y in map(to_px, pts))
        stroke_w = max(0.8, cross_section * WIDTH_PER_MM2)
        opacity = "1.0" if adhered else "0.45"
        parts.append(
            f'<polyline points="{px}" fill="none" stroke="#1565c0" '
            f'stroke-width="{stroke_w:.2f}" stroke-opacity="{opacity}" '
            f'stroke-linecap="round"/>')

    # Dwell clumps: cluster near-stationary volume on a coarse grid.
    clusters: dict[tuple[int, int], float] = {}
    for seg, length in moving:
        if length >= MIN_MOVE or seg.volume == 0.0:
            continue
        cx = 0.5 * (seg.start[0] + seg.end[0])
        cy = 0.5 * (seg.start[1] + seg.end[1])
        key = (round(cx / CLUMP_GRID), round(cy / CLUMP_GRID))
        clusters[key] = clusters.get(key, 0.0) + seg.volume
    for (kx, ky), volume in sorted(clusters.items()):
        x, y = to_px((kx * CLUMP_GRID, ky * CLUMP_GRID))
        radius = 2.0 * math.sqrt(volume)
        parts.append(
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{radius:.1f}" '
            f'fill="#1565c0" fill-opacity="0.55"/>')

    parts.append("</svg>")
    return "\n".join(parts)
