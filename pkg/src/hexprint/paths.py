"""Built-in print paths.

A path is a start point plus legs; each leg names the waypoint to slide
to and whether the extruder is on for that leg.  Coordinates are metres
in the print plane, east-north order.
"""

from __future__ import annotations

from dataclasses import dataclass


class UnknownPathError(ValueError):
    def __init__(self, name: str, available: list[str]):
        super().__init__(f"unknown path {name!r}; available: {', '.join(sorted(available))}")
        self.name = name
        self.available = sorted(available)


@dataclass(frozen=True)
class PathLeg:
    target: tuple[float, float]
    extrude: bool = True


@dataclass(frozen=True)
class PrintPath:
    name: str
    start: tuple[float, float]
    legs: tuple[PathLeg, ...]

    def waypoints(self) -> list[tuple[float, float]]:
        return [self.start] + [leg.target for leg in self.legs]

    def corners(self) -> list[tuple[float, float]]:
        """Unique leg arrival points, in first-visit order."""
        seen: list[tuple[float, float]] = []
        for leg in self.legs:
            if leg.target not in seen:
                seen.append(leg.target)
        return seen

    def extruded_polylines(self) -> list[list[tuple[float, float]]]:
        """Target geometry of the bead, split where the extruder is off."""
        runs: list[list[tuple[float, float]]] = []
        current: list[tuple[float, float]] = []
        position = self.start
        for leg in self.legs:
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

    def total_extruded_length(self) -> float:
        total = 0.0
        position = self.start
        for leg in self.legs:
            if leg.extrude:
                dx = leg.target[0] - position[0]
                dy = leg.target[1] - position[1]
                total += (dx * dx + dy * dy) ** 0.5
            position = leg.target
        return total


def _square(side: float) -> tuple[PathLeg, ...]:
    return (
        PathLeg((side, 0.0)),
        PathLeg((side, side)),
        PathLeg((0.0, side)),
        PathLeg((0.0, 0.0)),
    )


# Letters sit in 6 cm x 10 cm boxes with a 4 cm travel hop between them.
_U = [
    PathLeg((0.0, 0.0)),
    PathLeg((0.06, 0.0)),
    PathLeg((0.06, 0.10)),
]
_T = [
    PathLeg((0.10, 0.10), extrude=False),
    PathLeg((0.18, 0.10)),
    PathLeg((0.14, 0.10), extrude=False),
    PathLeg((0.14, 0.0)),
]


def builtin_paths() -> dict[str, PrintPath]:
    return {
        "line": PrintPath("line", (0.0, 0.0), (PathLeg((0.10, 0.0)),)),
        "L": PrintPath("L", (0.0, 0.0), (PathLeg((0.10, 0.0)), PathLeg((0.10, 0.10)))),
        "square10cm": PrintPath("square10cm", (0.0, 0.0), _square(0.10)),
        "UT": PrintPath("UT", (0.0, 0.10), tuple(_U + _T)),
    }


def get_path(name: str) -> PrintPath:
    paths = builtin_paths()
    if name not in paths:
        raise UnknownPathError(name, list(paths))
    return paths[name]
