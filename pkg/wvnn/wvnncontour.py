"""Level curves of a gridded field by marching squares."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from wvnn.wvnnsettings import get_log_level

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

# cell corner order: (i, j), (i+1, j), (i+1, j+1), (i, j+1)
# edges: 0 bottom (i..i+1 at j), 1 right (i+1, j..j+1), 2 top (i..i+1 at j+1), 3 left (i, j..j+1)
_CASES = {
    0: [],
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    6: [(0, 2)],
    7: [(3, 2)],
    8: [(2, 3)],
    9: [(0, 2)],
    11: [(1, 2)],
    12: [(1, 3)],
    13: [(0, 1)],
    14: [(3, 0)],
    15: [],
}


@dataclass
class BoundaryCurve:
    level: float
    points: List[Tuple[float, float]] = field(default_factory=list)
    closed: bool = False

    def __len__(self):
        return len(self.points)

    def to_dict(self):
        return {"level": self.level, "closed": self.closed, "points": [list(p) for p in self.points]}


def _edge_key(i: int, j: int, edge: int):
    if edge == 0:
        return ("h", i, j)
    if edge == 2:
        return ("h", i, j + 1)
    if edge == 3:
        return ("v", i, j)
    return ("v", i + 1, j)


def _crossing(key, x, y, z, level) -> Tuple[float, float]:
    kind, i, j = key
    if kind == "h":
        a, b = z[i, j], z[i + 1, j]
        t = (level - a) / (b - a)
        return float(x[i] + t * (x[i + 1] - x[i])), float(y[j])
    a, b = z[i, j], z[i, j + 1]
    t = (level - a) / (b - a)
    return float(x[i]), float(y[j] + t * (y[j + 1] - y[j]))


def _cell_segments(z: np.ndarray, i: int, j: int, level: float):
    corners = (z[i, j], z[i + 1, j], z[i + 1, j + 1], z[i, j + 1])
    if any(np.isnan(c) for c in corners):
        return []
    case = sum(1 << k for k, c in enumerate(corners) if c >= level)
    if case in (5, 10):
        # saddle, split by the cell centre
        centre_above = sum(corners) / 4 >= level
        if case == 5:
            pairs = [(3, 2), (0, 1)] if centre_above else [(3, 0), (1, 2)]
        else:
            pairs = [(0, 3), (1, 2)] if centre_above else [(0, 1), (2, 3)]
    else:
        pairs = _CASES[case]
    return [(_edge_key(i, j, a), _edge_key(i, j, b)) for a, b in pairs]


def level_curves(x, y, z, level: float) -> List[BoundaryCurve]:
    """Polylines where the bilinear-in-edges interpolant of z equals level.

    ``z[i, j]`` is the value at ``(x[i], y[j])``. NaN corners drop their
    cell, so curves end at gaps and at the grid boundary.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    finite = z[np.isfinite(z)]
    if finite.size == 0 or level < finite.min() or level > finite.max():
        return []

    links: Dict[tuple, List[tuple]] = {}
    above = np.where(np.isnan(z), False, z >= level)
    corners = np.stack([above[:-1, :-1], above[1:, :-1], above[1:, 1:], above[:-1, 1:]])
    mixed = corners.any(axis=0) & ~corners.all(axis=0)
    for i, j in np.argwhere(mixed):
        for a, b in _cell_segments(z, int(i), int(j), level):
            links.setdefault(a, []).append(b)
            links.setdefault(b, []).append(a)

    curves = []
    visited = set()

    def walk(start):
        chain = [start]
        visited.add(start)
        current = start
        while True:
            nxt = [n for n in links[current] if n not in visited]
            if not nxt:
                return chain
            current = nxt[0]
            visited.add(current)
            chain.append(current)

    # open polylines first, starting from their loose ends
    for key in sorted(links):
        if key not in visited and len(links[key]) == 1:
            chain = walk(key)
            curves.append(BoundaryCurve(level, [_crossing(k, x, y, z, level) for k in chain], closed=False))
    for key in sorted(links):
        if key not in visited:
            chain = walk(key)
            points = [_crossing(k, x, y, z, level) for k in chain]
            points.append(points[0])
            curves.append(BoundaryCurve(level, points, closed=True))

    logger.debug(f"Level {level}: {len(curves)} curves from {len(links)} edge crossings")
    return curves


def boundary_curves(t, level: float, field_name: str = "wv_abs") -> List[BoundaryCurve]:
    """Level curves of a two-axis sweep table field."""
    names = list(t.axes)
    if len(names) != 2:
        raise ValueError(f"Level curves need a two-axis table, got axes {names}")
    return level_curves(t.axes[names[0]], t.axes[names[1]], t.field(field_name), level)
