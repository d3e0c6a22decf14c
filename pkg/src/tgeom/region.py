"""Shortest paths inside a closed simple polygon.

Paths may run along the boundary. Visibility between two points means the
closed segment joining them is covered by the closed polygon; the shortest
path is then found on the visibility graph over the endpoints and the
polygon vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
import shapely
from scipy.sparse.csgraph import shortest_path

from .core import GeometryError

Pair = Tuple[float, float]


@dataclass(frozen=True)
class RegionSpec:
    """A simple polygon, vertices in counterclockwise order."""

    vertices: Tuple[Pair, ...]

    def __post_init__(self):
        try:
            verts = tuple((float(x), float(y)) for x, y in self.vertices)
        except (TypeError, ValueError):
            raise GeometryError("region vertices must be [x, y] pairs") from None
        if len(verts) < 3:
            raise GeometryError(f"region needs at least 3 vertices, got {len(verts)}")
        ring = shapely.LinearRing(verts)
        if not ring.is_simple or not shapely.Polygon(verts).is_valid:
            raise GeometryError("region polygon is not simple")
        if not ring.is_ccw:
            raise GeometryError("region vertices must be counterclockwise")
        object.__setattr__(self, "vertices", verts)

    @property
    def is_convex(self) -> bool:
        poly = shapely.Polygon(self.vertices)
        return poly.convex_hull.difference(poly).area == 0.0


class PolygonPaths:
    def __init__(self, region: RegionSpec):
        self.region = region
        self.polygon = shapely.Polygon(region.vertices)
        shapely.prepare(self.polygon)
        self.vertices = np.array(region.vertices)
        n = len(self.vertices)
        weights = np.zeros((n, n))
        for i in range(n):
            seen = self._visible_many(self.vertices[i], self.vertices)
            for k in np.flatnonzero(seen):
                if k != i:
                    weights[i, k] = np.hypot(*(self.vertices[i] - self.vertices[k]))
        # zero weight means "no edge" to csgraph; coincident vertices cannot occur in a simple ring
        self.vertex_dist = shortest_path(weights, method="D", directed=False)

    def contains(self, p: Sequence[float]) -> bool:
        return bool(shapely.covers(self.polygon, shapely.Point(p)))

    def visible(self, p, q) -> bool:
        if tuple(p) == tuple(q):
            return True
        return bool(shapely.covers(self.polygon, shapely.LineString([p, q])))

    def _visible_many(self, p, targets: np.ndarray) -> np.ndarray:
        p = np.asarray(p, float)
        same = np.all(targets == p, axis=1)
        segs = np.stack([np.broadcast_to(p, targets.shape), targets], axis=1)
        out = np.ones(len(targets), dtype=bool)
        if not same.all():
            out[~same] = shapely.covers(self.polygon, shapely.linestrings(segs[~same]))
        return out

    @lru_cache(maxsize=4096)
    def _vertex_legs(self, p: Pair) -> np.ndarray:
        """Distances from p to each vertex it sees; inf where hidden."""
        seen = self._visible_many(p, self.vertices)
        legs = np.hypot(*(self.vertices - np.array(p)).T)
        legs[~seen] = np.inf
        legs.flags.writeable = False
        return legs

    def path_length(self, p: Pair, q: Pair) -> float:
        """Length of the shortest path from p to q; both must be inside."""
        if self.visible(p, q):
            return float(np.hypot(p[0] - q[0], p[1] - q[1]))
        lp = self._vertex_legs(tuple(p))
        lq = self._vertex_legs(tuple(q))
        total = lp[:, None] + self.vertex_dist + lq[None, :]
        return float(total.min())
