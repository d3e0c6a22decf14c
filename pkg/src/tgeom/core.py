"""Shared vocabulary: points, vectors and world-function tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence, Tuple, Union

import numpy as np

if TYPE_CHECKING:
    from .world_functions import WorldFunction


class GeometryError(ValueError):
    """Base class for rejected geometric input."""


class DomainError(GeometryError):
    """A point does not belong to the domain of a world function."""

    def __init__(self, message: str, index: int | None = None):
        if index is not None:
            message = f"point {index}: {message}"
        super().__init__(message)
        self.index = index


class NegativeSigmaError(GeometryError):
    """A square root of a negative world-function value was requested."""


@dataclass(frozen=True)
class Coordinate:
    coords: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


@dataclass(frozen=True)
class Discrete:
    id: int

    def __post_init__(self):
        if isinstance(self.id, bool) or int(self.id) != self.id or self.id < 0:
            raise GeometryError(f"discrete point id must be a non-negative integer, got {self.id!r}")
        object.__setattr__(self, "id", int(self.id))


Point = Union[Coordinate, Discrete]
PointTuple = Tuple[Point, ...]


class VectorPQ(NamedTuple):
    """The ordered pair (tail, head) standing for the vector tail->head."""

    tail: Point
    head: Point


def as_point(obj) -> Point:
    """Coerce ints to discrete points and sequences of numbers to coordinates."""
    if isinstance(obj, (Coordinate, Discrete)):
        return obj
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return Discrete(int(obj))
    try:
        coords = tuple(float(c) for c in obj)
    except TypeError:
        raise GeometryError(f"cannot interpret {obj!r} as a point") from None
    if not coords:
        raise GeometryError("coordinate point needs at least one coordinate")
    return Coordinate(coords)


def as_points(objs: Iterable) -> PointTuple:
    return tuple(as_point(o) for o in objs)


def vector(tail, head) -> VectorPQ:
    return VectorPQ(as_point(tail), as_point(head))


@dataclass(frozen=True, eq=False)
class SigmaMatrix:
    """Pairwise world-function values over a point tuple.

    ``ordered`` is True when entries (i, k) and (k, i) were evaluated
    independently, i.e. the source geometry is not declared symmetric.
    """

    values: np.ndarray
    ordered: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise GeometryError(f"sigma table must be square, got shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, key):
        return self.values[key]

    def __eq__(self, other):
        if not isinstance(other, SigmaMatrix):
            return NotImplemented
        return self.ordered == other.ordered and np.array_equal(self.values, other.values)

    __hash__ = None


def build_sigma_matrix(wf: WorldFunction, points: Sequence) -> SigmaMatrix:
    """Tabulate sigma(P_i, P_k) over ``points``.

    The diagonal is exactly zero. For symmetric geometries only the upper
    triangle is evaluated and mirrored, so the result is symmetric bit for bit.
    """
    pts = [wf.validate(p, index=i) for i, p in enumerate(points)]
    n = len(pts)
    if n == 0:
        raise GeometryError("point tuple must be non-empty")
    values = np.zeros((n, n))
    for i in range(n):
        for k in range(i + 1, n):
            values[i, k] = wf.raw(pts[i], pts[k])
            if wf.symmetric:
                values[k, i] = values[i, k]
            else:
                values[k, i] = wf.raw(pts[k], pts[i])
    return SigmaMatrix(values, ordered=not wf.symmetric)
