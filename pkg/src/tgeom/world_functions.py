"""Concrete geometries, each given by nothing but its world function.

A world function sigma(P, Q) is half the squared distance for metric
geometries; the only hard requirement is sigma(P, P) = 0.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from .core import (
    Coordinate,
    Discrete,
    DomainError,
    GeometryError,
    Point,
    SigmaMatrix,
    as_point,
)
from .region import PolygonPaths, RegionSpec


class ConfigError(GeometryError):
    """A geometry configuration could not be parsed or validated."""


@dataclass(frozen=True)
class CoordinateDomain:
    dimension: int


@dataclass(frozen=True)
class DiscreteDomain:
    size: int


Domain = Union[CoordinateDomain, DiscreteDomain]

Evaluator = Callable[[Point, Point], float]
BatchEvaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class WorldFunction:
    """A geometry: a named world function over a declared point domain.

    ``evaluator`` receives points that already passed :meth:`validate`.
    ``batch`` optionally evaluates row-wise over (N, dim) coordinate arrays
    and must agree with ``evaluator`` up to rounding.
    """

    name: str
    domain: Domain
    symmetric: bool
    evaluator: Evaluator
    batch: Optional[BatchEvaluator] = None
    canonical: Callable[[Point], Point] = field(default=lambda p: p, repr=False)
    # the RegionSpec or sigma table the geometry was built from, when there is one
    source: Any = field(default=None, repr=False)
    point_names: Optional[tuple] = None

    @property
    def is_coordinate(self) -> bool:
        return isinstance(self.domain, CoordinateDomain)

    @property
    def dimension(self) -> int:
        if not self.is_coordinate:
            raise GeometryError(f"{self.name} is not a coordinate geometry")
        return self.domain.dimension

    def validate(self, p, index: int | None = None) -> Point:
        """Return the canonical form of ``p`` or raise :class:`DomainError`."""
        try:
            p = as_point(p)
        except GeometryError as exc:
            raise DomainError(str(exc), index) from None
        if isinstance(self.domain, CoordinateDomain):
            if not isinstance(p, Coordinate):
                raise DomainError(f"{self.name} expects coordinate points", index)
            if p.dimension != self.domain.dimension:
                raise DomainError(
                    f"expected dimension {self.domain.dimension}, got {p.dimension}", index
                )
            if not all(math.isfinite(c) for c in p.coords):
                raise DomainError("coordinates must be finite", index)
        else:
            if not isinstance(p, Discrete):
                raise DomainError(f"{self.name} expects discrete point ids", index)
            if p.id >= self.domain.size:
                raise DomainError(f"id {p.id} out of range 0..{self.domain.size - 1}", index)
        try:
            return self.canonical(p)
        except DomainError as exc:
            raise DomainError(str(exc), index) from None

    def raw(self, p: Point, q: Point) -> float:
        return self.evaluator(p, q)

    def __call__(self, p, q) -> float:
        return self.evaluator(self.validate(p, 0), self.validate(q, 1))

    def sigma_many(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        """Row-wise sigma over coordinate arrays (broadcast to a common shape)."""
        P, Q = np.broadcast_arrays(np.asarray(P, float), np.asarray(Q, float))
        if self.batch is not None:
            return self.batch(P, Q)
        out = np.empty(P.shape[0])
        for i in range(P.shape[0]):
            out[i] = self(P[i], Q[i])
        return out


def euclidean_sigma(dimension: int) -> WorldFunction:
    if isinstance(dimension, bool) or int(dimension) != dimension or dimension < 1:
        raise GeometryError(f"dimension must be a positive integer, got {dimension!r}")
    dimension = int(dimension)

    def sigma(p: Coordinate, q: Coordinate) -> float:
        return 0.5 * sum((a - b) ** 2 for a, b in zip(p.coords, q.coords))

    def batch(P, Q):
        return 0.5 * np.sum((P - Q) ** 2, axis=-1)

    return WorldFunction(f"euclidean({dimension})", CoordinateDomain(dimension), True, sigma, batch)


@dataclass(frozen=True)
class DistortionParams:
    d: float

    def __post_init__(self):
        if not (isinstance(self.d, (int, float)) and math.isfinite(self.d)) or self.d < 0:
            raise GeometryError(f"distortion d must be a finite real >= 0, got {self.d!r}")


def distorted_sigma(base: WorldFunction, params: DistortionParams | float) -> WorldFunction:
    """Lower sigma by a constant ``d`` between every pair of distinct points.

    Two points coincide when the base sigma between them vanishes. With
    d > 0 the result can be negative for close points and is not
    isometrically embeddable in any Euclidean space.
    """
    if not isinstance(params, DistortionParams):
        params = DistortionParams(params)
    if not base.is_coordinate:
        raise GeometryError("distorted_sigma needs a coordinate base geometry")
    d = float(params.d)

    def sigma(p, q):
        s = base.raw(p, q)
        return 0.0 if s == 0.0 else s - d

    batch = None
    if base.batch is not None:
        def batch(P, Q):
            s = base.batch(P, Q)
            return np.where(s == 0.0, 0.0, s - d)

    return WorldFunction(
        f"distorted({base.name}, d={d!r})", base.domain, base.symmetric, sigma, batch, base.canonical
    )


def polygon_region_sigma(region: RegionSpec | Sequence) -> WorldFunction:
    """Half the squared length of the shortest path staying in the closed region."""
    if not isinstance(region, RegionSpec):
        region = RegionSpec(tuple(region))
    paths = PolygonPaths(region)

    def canonical(p: Coordinate) -> Coordinate:
        if not paths.contains(p.coords):
            raise DomainError(f"{p.coords} lies outside the region")
        return p

    def sigma(p: Coordinate, q: Coordinate) -> float:
        a, b = p.coords, q.coords
        if a == b:
            return 0.0
        if b < a:
            a, b = b, a
        if paths.visible(a, b):
            return 0.5 * ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2)
        return 0.5 * paths.path_length(a, b) ** 2

    return WorldFunction(
        f"region({len(region.vertices)} vertices)", CoordinateDomain(2), True, sigma, None, canonical, region
    )


def _project(p: Coordinate) -> Coordinate:
    norm = math.sqrt(sum(c * c for c in p.coords))
    if norm == 0.0:
        raise DomainError("zero vector has no projection onto the sphere")
    if norm == 1.0:
        return p
    return Coordinate(tuple(c / norm for c in p.coords))


def _central_angle(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    cross = np.linalg.norm(np.cross(P, Q), axis=-1)
    return np.arctan2(cross, np.sum(P * Q, axis=-1))


def sphere_sigma(radius: float) -> WorldFunction:
    """Great-circle geometry on a sphere; ambient 3D inputs are projected radially."""
    if not (isinstance(radius, (int, float)) and math.isfinite(radius)) or radius <= 0:
        raise GeometryError(f"radius must be a positive real, got {radius!r}")
    r = float(radius)

    def sigma(p: Coordinate, q: Coordinate) -> float:
        if p == q:
            return 0.0
        (a1, a2, a3), (b1, b2, b3) = p.coords, q.coords
        cross = math.sqrt((a2 * b3 - a3 * b2) ** 2 + (a3 * b1 - a1 * b3) ** 2 + (a1 * b2 - a2 * b1) ** 2)
        ang = math.atan2(cross, a1 * b1 + a2 * b2 + a3 * b3)
        return 0.5 * (r * ang) ** 2

    def batch(P, Q):
        nP = np.linalg.norm(P, axis=-1, keepdims=True)
        nQ = np.linalg.norm(Q, axis=-1, keepdims=True)
        if np.any(nP == 0) or np.any(nQ == 0):
            raise DomainError("zero vector has no projection onto the sphere")
        return 0.5 * (r * _central_angle(P / nP, Q / nQ)) ** 2

    return WorldFunction(f"sphere(r={r!r})", CoordinateDomain(3), True, sigma, batch, _project)


def tabulated_sigma(table: SigmaMatrix | Sequence, names: Optional[Sequence[str]] = None) -> WorldFunction:
    values = table.values if isinstance(table, SigmaMatrix) else np.asarray(table, dtype=float)
    values = np.array(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise GeometryError(f"sigma table must be square, got shape {values.shape}")
    n = values.shape[0]
    if n == 0:
        raise GeometryError("sigma table is empty")
    if not np.all(np.isfinite(values)):
        raise GeometryError("sigma table contains non-finite values")
    for i in range(n):
        if abs(values[i, i]) > 1e-12:
            raise GeometryError(f"diagonal entry {i} is {values[i, i]!r}, expected 0")
        values[i, i] = 0.0
    if names is not None and len(names) != n:
        raise GeometryError(f"{len(names)} names given for {n} points")
    values.flags.writeable = False
    symmetric = bool(np.array_equal(values, values.T))

    def sigma(p: Discrete, q: Discrete) -> float:
        return float(values[p.id, q.id])

    return WorldFunction(
        f"tabulated({n})", DiscreteDomain(n), symmetric, sigma,
        source=values, point_names=tuple(names) if names is not None else None,
    )


def read_sigma_csv(source: Union[str, Path, io.TextIOBase]) -> SigmaMatrix:
    """Read a sigma table: optional ``n=<count>`` header, then n rows of n values."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_sigma_csv(fh)
    rows = [r for r in csv.reader(source) if r and any(c.strip() for c in r)]
    declared = None
    if rows and rows[0][0].strip().startswith("n="):
        try:
            declared = int(rows[0][0].strip()[2:])
        except ValueError:
            raise GeometryError(f"line 1: bad header {rows[0][0]!r}") from None
        rows = rows[1:]
    values = []
    for lineno, row in enumerate(rows, start=2 if declared is not None else 1):
        try:
            values.append([float(c) for c in row])
        except ValueError:
            raise GeometryError(f"line {lineno}: non-numeric entry in {row!r}") from None
        if len(values[-1]) != len(rows):
            raise GeometryError(f"line {lineno}: expected {len(rows)} values, got {len(row)}")
    if declared is not None and declared != len(values):
        raise GeometryError(f"header declares n={declared} but {len(values)} rows follow")
    return SigmaMatrix(np.array(values, dtype=float).reshape(len(values), len(values)))


def write_sigma_csv(table: SigmaMatrix, dest: Union[str, Path, io.TextIOBase]) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            return write_sigma_csv(table, fh)
    dest.write(f"n={table.size}\n")
    for row in table.values:
        dest.write(",".join(repr(float(v)) for v in row) + "\n")


GEOMETRY_TYPES = {
    "euclidean": ["dimension"],
    "distorted": ["base", "d"],
    "region": ["vertices"],
    "sphere": ["radius"],
    "tabulated": ["path"],
}


def _field(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise ConfigError(f"{where}: missing field {key!r}")
    return cfg[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def geometry_from_config(cfg, base_dir: Union[str, Path, None] = None, where: str = "$") -> WorldFunction:
    """Build a geometry from an already-parsed config mapping."""
    if not isinstance(cfg, dict):
        raise ConfigError(f"{where}: expected an object, got {type(cfg).__name__}")
    kind = _field(cfg, "type", where)
    if kind not in GEOMETRY_TYPES:
        raise ConfigError(f"{where}.type: unknown geometry type {kind!r}")
    unknown = set(cfg) - {"type", *GEOMETRY_TYPES[kind]}
    if unknown:
        raise ConfigError(f"{where}: unexpected field(s) {sorted(unknown)} for type {kind!r}")
    try:
        if kind == "euclidean":
            dim = _field(cfg, "dimension", where)
            if isinstance(dim, bool) or not isinstance(dim, int):
                raise ConfigError(f"{where}.dimension: expected an integer, got {dim!r}")
            return euclidean_sigma(dim)
        if kind == "distorted":
            base = geometry_from_config(_field(cfg, "base", where), base_dir, f"{where}.base")
            d = _number(_field(cfg, "d", where), f"{where}.d")
            return distorted_sigma(base, DistortionParams(d))
        if kind == "region":
            verts = _field(cfg, "vertices", where)
            if not isinstance(verts, list) or not all(isinstance(v, list) and len(v) == 2 for v in verts):
                raise ConfigError(f"{where}.vertices: expected a list of [x, y] pairs")
            return polygon_region_sigma(RegionSpec(tuple(tuple(_number(c, f"{where}.vertices") for c in v) for v in verts)))
        if kind == "sphere":
            return sphere_sigma(_number(_field(cfg, "radius", where), f"{where}.radius"))
        path = _field(cfg, "path", where)
        if not isinstance(path, str):
            raise ConfigError(f"{where}.path: expected a string")
        full = Path(base_dir or ".") / path
        try:
            return tabulated_sigma(read_sigma_csv(full))
        except OSError as exc:
            raise ConfigError(f"{where}.path: cannot read {str(full)!r}: {exc.strerror}") from None
    except ConfigError:
        raise
    except GeometryError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def load_geometry(config_text: str, base_dir: Union[str, Path, None] = None) -> WorldFunction:
    """Parse a JSON geometry config and build the geometry it describes.

    Relative tabulated paths resolve against ``base_dir`` (default: cwd).
    """
    try:
        cfg = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return geometry_from_config(cfg, base_dir)
