"""Desk-scale experiments: tube width, remote-parallelism intransitivity and
flat embeddability of a nonconvex region's intrinsic distances.

All outputs are deterministic functions of the inputs and the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .calculus import (
    DEGENERATE,
    GramReport,
    collinearity_from_sigmas,
    gram_report,
    is_parallel,
    parallel_cosine,
    scalar4_from_sigmas,
)
from .core import Coordinate, GeometryError, Point, VectorPQ
from .region import RegionSpec
from .world_functions import WorldFunction, polygon_region_sigma


def _need_coordinates(wf: WorldFunction) -> int:
    if not wf.is_coordinate:
        raise GeometryError(f"{wf.name} has a discrete domain; explorer needs coordinates")
    return wf.dimension


# ---------------------------------------------------------------- tubes


@dataclass(frozen=True)
class TubeGrid:
    extent: float = 1.0
    spacing: float = 0.01
    # lattice dimension (1 axial + dimension-1 radial); defaults to the ambient one
    dimension: Optional[int] = None


@dataclass(frozen=True)
class TubeSample:
    point: Point
    residual: float
    axial: float
    radial: float


@dataclass(frozen=True, eq=False)
class TubeReport:
    geometry: str
    p0: tuple
    p1: tuple
    tol: float
    points: np.ndarray
    residual: np.ndarray
    axial: np.ndarray
    radial: np.ndarray
    member: np.ndarray
    width: float
    member_count: int

    @property
    def samples(self) -> list[TubeSample]:
        return [
            TubeSample(Coordinate(tuple(p)), float(r), float(a), float(d))
            for p, r, a, d in zip(self.points, self.residual, self.axial, self.radial)
        ]

    def summary(self) -> dict:
        return {
            "p0": list(self.p0),
            "p1": list(self.p1),
            "tol": self.tol,
            "sample_count": int(len(self.residual)),
            "member_count": self.member_count,
            "width": self.width,
        }


def _orthonormal_frame(axis: np.ndarray, count: int) -> np.ndarray:
    """``count`` unit vectors orthogonal to ``axis`` and to each other."""
    dim = len(axis)
    basis = [axis]
    for e in np.eye(dim):
        v = e - sum(np.dot(e, b) * b for b in basis)
        n = np.linalg.norm(v)
        if n > 1e-8:
            basis.append(v / n)
        if len(basis) == count + 1:
            break
    return np.array(basis[1:]).reshape(count, dim)


def tube_lattice(p0, p1, grid: TubeGrid, seed: int = 0):
    """Sample positions around the segment p0-p1 in its local frame.

    Returns (points, axial, radial). Axial positions cover
    [-extent, L + extent] with seeded jitter of up to half a spacing;
    radial offsets stay on the lattice so that the axis itself is sampled.
    """
    p0 = np.asarray(p0, float)
    p1 = np.asarray(p1, float)
    if grid.spacing <= 0 or not math.isfinite(grid.spacing):
        raise GeometryError(f"spacing must be positive, got {grid.spacing!r}")
    if grid.extent < 0:
        raise GeometryError(f"extent must be non-negative, got {grid.extent!r}")
    ambient = len(p0)
    dim = ambient if grid.dimension is None else int(grid.dimension)
    if not 1 <= dim <= ambient:
        raise GeometryError(f"lattice dimension must be in 1..{ambient}, got {dim}")
    length = float(np.linalg.norm(p1 - p0))
    if length == 0.0:
        raise GeometryError("P0 and P1 must be distinct")
    axis = (p1 - p0) / length
    normals = _orthonormal_frame(axis, dim - 1)

    h, ext = grid.spacing, grid.extent
    n_ax = int(math.floor((length + 2 * ext) / h + 1e-9)) + 1
    axial_base = -ext + h * np.arange(n_ax)
    k = int(math.floor(ext / h + 1e-9))
    radial_1d = h * np.arange(-k, k + 1)
    mesh = np.meshgrid(axial_base, *([radial_1d] * (dim - 1)), indexing="ij")
    offsets = np.stack([m.ravel() for m in mesh], axis=-1)

    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-0.5 * h, 0.5 * h, size=len(offsets))
    axial = np.clip(offsets[:, 0] + jitter, -ext, length + ext)
    radial_off = offsets[:, 1:]
    points = p0 + axial[:, None] * axis + radial_off @ normals
    radial = np.sqrt(np.sum(radial_off**2, axis=-1))
    return points, axial, radial


def sample_tube(
    wf: WorldFunction,
    p0,
    p1,
    grid: TubeGrid = TubeGrid(),
    tol: float = 1e-9,
    seed: int = 0,
) -> TubeReport:
    """Map the tube through P0 and P1: points whose collinearity residual
    is at most tol * |P0P1|^4.

    Width is the largest Euclidean distance from the P0-P1 axis among the
    members, measured in ambient coordinates.
    """
    _need_coordinates(wf)
    a = wf.validate(p0, index=0)
    b = wf.validate(p1, index=1)
    if a == b:
        raise GeometryError("P0 and P1 must be distinct")
    points, axial, radial = tube_lattice(a.coords, b.coords, grid, seed)
    P0 = np.asarray(a.coords)[None, :]
    P1 = np.asarray(b.coords)[None, :]
    s01 = wf.raw(a, b)
    s0r = wf.sigma_many(P0, points)
    s1r = wf.sigma_many(P1, points)
    residual = collinearity_from_sigmas(s01, s0r, s1r)
    member = residual <= tol * (2.0 * s01) ** 2
    width = float(radial[member].max()) if member.any() else 0.0
    return TubeReport(
        geometry=wf.name,
        p0=a.coords,
        p1=b.coords,
        tol=tol,
        points=points,
        residual=residual,
        axial=axial,
        radial=radial,
        member=member,
        width=width,
        member_count=int(member.sum()),
    )


# ---------------------------------------------------------------- parallelism


@dataclass(frozen=True)
class CounterexampleReport:
    found: bool
    tol: float
    trials: int
    u: Optional[VectorPQ] = None
    v: Optional[VectorPQ] = None
    w: Optional[VectorPQ] = None
    cos_uv: Optional[float] = None
    cos_vw: Optional[float] = None
    cos_uw: Optional[float] = None
    trial_index: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"found": self.found, "tol": self.tol, "trials": self.trials}
        if self.found:
            for key in ("u", "v", "w"):
                vec = getattr(self, key)
                out[key] = [list(vec.tail.coords), list(vec.head.coords)]
            out.update(
                cos_uv=self.cos_uv, cos_vw=self.cos_vw, cos_uw=self.cos_uw, trial_index=self.trial_index
            )
        return out


def chained_cosine_bound(tol: float) -> float:
    """Smallest |cos(u, w)| compatible with u || v, v || w in flat space.

    Angles between lines obey a triangle inequality, so two tol-parallel
    links can tilt u against w by at most twice the tolerance angle.
    """
    alpha = math.acos(min(1.0, max(-1.0, 1.0 - tol)))
    return math.cos(min(2.0 * alpha, math.pi / 2))


def _cos_many(wf, p0, p1, q0, q1):
    s_u = wf.sigma_many(p0, p1)
    s_w = wf.sigma_many(q0, q1)
    ok = (s_u > 0) & (s_w > 0)
    mu = np.sqrt(2.0 * np.where(ok, s_u, 1.0))
    mw = np.sqrt(2.0 * np.where(ok, s_w, 1.0))
    ok &= (mu >= DEGENERATE) & (mw >= DEGENERATE)
    dot = scalar4_from_sigmas(
        wf.sigma_many(p0, q1), wf.sigma_many(p1, q0), wf.sigma_many(p0, q0), wf.sigma_many(p1, q1)
    )
    return dot / (mu * mw), ok


def find_intransitivity(
    wf: WorldFunction,
    trials: int = 10_000,
    box: float = 3.0,
    tol: float = 1e-3,
    seed: int = 0,
) -> CounterexampleReport:
    """Seeded random search for u || v, v || w with u not parallel to w.

    Each trial draws u with random endpoints in [-box, box]^n, then v and
    w as translates of u whose heads are perturbed at a random log-uniform
    scale. A witness must also beat :func:`chained_cosine_bound`, so the
    mere accumulation of tolerance never counts; in Euclidean space the
    search therefore cannot succeed. The first qualifying trial (by index)
    is re-checked with :func:`is_parallel` before it is reported.
    """
    dim = _need_coordinates(wf)
    if trials < 0:
        raise GeometryError("trials must be non-negative")
    if trials == 0:
        return CounterexampleReport(False, tol, 0)
    rng = np.random.default_rng(seed)
    shape = (trials, dim)
    a = rng.uniform(-box, box, shape)
    t = rng.uniform(-box, box, shape)
    b = rng.uniform(-box, box, shape)
    c = rng.uniform(-box, box, shape)
    scale = box * 10.0 ** rng.uniform(-3.0, 0.0, (trials, 1))
    e1 = rng.normal(size=shape) * scale
    e2 = rng.normal(size=shape) * scale
    u = (a, a + t)
    v = (b, b + t + e1)
    w = (c, c + t + e1 + e2)

    with np.errstate(invalid="ignore", divide="ignore"):
        c_uv, ok_uv = _cos_many(wf, *u, *v)
        c_vw, ok_vw = _cos_many(wf, *v, *w)
        c_uw, ok_uw = _cos_many(wf, *u, *w)
    bound = chained_cosine_bound(tol)
    hit = (
        ok_uv & ok_vw & ok_uw
        & (np.abs(c_uv) >= 1.0 - tol)
        & (np.abs(c_vw) >= 1.0 - tol)
        & (np.abs(c_uw) < bound)
    )
    for i in np.flatnonzero(hit):
        vecs = [
            VectorPQ(wf.validate(x[0][i]), wf.validate(x[1][i])) for x in (u, v, w)
        ]
        try:
            if not (is_parallel(wf, vecs[0], vecs[1], tol) and is_parallel(wf, vecs[1], vecs[2], tol)):
                continue
            if is_parallel(wf, vecs[0], vecs[2], tol):
                continue
            cosines = [parallel_cosine(wf, vecs[i0], vecs[i1]) for i0, i1 in ((0, 1), (1, 2), (0, 2))]
        except GeometryError:
            continue
        return CounterexampleReport(True, tol, trials, *vecs, *cosines, trial_index=int(i))
    return CounterexampleReport(False, tol, trials)


# ---------------------------------------------------------------- convexity


def convexity_demo(region: RegionSpec | Sequence, base, probes: Sequence) -> GramReport:
    """Gram spectrum of shortest-path sigma inside ``region`` at ``base``."""
    return gram_report(polygon_region_sigma(region), base, probes)
