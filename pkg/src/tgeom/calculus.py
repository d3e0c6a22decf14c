"""Euclidean notions written purely in terms of world-function values.

Every quantity here is a fixed algebraic expression in sigma. Substituting
a different world function yields the same notion in the deformed geometry.
The private ``_from_sigmas`` helpers take raw sigma values (scalars or
numpy arrays) so that the registry and the explorer share one formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import GeometryError, NegativeSigmaError, Point, VectorPQ, as_point
from .world_functions import WorldFunction

DEGENERATE = 1e-12
FLOOR = 1e-30


def scalar_from_sigmas(s_ab, s_ac, s_bc):
    """(AB.AC) from sigma(A,B), sigma(A,C), sigma(B,C)."""
    return s_ab + s_ac - s_bc


def scalar4_from_sigmas(s_p0q1, s_p1q0, s_p0q0, s_p1q1):
    """(P0P1.Q0Q1) for vectors anchored at different points."""
    return s_p0q1 + s_p1q0 - s_p0q0 - s_p1q1


def collinearity_from_sigmas(s_01, s_0r, s_1r):
    """Gram determinant |P0P1|^2 |P0R|^2 - (P0P1.P0R)^2."""
    dot = scalar_from_sigmas(s_01, s_0r, s_1r)
    return (2.0 * s_01) * (2.0 * s_0r) - dot * dot


def cosine_identity_from_sigmas(s_ab, s_ac, s_bc):
    """|BC|^2 - (|AB|^2 + |AC|^2 - 2 (AB.AC)), identically zero."""
    return 2.0 * s_bc - (2.0 * s_ab + 2.0 * s_ac - 2.0 * scalar_from_sigmas(s_ab, s_ac, s_bc))


def _root(s: float) -> float:
    if s < 0:
        raise NegativeSigmaError(f"sigma = {s!r} < 0 has no real magnitude")
    return math.sqrt(2.0 * s)


def _pts(wf: WorldFunction, *points) -> list[Point]:
    return [wf.validate(p, index=i) for i, p in enumerate(points)]


def _vec(v) -> VectorPQ:
    return v if isinstance(v, VectorPQ) else VectorPQ(as_point(v[0]), as_point(v[1]))


def squared_magnitude(wf: WorldFunction, v: VectorPQ) -> float:
    """|PQ|^2 = 2 sigma(P, Q); may be negative in non-metric geometries."""
    v = _vec(v)
    tail, head = _pts(wf, v.tail, v.head)
    return 2.0 * wf.raw(tail, head)


def magnitude(wf: WorldFunction, v: VectorPQ) -> float:
    v = _vec(v)
    tail, head = _pts(wf, v.tail, v.head)
    return _root(wf.raw(tail, head))


def scalar_product(wf: WorldFunction, a, b, c) -> float:
    """Scalar product (AB.AC) of two vectors sharing the origin A."""
    a, b, c = _pts(wf, a, b, c)
    return scalar_from_sigmas(wf.raw(a, b), wf.raw(a, c), wf.raw(b, c))


def scalar_product_general(wf: WorldFunction, u: VectorPQ, w: VectorPQ) -> float:
    """Scalar product of u = P0P1 and w = Q0Q1 with arbitrary origins.

    Reduces to :func:`scalar_product` when the tails coincide, and to the
    coordinate dot product (p1 - p0).(q1 - q0) in Euclidean space.
    """
    u, w = _vec(u), _vec(w)
    p0, p1, q0, q1 = _pts(wf, u.tail, u.head, w.tail, w.head)
    return scalar4_from_sigmas(wf.raw(p0, q1), wf.raw(p1, q0), wf.raw(p0, q0), wf.raw(p1, q1))


@dataclass(frozen=True)
class AngleResult:
    cosine: float
    angle_radians: float
    degenerate: bool = False
    # how far |cosine| exceeded 1 before clamping, when by more than 1e-9
    clamp_excess: float = 0.0


def _angle(dot: float, mu: float, mw: float) -> AngleResult:
    if mu < DEGENERATE or mw < DEGENERATE:
        return AngleResult(0.0, math.pi / 2, degenerate=True)
    cos = dot / (mu * mw)
    excess = abs(cos) - 1.0
    clamped = min(1.0, max(-1.0, cos))
    return AngleResult(clamped, math.acos(clamped), clamp_excess=excess if excess > 1e-9 else 0.0)


def cosine_angle(wf: WorldFunction, a, b, c) -> AngleResult:
    """Cosine of the angle BAC, from (AB.AC) / (|AB| |AC|)."""
    a, b, c = _pts(wf, a, b, c)
    s_ab, s_ac, s_bc = wf.raw(a, b), wf.raw(a, c), wf.raw(b, c)
    return _angle(scalar_from_sigmas(s_ab, s_ac, s_bc), _root(s_ab), _root(s_ac))


def is_right_angle(wf: WorldFunction, a, b, c, tol: float = 1e-9) -> bool:
    if tol <= 0:
        raise GeometryError("tol must be positive")
    a, b, c = _pts(wf, a, b, c)
    s_ab, s_ac, s_bc = wf.raw(a, b), wf.raw(a, c), wf.raw(b, c)
    return abs(scalar_from_sigmas(s_ab, s_ac, s_bc)) <= tol * max(s_ab + s_ac, FLOOR)


def collinearity_residual(wf: WorldFunction, p0, p1, r) -> float:
    """F2 residual; zero exactly when R lies on the tube through P0 and P1."""
    p0, p1, r = _pts(wf, p0, p1, r)
    if p0 == p1:
        raise GeometryError("P0 and P1 must be distinct")
    return collinearity_from_sigmas(wf.raw(p0, p1), wf.raw(p0, r), wf.raw(p1, r))


def parallel_cosine(wf: WorldFunction, u: VectorPQ, w: VectorPQ) -> float:
    """Signed cosine (u.w) / (|u| |w|); raises on degenerate vectors.

    Not clamped: in deformed geometries |cos| may exceed 1.
    """
    u, w = _vec(u), _vec(w)
    p0, p1, q0, q1 = _pts(wf, u.tail, u.head, w.tail, w.head)
    mu, mw = _root(wf.raw(p0, p1)), _root(wf.raw(q0, q1))
    if mu < DEGENERATE or mw < DEGENERATE:
        raise GeometryError("parallelism is undefined for a degenerate vector")
    dot = scalar4_from_sigmas(wf.raw(p0, q1), wf.raw(p1, q0), wf.raw(p0, q0), wf.raw(p1, q1))
    return dot / (mu * mw)


def is_parallel(wf: WorldFunction, u: VectorPQ, w: VectorPQ, tol: float = 1e-9) -> bool:
    """True when |cos(u, w)| >= 1 - tol; see :func:`orientation` for the sign."""
    return abs(parallel_cosine(wf, u, w)) >= 1.0 - tol


def orientation(wf: WorldFunction, u: VectorPQ, w: VectorPQ) -> int:
    """+1 for same direction, -1 for opposite, 0 for orthogonal."""
    return int(np.sign(scalar_product_general(wf, u, w)))


@dataclass(frozen=True, eq=False)
class GramReport:
    matrix: np.ndarray
    eigenvalues: np.ndarray  # ascending
    min_eigenvalue: float
    negative_count: int
    embeddable: bool
    rank: int
    tol_embed: float

    def as_dict(self) -> dict:
        return {
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "min_eigenvalue": self.min_eigenvalue,
            "negative_count": self.negative_count,
            "embeddable": self.embeddable,
            "rank": self.rank,
            "tol_embed": self.tol_embed,
        }


def gram_report(
    wf: WorldFunction, base, others: Sequence, tol_embed: Optional[float] = None
) -> GramReport:
    """Gram matrix of scalar products (P0Pi.P0Pk) at ``base`` and its spectrum.

    The points embed isometrically into a flat space iff the matrix is
    positive semidefinite; the number of clearly positive eigenvalues is the
    smallest such dimension. ``tol_embed`` defaults to 1e-8 times the largest
    eigenvalue magnitude.
    """
    base = wf.validate(base, index=0)
    pts = [wf.validate(p, index=i + 1) for i, p in enumerate(others)]
    if not pts:
        raise GeometryError("gram_report needs at least one other point")
    for i, p in enumerate(pts):
        if p == base:
            raise GeometryError(f"point {i + 1} coincides with the base point")
    n = len(pts)
    to_base = [wf.raw(base, p) for p in pts]
    G = np.empty((n, n))
    for i in range(n):
        for k in range(n):
            s_ik = 0.0 if i == k else wf.raw(pts[i], pts[k])
            G[i, k] = scalar_from_sigmas(to_base[i], to_base[k], s_ik)
    if not wf.symmetric:
        G = 0.5 * (G + G.T)
    eig = np.linalg.eigvalsh(G)
    if tol_embed is None:
        tol_embed = max(1e-8 * float(np.max(np.abs(eig))), FLOOR)
    negative = int(np.sum(eig < -tol_embed))
    return GramReport(
        matrix=G,
        eigenvalues=eig,
        min_eigenvalue=float(eig[0]),
        negative_count=negative,
        embeddable=negative == 0,
        rank=int(np.sum(eig > tol_embed)),
        tol_embed=float(tol_embed),
    )
