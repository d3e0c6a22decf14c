"""Geometric relations as functions of a sigma table alone.

A predicate never sees coordinates or the geometry object, only the
SigmaMatrix of its point tuple. Evaluating it under another geometry is a
matter of handing it another table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from .calculus import (
    DEGENERATE,
    collinearity_from_sigmas,
    cosine_identity_from_sigmas,
    scalar4_from_sigmas,
    scalar_from_sigmas,
)
from .core import GeometryError, NegativeSigmaError, SigmaMatrix, build_sigma_matrix
from .world_functions import WorldFunction


class RegistryError(GeometryError):
    pass


@dataclass(frozen=True)
class SigmaPredicate:
    """A relation over ``arity`` points; the evaluator returns 0 when it holds."""

    name: str
    arity: int
    evaluator: Callable[[SigmaMatrix], float]

    def __post_init__(self):
        if not isinstance(self.arity, int) or self.arity < 1:
            raise RegistryError(f"arity must be a positive integer, got {self.arity!r}")


def _right_angle(s: SigmaMatrix) -> float:
    return scalar_from_sigmas(s[0, 1], s[0, 2], s[1, 2])


def _collinear(s: SigmaMatrix) -> float:
    return collinearity_from_sigmas(s[0, 1], s[0, 2], s[1, 2])


def _parallel(s: SigmaMatrix) -> float:
    # points: P0, P1, Q0, Q1
    if s[0, 1] < 0 or s[2, 3] < 0:
        raise NegativeSigmaError("parallel residual needs non-negative vector sigmas")
    mu, mw = math.sqrt(2.0 * s[0, 1]), math.sqrt(2.0 * s[2, 3])
    if mu < DEGENERATE or mw < DEGENERATE:
        return 1.0
    dot = scalar4_from_sigmas(s[0, 3], s[1, 2], s[0, 2], s[1, 3])
    return 1.0 - abs(dot / (mu * mw))


def _cosine_identity(s: SigmaMatrix) -> float:
    return cosine_identity_from_sigmas(s[0, 1], s[0, 2], s[1, 2])


BUILTINS = (
    SigmaPredicate("right_angle", 3, _right_angle),
    SigmaPredicate("collinear", 3, _collinear),
    SigmaPredicate("parallel", 4, _parallel),
    SigmaPredicate("cosine_identity", 3, _cosine_identity),
)


class PredicateRegistry:
    """Append-only name -> predicate mapping; built-ins are always present."""

    def __init__(self, entries: Mapping[str, SigmaPredicate] | None = None):
        merged = {p.name: p for p in BUILTINS}
        for name, pred in (entries or {}).items():
            if name in merged and merged[name] is not pred:
                raise RegistryError(f"predicate {name!r} is already registered")
            merged[name] = pred
        self._entries = MappingProxyType(merged)

    @property
    def entries(self) -> Mapping[str, SigmaPredicate]:
        return self._entries

    def __contains__(self, name) -> bool:
        return name in self._entries

    def __getitem__(self, name: str) -> SigmaPredicate:
        try:
            return self._entries[name]
        except KeyError:
            raise RegistryError(f"unknown predicate {name!r}") from None

    def names(self) -> list[str]:
        return list(self._entries)


def default_registry() -> PredicateRegistry:
    return PredicateRegistry()


def register(registry: PredicateRegistry, pred: SigmaPredicate) -> PredicateRegistry:
    """Return a new registry that also holds ``pred``."""
    if pred.name in registry:
        raise RegistryError(f"predicate {pred.name!r} is already registered")
    return PredicateRegistry({**registry.entries, pred.name: pred})


def evaluate(registry: PredicateRegistry, name: str, wf: WorldFunction, points: Sequence) -> float:
    pred = registry[name]
    if len(points) != pred.arity:
        raise RegistryError(f"{name!r} takes {pred.arity} points, got {len(points)}")
    return float(pred.evaluator(build_sigma_matrix(wf, points)))
