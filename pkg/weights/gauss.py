"""
Configurations and the product Gauss map of a labelled graph.

Internal vertices are complex points with positive imaginary part. With two
external vertices the gauge pins them to 0 and 1. For the capped-off wheel
spaces the single external vertex is pinned to ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from graphs.core import GraphError, LabelledGraph

from .angles import AngleMapKind, angle_gradients, angles, wrap

BOUNDARY = "boundary"
WHEEL = "wheel"

GAUGES = {BOUNDARY: (0.0, 1.0), WHEEL: (1j,)}


@dataclass(frozen=True, eq=False)
class Configuration:
    internal: np.ndarray
    external: np.ndarray
    gauge: str = BOUNDARY

    def __post_init__(self):
        internal = np.asarray(self.internal, dtype=complex)
        external = np.asarray(self.external, dtype=complex)
        object.__setattr__(self, "internal", internal)
        object.__setattr__(self, "external", external)
        if np.any(internal.imag <= 0):
            raise GraphError("internal vertices must lie in the open upper half-plane")
        points = self.points
        if len(np.unique(points)) != len(points):
            raise GraphError("configuration points must be pairwise distinct")

    @classmethod
    def gauged(cls, internal: Sequence[complex], gauge: str = BOUNDARY) -> "Configuration":
        return cls(np.asarray(internal, dtype=complex), np.asarray(GAUGES[gauge]), gauge)

    @property
    def points(self) -> np.ndarray:
        return np.concatenate([self.internal, self.external])

    @property
    def n(self) -> int:
        return len(self.internal)

    def to_json(self) -> dict:
        return {
            "gauge": self.gauge,
            "internal": [[z.real, z.imag] for z in self.internal],
            "external": [[z.real, z.imag] for z in self.external],
        }


def edge_arrays(g):
    edges = np.asarray(g.edges, dtype=int).reshape(-1, 2)
    return edges[:, 0], edges[:, 1]


def edge_angles(points, sources, targets, kind=AngleMapKind.HYPERBOLIC, strict: bool = True):
    """Angles of the given edges; ``points`` has shape ``(..., vertices)``."""
    points = np.asarray(points, dtype=complex)
    return angles(points[..., sources], points[..., targets], kind, strict)


def edge_jacobian(points, sources, targets, n: int):
    """
    Derivatives of the edge angles with respect to ``(Re v1, Im v1, Re v2, ...)``
    of the internal vertices, shape ``(..., edges, 2n)``.
    """
    points = np.asarray(points, dtype=complex)
    d_source, d_target = angle_gradients(points[..., sources], points[..., targets])
    jacobian = np.zeros(points.shape[:-1] + (len(sources), 2 * n))
    for e, (s, t) in enumerate(zip(sources, targets)):
        jacobian[..., e, 2 * s : 2 * s + 2] += d_source[..., e, :]
        if t < n:
            jacobian[..., e, 2 * t : 2 * t + 2] += d_target[..., e, :]
    return jacobian


def _check(lg: LabelledGraph, c: Configuration):
    g = lg.graph
    if (c.n, len(c.external)) != (g.n, g.m):
        raise GraphError(
            f"configuration with {c.n}+{len(c.external)} points for a graph in G({g.n},{g.m})"
        )


def gauss_map(lg: LabelledGraph, c: Configuration, kind=AngleMapKind.HYPERBOLIC) -> np.ndarray:
    """Coordinate ``j`` is the angle of the edge labelled ``j``."""
    _check(lg, c)
    sources, targets = edge_arrays(lg.graph)
    values = edge_angles(c.points, sources, targets, kind)
    out = np.empty_like(values)
    out[list(lg.labels)] = values
    return out


def jacobian(lg: LabelledGraph, c: Configuration, kind=AngleMapKind.HYPERBOLIC) -> np.ndarray:
    """
    Analytic Jacobian of :func:`gauss_map`, rows in label order. Both angle
    kinds are the same function, so ``kind`` does not change the result.
    """
    _check(lg, c)
    sources, targets = edge_arrays(lg.graph)
    rows = edge_jacobian(c.points, sources, targets, lg.graph.n)
    out = np.empty_like(rows)
    out[list(lg.labels)] = rows
    return out


def numerical_jacobian(
    lg: LabelledGraph, c: Configuration, kind=AngleMapKind.HYPERBOLIC, step: float = 1e-6
) -> np.ndarray:
    """Central differences of :func:`gauss_map`, steps scaled by each vertex height."""
    _check(lg, c)
    columns = []
    for v in range(c.n):
        h = step * c.internal[v].imag
        for direction in (1, 1j):
            shifted = []
            for sign in (1, -1):
                internal = c.internal.copy()
                internal[v] += sign * h * direction
                shifted.append(gauss_map(lg, Configuration(internal, c.external, c.gauge), kind))
            columns.append(wrap(shifted[0] - shifted[1]) / (2 * h))
    return np.stack(columns, axis=-1)
