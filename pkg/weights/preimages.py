"""
Signed preimages of a torus point under the Gauss map of a labelled graph.

The search splits along the connected components of the internal subgraph;
the preimage set is the product of the component preimage sets. A path
component whose bottom vertex points at two boundary vertices is solved
exactly: the bottom vertex is the intersection of two rays, and every vertex
above it lies on a ray from its external target, where a bracketed 1-D root
search finds all positions. Any other component is solved with damped Newton
iterations from a multistart grid in a chart adapted to the rays.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
from django.conf import settings
from scipy.optimize import brentq

from graphs.core import GraphError, LabelledGraph, internal_components

from .angles import AngleMapKind, angles, wrap
from .gauss import BOUNDARY, GAUGES, Configuration, edge_angles, edge_jacobian, jacobian

logger = logging.getLogger(__name__)

# chart coordinates are clipped to this box; roots at its edge have escaped
CHART_BOX = 40.0
START_SPAN = 5.0
MAX_STARTS = 4096


class NonRegularValueError(ValueError):
    pass


class SolverBudgetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Preimage:
    configuration: Configuration
    sign: int
    condition: float


def edge_values(lg: LabelledGraph, r: Sequence) -> np.ndarray:
    """Target angle of every edge: the coordinate of ``r`` named by its label."""
    if len(r) != len(lg.labels):
        raise GraphError(f"torus point of dimension {len(r)} for {len(lg.labels)} edges")
    values = [Fraction(x) % 1 if not isinstance(x, float) else x % 1.0 for x in r]
    if any(x == 0 for x in values):
        raise NonRegularValueError("regular values avoid the coordinate hyperplanes")
    return np.array([float(values[label]) for label in lg.labels])


def ray_point(x: float, t: float, ell):
    """Point at log-distance ``ell`` on the ray from ``x`` along which edges to ``x`` have angle ``t``."""
    return x + np.exp(ell) * np.exp(1j * np.pi * t)


def ray_intersection(x1: float, t1: float, x2: float, t2: float) -> Optional[complex]:
    det = np.sin(np.pi * (t1 - t2))
    if abs(det) < 1e-15:
        return None
    delta = x2 - x1
    s1 = -delta * np.sin(np.pi * t2) / det
    s2 = -delta * np.sin(np.pi * t1) / det
    if s1 <= 0 or s2 <= 0:
        return None
    return complex(x1 + s1 * np.exp(1j * np.pi * t1))


def ray_roots(
    x: float, t: float, q: complex, target: float, kind, points: Optional[int] = None
) -> List[float]:
    """Log-distances along a ray at which the edge towards ``q`` has angle ``target``."""
    grid = np.linspace(
        -settings.QNTZ_RAY_SPAN, settings.QNTZ_RAY_SPAN, points or settings.QNTZ_RAY_POINTS
    )

    def residual(ell):
        return wrap(angles(ray_point(x, t, ell), q, kind) - target)

    values = residual(grid)
    small = np.abs(values) < 0.25
    crossing = (np.sign(values[:-1]) != np.sign(values[1:])) & small[:-1] & small[1:]
    roots = []
    for i in np.flatnonzero(crossing):
        if values[i] == 0:
            roots.append(float(grid[i]))
        elif values[i + 1] != 0:
            roots.append(brentq(lambda ell: float(residual(ell)), grid[i], grid[i + 1], xtol=1e-15))
    return roots


class _Component:
    def __init__(self, vertices, g, values, externals, boundary, dense=False):
        self.vertices = vertices
        self.dense = dense
        self.ray_points = 2 * settings.QNTZ_RAY_POINTS if dense else settings.QNTZ_RAY_POINTS
        self.n = g.n
        self.targets = g.targets
        self.orientation = g.orientation
        self.values = values
        self.externals = externals
        self.boundary = boundary

    def value(self, v: int, s: int) -> float:
        return self.values[self.orientation[v][s]]

    def external_slots(self, v: int) -> List[int]:
        if not self.boundary:
            return []
        return [s for s in (0, 1) if self.targets[v][s] >= self.n]

    def position(self, t: int) -> complex:
        return self.externals[t - self.n]

    def is_chain(self) -> bool:
        internal = [sum(t < self.n for t in self.targets[v]) for v in self.vertices]
        return self.boundary and max(internal) <= 1 and internal.count(0) == 1

    def corner(self, v: int) -> Optional[complex]:
        (x1, x2) = (self.position(t) for t in self.targets[v])
        return ray_intersection(x1.real, self.value(v, 0), x2.real, self.value(v, 1))

    def solve(self, kind) -> List[Dict[int, complex]]:
        if self.is_chain():
            return self.solve_chain(kind)
        return self.solve_newton(kind)

    def solve_chain(self, kind) -> List[Dict[int, complex]]:
        parent = {t: v for v in self.vertices for t in self.targets[v] if t < self.n}
        bottom = next(v for v in self.vertices if all(t >= self.n for t in self.targets[v]))
        p = self.corner(bottom)
        if p is None:
            return []
        partial = [{bottom: p}]
        below = bottom
        while below in parent:
            v = parent[below]
            (s,) = self.external_slots(v)
            x = self.position(self.targets[v][s]).real
            t, target = self.value(v, s), self.value(v, 1 - s)
            grown = []
            for solution in partial:
                for ell in ray_roots(x, t, solution[below], target, kind, self.ray_points):
                    grown.append({**solution, v: complex(ray_point(x, t, ell))})
            partial = grown
            below = v
        return partial

    def solve_newton(self, kind) -> List[Dict[int, complex]]:
        fixed: Dict[int, complex] = {}
        rays, free, equations = [], [], []
        for v in self.vertices:
            slots = self.external_slots(v)
            if len(slots) == 2:
                p = self.corner(v)
                if p is None:
                    return []
                fixed[v] = p
            elif len(slots) == 1:
                s = slots[0]
                rays.append((v, self.position(self.targets[v][s]).real, self.value(v, s)))
                equations.append((v, 1 - s))
            else:
                free.append(v)
                equations += [(v, 0), (v, 1)]
        k = len(rays) + 2 * len(free)
        if k != len(equations):
            raise GraphError("chart and equation counts disagree")
        if k == 0:
            return [fixed]
        sources = np.array([v for v, _ in equations])
        targets = np.array([self.targets[v][s] for v, s in equations])
        wanted = np.array([self.value(v, s) for v, s in equations])
        width = self.n + len(self.externals)

        def chart(params):
            points = np.empty(params.shape[:1] + (width,), dtype=complex)
            points[:] = 1j * (10.0 + np.arange(width))
            points[:, self.n :] = self.externals
            for v, p in fixed.items():
                points[:, v] = p
            derivative = np.zeros(params.shape[:1] + (2 * self.n, k))
            for j, (v, x, t) in enumerate(rays):
                offset = np.exp(params[:, j]) * np.exp(1j * np.pi * t)
                points[:, v] = x + offset
                derivative[:, 2 * v, j] = offset.real
                derivative[:, 2 * v + 1, j] = offset.imag
            for i, v in enumerate(free):
                j = len(rays) + 2 * i
                height = np.exp(params[:, j + 1])
                points[:, v] = params[:, j] + 1j * height
                derivative[:, 2 * v, j] = 1.0
                derivative[:, 2 * v + 1, j + 1] = height
            return points, derivative

        def residual_and_jacobian(params):
            points, derivative = chart(params)
            with np.errstate(divide="ignore", invalid="ignore"):
                residual = wrap(edge_angles(points, sources, targets, kind, strict=False) - wanted)
                matrix = edge_jacobian(points, sources, targets, self.n) @ derivative
            return residual, matrix

        params = self.starts(k)
        # starts that leave the box or meet a singular chart point stay frozen
        alive = np.ones(len(params), dtype=bool)
        for iteration in range(settings.QNTZ_NEWTON_MAX_ITER + 5):
            residual, matrix = residual_and_jacobian(params)
            alive &= np.isfinite(residual).all(axis=1) & np.isfinite(matrix).all(axis=(1, 2))
            residual[~alive] = 0.0
            matrix[~alive] = np.eye(k)
            step = -np.einsum("sij,sj->si", np.linalg.pinv(matrix), residual)
            if iteration < settings.QNTZ_NEWTON_MAX_ITER:
                size = np.max(np.abs(step), axis=1, keepdims=True)
                step *= np.minimum(1.0, 1.0 / np.maximum(size, 1e-300))
            step[~alive] = 0.0
            params = params + step
            escaped = np.abs(params).max(axis=1) >= CHART_BOX
            params = np.clip(params, -CHART_BOX, CHART_BOX)
            alive &= ~escaped
        residual, _ = residual_and_jacobian(params)
        error = np.where(np.isfinite(residual).all(axis=1), np.abs(residual).max(axis=1), np.inf)
        inside = alive & (np.abs(params).max(axis=1) < CHART_BOX - 1)
        converged = inside & (error <= settings.QNTZ_POLISH_TOL)
        if not converged.any() and (inside & (error < 1e-6)).any():
            raise SolverBudgetError(
                f"Newton iterations stalled at residual {error[inside].min():.2e}"
            )
        points, _ = chart(params[converged])
        solutions: List[Dict[int, complex]] = []
        radius = settings.QNTZ_DEDUP_RADIUS
        for row in points:
            candidate = {v: complex(row[v]) for v in self.vertices}
            if not any(
                all(abs(candidate[v] - known[v]) <= radius * max(1.0, abs(known[v])) for v in self.vertices)
                for known in solutions
            ):
                solutions.append(candidate)
        logger.debug(
            "component %s: %d of %d starts converged to %d roots",
            self.vertices, int(converged.sum()), len(params), len(solutions),
        )
        return solutions

    def starts(self, k: int) -> np.ndarray:
        scale = 2 if self.dense else 1
        per_axis = scale * settings.QNTZ_NEWTON_STARTS
        if per_axis**k <= scale * MAX_STARTS:
            axis = np.linspace(-START_SPAN, START_SPAN, per_axis)
            return np.array(list(itertools.product(axis, repeat=k)), dtype=float)
        rng = np.random.default_rng(settings.QNTZ_SEED + scale - 1)
        return rng.uniform(-START_SPAN, START_SPAN, size=(scale * MAX_STARTS, k))


def find_preimages(
    lg: LabelledGraph,
    r: Sequence,
    kind=AngleMapKind.HYPERBOLIC,
    gauge: str = BOUNDARY,
    dense: bool = False,
) -> List[Preimage]:
    """
    Every isolated preimage of ``r`` with its orientation sign. ``dense`` doubles
    the start grid and the ray sampling.
    """
    g = lg.graph
    externals = np.asarray(GAUGES[gauge], dtype=complex)
    if g.m != len(externals):
        raise GraphError(f"the {gauge} gauge needs {len(externals)} external vertices, got {g.m}")
    values = edge_values(lg, r)
    boundary = gauge == BOUNDARY
    per_component = []
    for vertices in internal_components(g):
        solutions = _Component(vertices, g, values, externals, boundary, dense).solve(kind)
        if not solutions:
            return []
        per_component.append(solutions)
    preimages = []
    for parts in itertools.product(*per_component):
        merged = {v: p for part in parts for v, p in part.items()}
        c = Configuration(np.array([merged[v] for v in range(g.n)]), externals, gauge)
        matrix = jacobian(lg, c, kind)
        scaled = matrix * np.repeat(c.internal.imag, 2)[None, :]
        scaled /= np.abs(scaled).max(axis=1, keepdims=True)
        condition = float(np.linalg.cond(scaled))
        if not condition < settings.QNTZ_CONDITION_LIMIT:
            raise NonRegularValueError(
                f"Jacobian condition number {condition:.3g} at a preimage of {list(map(str, r))}"
            )
        preimages.append(Preimage(c, int(np.sign(np.linalg.det(matrix))), condition))
    return preimages


def signed_count(preimages: List[Preimage]) -> int:
    return sum(p.sign for p in preimages)
