"""
Importance-sampled integrals of pulled-back 1-forms over gauge-fixed
configuration spaces.

Internal vertices are drawn one after another. Each one picks an anchor
uniformly among the external vertices and the vertices drawn before it, then
a log-uniform distance and a uniform direction from that anchor (the upper
half-turn for boundary anchors, the full turn for interior ones). The
proposal density is the mixture over anchors, so the estimator is unbiased
for the integral over the region where some anchor distance lies in
``[QNTZ_MC_RADIUS_MIN, QNTZ_MC_RADIUS_MAX]``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.conf import settings

from graphs.core import Graph

from .angles import AngleMapKind
from .densities import OneForm
from .gauss import BOUNDARY, GAUGES, edge_angles, edge_arrays, edge_jacobian

logger = logging.getLogger(__name__)


class SampleBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int = 0
    effective_samples: float = 0.0
    truncation: float = 0.0

    def __neg__(self) -> "Estimate":
        return Estimate(-self.value, self.stderr, self.samples, self.effective_samples, self.truncation)

    def scaled(self, factor: float) -> "Estimate":
        return Estimate(
            self.value * factor,
            self.stderr * abs(factor),
            self.samples,
            self.effective_samples,
            self.truncation * abs(factor),
        )

    def to_json(self) -> dict:
        return {"est": self.value, "stderr": self.stderr}

    @classmethod
    def from_json(cls, data: dict) -> "Estimate":
        return cls(float(data["est"]), float(data["stderr"]))


def _draw(rng, n: int, externals: np.ndarray, size: int):
    """Sample internal positions and return them with their log proposal density."""
    lo, hi = settings.QNTZ_MC_RADIUS_MIN, settings.QNTZ_MC_RADIUS_MAX
    span = np.log(hi / lo)
    points = np.empty((size, n), dtype=complex)
    log_density = np.zeros(size)
    anchors = np.broadcast_to(externals, (size, len(externals)))
    for k in range(n):
        count = anchors.shape[1]
        interior = anchors.imag > 0
        turn = np.where(interior, 2 * np.pi, np.pi)
        choice = rng.integers(0, count, size)
        rows = np.arange(size)
        radius = lo * np.exp(span * rng.random(size))
        theta = turn[rows, choice] * rng.random(size)
        p = anchors[rows, choice] + radius * np.exp(1j * theta)
        distance = np.abs(p[:, None] - anchors)
        within = (distance >= lo) & (distance <= hi)
        with np.errstate(divide="ignore"):
            terms = np.where(within, 1.0 / (span * turn * distance**2), 0.0)
        log_density += np.log(terms.sum(axis=1) / count)
        points[:, k] = p
        anchors = np.concatenate([anchors, p[:, None]], axis=1)
    return points, log_density


def integrate(
    g: Graph,
    form: OneForm,
    kind=AngleMapKind.HYPERBOLIC,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    gauge: str = BOUNDARY,
    tolerance: Optional[float] = None,
) -> Estimate:
    """
    Estimate ``∫ prod_e form(phi_e) det(dPhi)`` over the internal positions, in
    the standard edge order and the ``(Re v1, Im v1, ...)`` orientation.
    """
    if not form.smooth:
        raise ValueError("Monte-Carlo integration needs a smooth form")
    samples = samples or settings.QNTZ_MC_SAMPLES
    seed = settings.QNTZ_SEED if seed is None else seed
    externals = np.asarray(GAUGES[gauge], dtype=complex)
    if g.n == 0:
        return Estimate(1.0, 0.0, samples, float(samples), 0.0)
    rng = np.random.default_rng(seed)
    sources, targets = edge_arrays(g)
    order = list(g.standard_order)
    sources, targets = sources[order], targets[order]
    total = total_sq = 0.0
    drawn = 0
    while drawn < samples:
        size = min(settings.QNTZ_MC_CHUNK, samples - drawn)
        internal, log_density = _draw(rng, g.n, externals, size)
        valid = (internal.imag > 0).all(axis=1)
        internal[~valid] = 1j * (2.0 + np.arange(g.n))
        points = np.concatenate([internal, np.broadcast_to(externals, (size, g.m))], axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = edge_angles(points, sources, targets, kind)
            integrand = form.density(phi).prod(axis=1) * np.linalg.det(
                edge_jacobian(points, sources, targets, g.n)
            )
            weights = np.where(valid, integrand * np.exp(-log_density), 0.0)
        weights = np.nan_to_num(weights, nan=0.0, posinf=0.0, neginf=0.0)
        total += weights.sum()
        total_sq += (weights**2).sum()
        drawn += size
    mean = total / drawn
    variance = max(total_sq / drawn - mean**2, 0.0)
    stderr = float(np.sqrt(variance / drawn))
    effective = float(total**2 / total_sq) if total_sq else float(drawn)
    lo, hi = settings.QNTZ_MC_RADIUS_MIN, settings.QNTZ_MC_RADIUS_MAX
    estimate = Estimate(float(mean), stderr, drawn, effective, 2 * g.n * (lo + 1 / hi))
    logger.debug("integrated %s with %s: %.6f ± %.6f", g, form, mean, stderr)
    if tolerance is not None and stderr > tolerance:
        raise SampleBudgetError(
            f"stderr {stderr:.3g} above tolerance {tolerance:.3g} after {drawn} samples"
        )
    return estimate
