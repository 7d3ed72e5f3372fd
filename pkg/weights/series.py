"""
The generating function ``Z = sum_n h^n Z_n`` assembled from a WeightTable,
its formal logarithm, and the ``Z∘Z`` identity in ``J(n, 3)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from graphs.algebra import GraphVector, compose, graph_vector_product, quotient_space
from graphs.core import connected_after_external_removal

from .engine import MissingWeightError, WeightTable

logger = logging.getLogger(__name__)


def z_vector(n: int, table: WeightTable) -> GraphVector:
    """``Z_n = sum_G c_G [G]`` over the classes of ``G(n, 2)``; needs exact coefficients."""
    if n > table.order:
        raise MissingWeightError(f"table reaches order {table.order}, not {n}")
    vector = GraphVector(n, table.m)
    for key in table.classes_at(n):
        vector.add_key(key, table.exact_coefficient(key))
    return vector


def z_coordinates(n: int, table: WeightTable) -> Tuple[Fraction, ...]:
    return quotient_space(n, table.m).project(z_vector(n, table))


def connected_part(n: int, table: WeightTable) -> GraphVector:
    vector = GraphVector(n, table.m)
    for key in table.classes_at(n):
        if connected_after_external_removal(key.representative()):
            vector.add_key(key, table.exact_coefficient(key))
    return vector


def _truncated_product(a: List[GraphVector], b: List[GraphVector], order: int, m: int):
    result = [GraphVector(n, m) for n in range(order + 1)]
    for i, left in enumerate(a):
        for j, right in enumerate(b):
            if i + j <= order and left and right:
                result[i + j] += graph_vector_product(left, right)
    return result


def ln_z(order: int, table: WeightTable) -> List[GraphVector]:
    """Formal logarithm of ``Z`` through ``h**order``, one vector per power of ``h``."""
    m = table.m
    # Z = 1 + X with X of positive order
    x = [GraphVector(0, m)] + [z_vector(n, table) for n in range(1, order + 1)]
    result = [GraphVector(n, m) for n in range(order + 1)]
    power = x
    for k in range(1, order + 1):
        sign = Fraction((-1) ** (k + 1), k)
        for n in range(order + 1):
            result[n] += power[n] * sign
        power = _truncated_product(power, x, order, m)
    return result


@dataclass(frozen=True)
class ZZResult:
    n: int
    vector: GraphVector
    coordinates: Tuple[Fraction, ...]

    @property
    def vanishes(self) -> bool:
        return not any(self.coordinates)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coordinates": [str(c) for c in self.coordinates],
            "vanishes": self.vanishes,
        }


def zz_check(n: int, table: WeightTable) -> ZZResult:
    """``sum_k Z_{n-k} ∘ Z_k`` projected into ``J(n, 3)``; zero for a consistent table."""
    vector = GraphVector(n, 2 * table.m - 1)
    parts = [z_vector(k, table) for k in range(n + 1)]
    for k in range(n + 1):
        vector += compose(parts[n - k], parts[k])
    coordinates = quotient_space(n, 2 * table.m - 1).project(vector)
    logger.debug("Z∘Z at order %d: %d nonzero coordinates", n, sum(1 for c in coordinates if c))
    return ZZResult(n, vector, coordinates)
