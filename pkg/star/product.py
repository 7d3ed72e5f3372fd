"""
Star products ``f * g = sum_n h^n sum_G c_G B_G(f, g)`` assembled from a
WeightTable, with the associativity residual and table comparisons.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from django.conf import settings

from graphs.core import Graph, loop_number
from weights.engine import WeightTable

from .lie import LieAlgebra
from .operators import apply_B
from .polynomials import HSeries, Polynomial, monomials

logger = logging.getLogger(__name__)


def _terms(table: WeightTable, n: int) -> List[Tuple[Graph, Fraction]]:
    terms = []
    for key in table.classes_at(n):
        coefficient = table.exact_coefficient(key)
        if coefficient:
            terms.append((key.representative(), coefficient))
    return terms


def _resolve_order(table: WeightTable, order: Optional[int]) -> int:
    order = settings.QNTZ_ORDER if order is None else order
    table.require(order)
    return order


def _bidifferential(terms, algebra, f: Polynomial, g: Polynomial) -> Polynomial:
    result = Polynomial(algebra.dim)
    if not (f and g):
        return result
    for graph, coefficient in terms:
        result = result + apply_B(graph, algebra, (f, g)).scale(coefficient)
    return result


def star(
    f: Polynomial,
    g: Polynomial,
    algebra: LieAlgebra,
    table: WeightTable,
    order: Optional[int] = None,
) -> HSeries:
    order = _resolve_order(table, order)
    return HSeries(
        order,
        algebra.dim,
        [_bidifferential(_terms(table, n), algebra, f, g) for n in range(order + 1)],
    )


def star_series(
    a: HSeries,
    b: HSeries,
    algebra: LieAlgebra,
    table: WeightTable,
    order: Optional[int] = None,
) -> HSeries:
    """Bilinear extension of :func:`star` to truncated series."""
    order = _resolve_order(table, min(a.order, b.order) if order is None else order)
    order = min(order, a.order, b.order)
    terms = [_terms(table, n) for n in range(order + 1)]
    result = HSeries(order, algebra.dim)
    for i, j in itertools.product(range(order + 1), repeat=2):
        for n in range(order + 1 - i - j):
            result[i + j + n] = result[i + j + n] + _bidifferential(terms[n], algebra, a[i], b[j])
    return result


def commutator(
    f: Polynomial, g: Polynomial, algebra: LieAlgebra, table: WeightTable, order: Optional[int] = None
) -> HSeries:
    return star(f, g, algebra, table, order) - star(g, f, algebra, table, order)


def associativity_residual(
    f: Polynomial,
    g: Polynomial,
    k: Polynomial,
    algebra: LieAlgebra,
    table: WeightTable,
    order: Optional[int] = None,
) -> HSeries:
    """``(f * g) * k - f * (g * k)`` through ``h**order``."""
    order = _resolve_order(table, order)
    left = star_series(star(f, g, algebra, table, order), HSeries.of(k, order), algebra, table, order)
    right = star_series(HSeries.of(f, order), star(g, k, algebra, table, order), algebra, table, order)
    residual = left - right
    if not residual.is_zero():
        logger.warning("associativity fails for %s, %s, %s: %s", f, g, k, residual)
    return residual


@dataclass
class ClassDifference:
    key: str
    loop_number: int
    first: float
    second: float
    stderr: float
    exact: bool

    @property
    def difference(self) -> float:
        return self.first - self.second

    @property
    def agrees(self) -> bool:
        if self.exact:
            return self.first == self.second
        return abs(self.difference) <= 3 * self.stderr + 1e-12

    def to_json(self) -> dict:
        return {
            "class": self.key,
            "loop_number": self.loop_number,
            "first": str(self.first) if self.exact else float(self.first),
            "second": str(self.second) if self.exact else float(self.second),
            "stderr": self.stderr,
            "agrees": self.agrees,
        }


@dataclass
class CompareReport:
    order: int
    classes: List[ClassDifference] = field(default_factory=list)
    star_differences: List[int] = field(default_factory=list)

    @property
    def zero_loop_agree(self) -> bool:
        return all(c.agrees for c in self.classes if c.loop_number == 0)

    @property
    def loop_only(self) -> bool:
        """Every disagreeing class carries a loop."""
        return all(c.agrees or c.loop_number > 0 for c in self.classes)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "classes": [c.to_json() for c in self.classes],
            "star_differences": self.star_differences,
            "zero_loop_agree": self.zero_loop_agree,
            "loop_only": self.loop_only,
        }


def _stderr(entry) -> float:
    return 0.0 if entry.exact else entry.value.stderr


def compare_products(
    first: WeightTable,
    second: WeightTable,
    algebra: LieAlgebra,
    order: Optional[int] = None,
    degree: int = 2,
) -> CompareReport:
    """
    Class-by-class coefficient differences, and for exact tables the number of
    monomial pairs of degree ``1..degree`` on which the ``h**n`` star terms differ.
    """
    order = settings.QNTZ_ORDER if order is None else order
    first.require(order)
    second.require(order)
    report = CompareReport(order)
    for n in range(order + 1):
        for key in first.classes_at(n):
            a, b = first.entry(key), second.entry(key)
            report.classes.append(
                ClassDifference(
                    str(key),
                    loop_number(key.representative()),
                    a.coefficient,
                    b.coefficient,
                    (_stderr(a) ** 2 + _stderr(b) ** 2) ** 0.5,
                    a.exact and b.exact,
                )
            )
    if first.exact and second.exact:
        basis = list(monomials(algebra.dim, degree, lowest=1))
        for n in range(order + 1):
            terms_a, terms_b = _terms(first, n), _terms(second, n)
            report.star_differences.append(
                sum(
                    _bidifferential(terms_a, algebra, f, g) != _bidifferential(terms_b, algebra, f, g)
                    for f, g in itertools.product(basis, repeat=2)
                )
            )
    return report
