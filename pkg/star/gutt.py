"""
The Gutt product through the universal enveloping algebra.

Elements of ``U(g)`` with the bracket scaled by ``h`` are kept as maps from
``(word, power)`` to exact coefficients, where ``word`` is a nondecreasing
tuple of basis indices (a PBW monomial) and ``power`` the power of ``h``.
Products are straightened by rewriting ``x_j x_i = x_i x_j + h [x_j, x_i]``
at the first descent. Polynomials enter through symmetrization and leave
through its inverse, which is triangular in the polynomial degree.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

from django.conf import settings

from .lie import LieAlgebra
from .polynomials import HSeries, Polynomial

Word = Tuple[int, ...]
Element = Dict[Tuple[Word, int], Fraction]


class EnvelopingAlgebra:
    def __init__(self, algebra: LieAlgebra, order: int):
        self.algebra = algebra
        self.order = order
        self.straighten = lru_cache(maxsize=None)(self._straighten)
        self.symmetrized = lru_cache(maxsize=None)(self._symmetrized)

    def accumulate(self, element: Element, word: Word, power: int, coefficient: Fraction):
        if power > self.order or not coefficient:
            return
        key = (word, power)
        total = element.get(key, Fraction(0)) + coefficient
        if total:
            element[key] = total
        else:
            element.pop(key, None)

    def _straighten(self, word: Word) -> Tuple[Tuple[Tuple[Word, int], Fraction], ...]:
        """PBW expansion of an arbitrary word."""
        descent = next((i for i in range(len(word) - 1) if word[i] > word[i + 1]), None)
        if descent is None:
            return (((word, 0), Fraction(1)),)
        j, i = word[descent], word[descent + 1]
        head, tail = word[:descent], word[descent + 2 :]
        result: Element = {}
        for key, coefficient in self.straighten(head + (i, j) + tail):
            self.accumulate(result, key[0], key[1], coefficient)
        for k, value in self.algebra.bracket(j, i).items():
            for (w, power), coefficient in self.straighten(head + (k,) + tail):
                self.accumulate(result, w, power + 1, value * coefficient)
        return tuple(sorted(result.items()))

    def multiply(self, a: Element, b: Element) -> Element:
        result: Element = {}
        for ((u, p), x), ((v, q), y) in itertools.product(a.items(), b.items()):
            if p + q > self.order:
                continue
            for (w, power), coefficient in self.straighten(u + v):
                self.accumulate(result, w, power + p + q, coefficient * x * y)
        return result

    def _symmetrized(self, exponent: Tuple[int, ...]) -> Tuple[Tuple[Tuple[Word, int], Fraction], ...]:
        letters = tuple(i for i, e in enumerate(exponent) for _ in range(e))
        orderings = set(itertools.permutations(letters))
        weight = Fraction(1, len(orderings))
        result: Element = {}
        for ordering in orderings:
            for (w, power), coefficient in self.straighten(ordering):
                self.accumulate(result, w, power, coefficient * weight)
        return tuple(sorted(result.items()))

    def symmetrize(self, f: Polynomial, power: int = 0) -> Element:
        result: Element = {}
        for exponent, x in f.terms.items():
            for (w, p), coefficient in self.symmetrized(exponent):
                self.accumulate(result, w, p + power, coefficient * x)
        return result

    def desymmetrize(self, element: Element) -> HSeries:
        """The h-series of polynomials whose symmetrization is ``element``."""
        d = self.algebra.dim
        remaining = dict(element)
        series = HSeries(self.order, d)
        while remaining:
            (word, power), coefficient = max(remaining.items(), key=lambda item: (len(item[0][0]), item[0]))
            exponent = tuple(Counter(word)[i] for i in range(d))
            series[power] = series[power] + Polynomial.monomial(exponent, coefficient)
            for (w, p), x in self.symmetrized(exponent):
                self.accumulate(remaining, w, p + power, -coefficient * x)
        return series


def gutt_star(
    f: Polynomial, g: Polynomial, algebra: LieAlgebra, order: Optional[int] = None
) -> HSeries:
    order = settings.QNTZ_ORDER if order is None else order
    enveloping = EnvelopingAlgebra(algebra, order)
    return enveloping.desymmetrize(enveloping.multiply(enveloping.symmetrize(f), enveloping.symmetrize(g)))


def gutt_star_series(a: HSeries, b: HSeries, algebra: LieAlgebra) -> HSeries:
    order = min(a.order, b.order)
    enveloping = EnvelopingAlgebra(algebra, order)
    left: Element = {}
    right: Element = {}
    for n in range(order + 1):
        for key, x in enveloping.symmetrize(a[n], n).items():
            enveloping.accumulate(left, key[0], key[1], x)
        for key, x in enveloping.symmetrize(b[n], n).items():
            enveloping.accumulate(right, key[0], key[1], x)
    return enveloping.desymmetrize(enveloping.multiply(left, right))

