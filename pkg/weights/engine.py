"""
Weights of Lie-admissible graph classes with two external vertices.

A WeightTable stores, for every class ``G``, its coefficient ``c_G`` in
``Z = sum_G c_G [G]``; the weight in the sense of ``W_G / |Aut G| = c_G`` is
available through :meth:`WeightTable.weight`. Counted coefficients are exact:
the signed preimage counts of a regular value, summed over the distinct
labellings of the class and divided by ``(2n)!``.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings

from graphs.core import (
    GraphClassKey,
    LabelledGraph,
    automorphism_count,
    edge_automorphisms,
    enumerate_graphs,
    internal_components,
    loop_number,
)

from .angles import AngleMapKind
from .densities import OneForm
from .montecarlo import Estimate, integrate
from .preimages import NonRegularValueError, find_preimages, signed_count

logger = logging.getLogger(__name__)

COUNTED = "counted"
SEMICIRCLE = "semicircle"
MONTE_CARLO = "mc"
METHODS = (COUNTED, SEMICIRCLE, MONTE_CARLO)


class MissingWeightError(ValueError):
    pass


def regular_value(n: int, base=None, epsilon=None) -> Tuple[Fraction, ...]:
    """The near-diagonal torus point ``(base, base + eps, base + 2 eps, ...)`` of dimension 2n."""
    base = Fraction(settings.QNTZ_REGULAR_BASE if base is None else base)
    epsilon = Fraction(settings.QNTZ_REGULAR_EPSILON if epsilon is None else epsilon)
    value = tuple((base + k * epsilon) % 1 for k in range(2 * n))
    if any(x == 0 for x in value):
        raise NonRegularValueError(f"{[str(x) for x in value]} meets a coordinate hyperplane")
    return value


def alternate_regular_value(n: int) -> Tuple[Fraction, ...]:
    return regular_value(
        n, settings.QNTZ_ALTERNATE_REGULAR_BASE, settings.QNTZ_ALTERNATE_REGULAR_EPSILON
    )


def scale_invariant(g) -> bool:
    """True when some internal component misses an external vertex; such classes weigh 0."""
    externals = set(range(g.n, g.n + g.m))
    targets = g.targets
    return any(
        not externals <= {t for v in vertices for t in targets[v]}
        for vertices in internal_components(g)
    )


def distinct_labellings(key: GraphClassKey) -> Iterator[LabelledGraph]:
    """One labelling per isomorphism class of labelled graphs in the class."""
    g = key.representative()
    automorphisms = edge_automorphisms(g)
    for labels in itertools.permutations(range(len(g.edges))):
        if all(
            tuple(labels[a[e]] for e in range(len(labels))) >= labels for a in automorphisms
        ):
            yield LabelledGraph(g, labels)


def nudged_value(r: Sequence) -> Tuple[Fraction, ...]:
    """``r`` moved along the diagonal by a hundredth of its smallest gap, so its cell is kept."""
    values = [Fraction(x) % 1 for x in r]
    marks = sorted({Fraction(0), Fraction(1), *values})
    gap = min(b - a for a, b in zip(marks, marks[1:]))
    return tuple(x + gap / 100 for x in values)


def checked_count(lg: LabelledGraph, r: Sequence, kind=AngleMapKind.HYPERBOLIC) -> int:
    """
    Orientation sign times the local degree of ``lg`` at ``r``. With
    ``QNTZ_CROSS_CHECK`` the count is repeated at :func:`nudged_value` with a
    denser start grid, and the two must agree.
    """
    count = lg.sign * signed_count(find_preimages(lg, r, kind))
    if settings.QNTZ_CROSS_CHECK:
        again = lg.sign * signed_count(find_preimages(lg, nudged_value(r), kind, dense=True))
        if again != count:
            raise NonRegularValueError(
                f"labelling {lg.labels} counts {count} at {[str(x) for x in r]} "
                f"but {again} at a nudged value"
            )
    return count


@dataclass(frozen=True)
class LabellingCount:
    labels: Tuple[int, ...]
    count: int


@dataclass(frozen=True)
class CountedWeight:
    key: GraphClassKey
    raw: int
    value: Fraction
    labellings: Tuple[LabellingCount, ...] = ()
    value_dependent: bool = False


def weight_counted(
    key: GraphClassKey, r: Optional[Sequence] = None, kind=AngleMapKind.HYPERBOLIC
) -> CountedWeight:
    """
    Signed preimage count of ``r`` over the distinct labellings of the class.
    Each labelling contributes its orientation sign times its local degree.
    """
    g = key.representative()
    if g.n == 0:
        return CountedWeight(key, 1, Fraction(1))
    if key.vanishing or scale_invariant(g):
        return CountedWeight(key, 0, Fraction(0))
    r = regular_value(g.n) if r is None else tuple(r)
    value_dependent = loop_number(g) > 0
    if value_dependent:
        logger.warning("counted weight of loop class %s depends on the regular value", key)
    contributions = []
    for lg in distinct_labellings(key):
        count = checked_count(lg, r, kind)
        if count:
            contributions.append(LabellingCount(lg.labels, count))
    raw = sum(c.count for c in contributions)
    logger.debug("%s: raw count %d from %d labellings", key, raw, len(contributions))
    return CountedWeight(
        key,
        raw,
        Fraction(raw, math.factorial(2 * g.n)),
        tuple(contributions),
        value_dependent,
    )


def has_oriented_cycle(key: GraphClassKey) -> bool:
    # with at most one incoming edge per vertex every cycle is oriented
    return loop_number(key.representative()) > 0


def weight_semicircle(key: GraphClassKey, kind=AngleMapKind.HYPERBOLIC) -> Fraction:
    if has_oriented_cycle(key):
        return Fraction(0)
    return weight_counted(key, kind=kind).value


def weight_mc(
    key: GraphClassKey,
    form: OneForm,
    kind=AngleMapKind.HYPERBOLIC,
    samples: Optional[int] = None,
    seed=None,
    tolerance: Optional[float] = None,
) -> Estimate:
    """Monte-Carlo estimate of ``W_G``, the integral over the standard labelling."""
    g = key.representative()
    if key.vanishing or (g.n > 0 and scale_invariant(g)):
        return Estimate(0.0, 0.0)
    return integrate(g, form, kind, samples, seed, tolerance=tolerance)


@dataclass(frozen=True)
class WeightEntry:
    key: GraphClassKey
    method: str
    value: Union[Fraction, Estimate]
    raw_count: Optional[int] = None
    value_dependent: bool = False

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    @property
    def coefficient(self) -> Union[Fraction, float]:
        return self.value if self.exact else self.value.value

    def to_json(self) -> dict:
        data = {
            "class": str(self.key),
            "kind": self.method,
            "value": str(self.value) if self.exact else self.value.to_json(),
        }
        if self.raw_count is not None:
            data["raw_count"] = self.raw_count
        if self.value_dependent:
            data["value_dependent"] = True
        return data

    @classmethod
    def from_json(cls, data: dict) -> "WeightEntry":
        value = data["value"]
        return cls(
            GraphClassKey.parse(data["class"]),
            data["kind"],
            Fraction(value) if isinstance(value, str) else Estimate.from_json(value),
            data.get("raw_count"),
            bool(data.get("value_dependent", False)),
        )


class WeightTable:
    """Coefficients ``c_G`` of ``Z`` for the classes in ``G(n, 2)``, ``n <= order``."""

    def __init__(
        self,
        order: int,
        method: str,
        angle_map=AngleMapKind.HYPERBOLIC,
        form: Optional[OneForm] = None,
        regular_value: Sequence[Fraction] = (),
        seed: Optional[int] = None,
        m: int = 2,
    ):
        self.order = order
        self.m = m
        self.method = method
        self.angle_map = AngleMapKind(angle_map)
        self.form = form
        self.regular_value = tuple(Fraction(x) for x in regular_value)
        self.seed = seed
        self.entries: Dict[GraphClassKey, WeightEntry] = {}

    def add(self, entry: WeightEntry):
        self.entries[entry.key] = entry

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries.values(), key=lambda e: e.key))

    def __contains__(self, key: GraphClassKey):
        return key in self.entries

    @property
    def exact(self) -> bool:
        return all(entry.exact for entry in self.entries.values())

    def entry(self, key: GraphClassKey) -> WeightEntry:
        try:
            return self.entries[key]
        except KeyError:
            raise MissingWeightError(f"no weight for class {key}") from None

    def coefficient(self, key: GraphClassKey) -> Union[Fraction, float]:
        if key.vanishing:
            return Fraction(0)
        return self.entry(key).coefficient

    def exact_coefficient(self, key: GraphClassKey) -> Fraction:
        value = self.coefficient(key)
        if not isinstance(value, Fraction):
            raise MissingWeightError(f"class {key} has only an estimated weight")
        return value

    def weight(self, key: GraphClassKey) -> Union[Fraction, float]:
        """``W_G = c_G |Aut G|``."""
        return self.coefficient(key) * automorphism_count(key.representative())

    def classes_at(self, n: int) -> List[GraphClassKey]:
        return [c.key for c in enumerate_graphs(n, self.m) if not c.vanishing]

    def require(self, order: int):
        if order > self.order:
            raise MissingWeightError(f"table reaches order {self.order}, not {order}")
        for n in range(order + 1):
            for key in self.classes_at(n):
                self.entry(key)

    def to_json(self) -> dict:
        return {
            "n": self.order,
            "m": self.m,
            "method": self.method,
            "angle_map": self.angle_map.value,
            "form": self.form.to_json() if self.form else None,
            "regular_value": [str(x) for x in self.regular_value],
            "seed": self.seed,
            "entries": [entry.to_json() for entry in self],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightTable":
        table = cls(
            int(data["n"]),
            data.get("method", COUNTED),
            data.get("angle_map", AngleMapKind.HYPERBOLIC.value),
            OneForm.from_json(data["form"]) if data.get("form") else None,
            [Fraction(x) for x in data.get("regular_value", [])],
            data.get("seed"),
            int(data.get("m", 2)),
        )
        for item in data["entries"]:
            table.add(WeightEntry.from_json(item))
        return table


def counted_table(
    order: int, kind=AngleMapKind.HYPERBOLIC, base=None, epsilon=None
) -> WeightTable:
    r = regular_value(order, base, epsilon)
    table = WeightTable(order, COUNTED, kind, OneForm.point(r[0]), r)
    for n in range(order + 1):
        for key in table.classes_at(n):
            weight = weight_counted(key, r[: 2 * n], kind)
            table.add(
                WeightEntry(key, COUNTED, weight.value, weight.raw, weight.value_dependent)
            )
    return table


def semicircle_table(order: int, kind=AngleMapKind.HYPERBOLIC) -> WeightTable:
    """Loop classes vanish; 0-loop classes take their form-independent counted value."""
    r = regular_value(order)
    table = WeightTable(order, SEMICIRCLE, kind, OneForm.semicircle(), r)
    for n in range(order + 1):
        for key in table.classes_at(n):
            if has_oriented_cycle(key):
                table.add(WeightEntry(key, SEMICIRCLE, Fraction(0)))
            else:
                weight = weight_counted(key, r[: 2 * n], kind)
                table.add(WeightEntry(key, SEMICIRCLE, weight.value, weight.raw))
    return table


def monte_carlo_table(
    order: int,
    form: OneForm,
    kind=AngleMapKind.HYPERBOLIC,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> WeightTable:
    seed = settings.QNTZ_SEED if seed is None else seed
    table = WeightTable(order, MONTE_CARLO, kind, form, (), seed)
    keys = [key for n in range(order + 1) for key in table.classes_at(n)]
    for key, stream in zip(keys, np.random.SeedSequence(seed).spawn(len(keys))):
        estimate = weight_mc(key, form, kind, samples, stream, tolerance)
        aut = automorphism_count(key.representative())
        table.add(WeightEntry(key, MONTE_CARLO, estimate.scaled(1 / aut)))
    return table


def build_table(method: str, order: int, **options) -> WeightTable:
    if method == COUNTED:
        return counted_table(
            order, options.get("kind", AngleMapKind.HYPERBOLIC), options.get("base"), options.get("epsilon")
        )
    if method == SEMICIRCLE:
        return semicircle_table(order, options.get("kind", AngleMapKind.HYPERBOLIC))
    if method == MONTE_CARLO:
        return monte_carlo_table(
            order,
            options.get("form") or OneForm.uniform(),
            options.get("kind", AngleMapKind.HYPERBOLIC),
            options.get("samples"),
            options.get("seed"),
            options.get("tolerance"),
        )
    raise ValueError(f"unknown weight method {method!r}")
