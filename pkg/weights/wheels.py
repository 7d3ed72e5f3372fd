"""
Wheels and the cap-off relation for graphs with one loop.

When the two external vertices of a one-loop graph ``Γ`` collide, the graph
collapses to a wheel ``G`` with one external vertex. The capped space of
``G`` lets the external vertex run over the upper half-plane; with the
external vertex pinned at ``i`` its integrals are Monte-Carlo integrals over
the internal positions, taken with the orientation opposite to the standard
one. For folded forms ``W_Γ + Ŵ_G`` equals the folded degree of the combined
map: signed preimage counts averaged over the half-turn shifts of a regular
value and over every labelling of the edges.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from graphs.core import (
    Graph,
    GraphError,
    LabelledGraph,
    internal_components,
    labellings,
    loop_number,
    validate,
)

from .angles import AngleMapKind
from .densities import OneForm
from .engine import alternate_regular_value
from .gauss import WHEEL
from .montecarlo import Estimate, integrate
from .preimages import find_preimages, signed_count

logger = logging.getLogger(__name__)


def wheel_graph(n: int) -> Graph:
    """``v_k -> (v_{k+1}, e1)`` around a cycle of length ``n``."""
    if n < 2:
        raise GraphError("a wheel needs at least two internal vertices")
    return Graph.from_targets(n, 1, [((k + 1) % n, n) for k in range(n)])


def is_wheel(g: Graph) -> bool:
    if g.m != 1 or g.n < 2 or not validate(g).lie_admissible:
        return False
    spikes = all(sum(t >= g.n for t in pair) == 1 for pair in g.targets)
    return spikes and len(internal_components(g)) == 1 and loop_number(g) == 1


def collapse_externals(g: Graph) -> Graph:
    """The graph left when all external vertices of ``g`` merge into one."""
    collapsed = Graph(
        g.n,
        1,
        tuple((source, min(target, g.n)) for source, target in g.edges),
        g.orientation,
    )
    report = validate(collapsed)
    if not report.lie_admissible:
        raise GraphError(f"collapsing the external vertices of {g}: {report.violation}")
    return collapsed


def wheel_weight_hat(
    wheel: Graph,
    form: OneForm,
    kind=AngleMapKind.HYPERBOLIC,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> Estimate:
    if not is_wheel(wheel):
        raise GraphError(f"{wheel} is not a wheel")
    return -integrate(wheel, form, kind, samples, seed, gauge=WHEEL)


def folded_degree(
    g: Graph, r: Optional[Sequence] = None, kind=AngleMapKind.HYPERBOLIC
) -> Fraction:
    """
    Degree of ``Φ_Γ ∪ Φ̂_G`` for folded point forms, normalised like ``W_Γ``:
    signed preimage counts at ``r + δ``, ``δ`` in ``{0, 1/2}^{2n}``, summed
    over every labelling and divided by ``(2n)! 2^{2n}``.
    """
    r = alternate_regular_value(g.n) if r is None else tuple(Fraction(x) for x in r)
    return _folded_degree(g, r, AngleMapKind(kind))


@lru_cache(maxsize=None)
def _folded_degree(g: Graph, r: Tuple[Fraction, ...], kind: AngleMapKind) -> Fraction:
    wheel = collapse_externals(g)
    shifts = list(itertools.product((Fraction(0), Fraction(1, 2)), repeat=len(r)))
    total = 0
    for lg in labellings(g):
        lg_hat = LabelledGraph(wheel, lg.labels)
        for shift in shifts:
            point = [(x + d) % 1 for x, d in zip(r, shift)]
            count = signed_count(find_preimages(lg, point, kind))
            count -= signed_count(find_preimages(lg_hat, point, kind, gauge=WHEEL))
            total += lg.sign * count
    degree = Fraction(total, math.factorial(len(r)) * len(shifts))
    logger.debug("folded degree of %s: %s", g, degree)
    return degree


@dataclass(frozen=True)
class WheelFormResult:
    form: OneForm
    weight: Estimate
    weight_hat: Estimate

    @property
    def total(self) -> float:
        return self.weight.value + self.weight_hat.value

    @property
    def stderr(self) -> float:
        return (self.weight.stderr**2 + self.weight_hat.stderr**2) ** 0.5

    def agrees_with(self, degree: Fraction) -> bool:
        return abs(self.total - float(degree)) <= 3 * self.stderr + 1e-9

    def to_json(self) -> dict:
        return {
            "form": self.form.to_json(),
            "weight": self.weight.to_json(),
            "weight_hat": self.weight_hat.to_json(),
            "total": self.total,
            "stderr": self.stderr,
        }


@dataclass(frozen=True)
class WheelReport:
    graph: Graph
    wheel: Graph
    degree: Fraction
    results: List[WheelFormResult]

    @property
    def agreements(self) -> List[bool]:
        return [result.agrees_with(self.degree) for result in self.results]

    @property
    def consistent(self) -> bool:
        """Every pair of forms agrees within twice the combined standard error."""
        for a, b in itertools.combinations(self.results, 2):
            bound = 2 * (a.stderr**2 + b.stderr**2) ** 0.5 + 1e-9
            if abs(a.total - b.total) > bound:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "graph": str(self.graph),
            "wheel": str(self.wheel),
            "degree": str(self.degree),
            "forms": [result.to_json() for result in self.results],
            "agreements": self.agreements,
            "consistent": self.consistent,
        }


def wheel_relation_check(
    g: Graph,
    forms: Sequence[OneForm],
    kind=AngleMapKind.HYPERBOLIC,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> WheelReport:
    """Estimate ``W_Γ + Ŵ_G`` for each form, folded, next to the folded degree."""
    if g.m != 2 or loop_number(g) != 1:
        raise GraphError(f"{g} is not a one-loop graph with two external vertices")
    wheel = collapse_externals(g)
    if not is_wheel(wheel):
        raise GraphError(f"{g} does not collapse to a wheel")
    results = []
    for form in forms:
        folded = form if form.folded else form.fold()
        results.append(
            WheelFormResult(
                folded,
                integrate(g, folded, kind, samples, seed),
                wheel_weight_hat(wheel, folded, kind, samples, seed),
            )
        )
    return WheelReport(g, wheel, folded_degree(g, kind=kind), results)
