"""
Polydifferential operators of graphs for a linear Poisson structure.

Every edge carries a coordinate index. An internal vertex contributes
``alpha^{ij}`` for the indices ``(i, j)`` of its outgoing edges, taken in
their orientation order, differentiated along its incoming edge; an external
vertex contributes its function differentiated along all incoming edges.
``alpha`` is linear, so a vertex with an incoming edge contributes the
structure constant ``c[i][j][t]`` and no vertex takes a second derivative.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from graphs.algebra import GraphVector, jacobi_relations
from graphs.core import Graph, GraphError, validate

from .lie import LieAlgebra, LieAlgebraError
from .polynomials import Polynomial, monomials

logger = logging.getLogger(__name__)


def _check_dimensions(algebra: LieAlgebra, args: Sequence[Polynomial]):
    for f in args:
        if f.dim != algebra.dim:
            raise LieAlgebraError(
                f"polynomial in {f.dim} variables for an algebra of dimension {algebra.dim}"
            )


def alpha(algebra: LieAlgebra, i: int, j: int) -> Polynomial:
    result = Polynomial(algebra.dim)
    for k, value in algebra.bracket(i, j).items():
        result = result + Polynomial.variable(algebra.dim, k).scale(value)
    return result


def poisson_bracket(f: Polynomial, g: Polynomial, algebra: LieAlgebra) -> Polynomial:
    """``{f, g} = sum c[i][j][k] x^k d_i f d_j g``."""
    _check_dimensions(algebra, (f, g))
    result = Polynomial(algebra.dim)
    for i, j in itertools.product(range(algebra.dim), repeat=2):
        term = alpha(algebra, i, j)
        if term:
            df, dg = f.derivative(i), g.derivative(j)
            if df and dg:
                result = result + term * df * dg
    return result


def _states(g: Graph, algebra: LieAlgebra):
    """Index pairs per vertex whose structure-constant factors are all nonzero."""
    targets = g.targets
    source_of = {t: (v, s) for v, pair in enumerate(targets) for s, t in enumerate(pair) if t < g.n}
    checks: Dict[int, List[int]] = {v: [] for v in range(g.n)}
    for w in range(g.n):
        u = source_of[w][0] if w in source_of else w
        checks[max(u, w)].append(w)
    c = algebra.c
    pairs = [(i, j) for i, j in itertools.product(range(algebra.dim), repeat=2) if any(c[i][j])]
    state: List[Tuple[int, int]] = []

    def extend(v: int):
        if v == g.n:
            yield tuple(state)
            return
        for pair in pairs:
            state.append(pair)
            if all(
                w not in source_of or c[state[w][0]][state[w][1]][state[source_of[w][0]][source_of[w][1]]]
                for w in checks[v]
            ):
                yield from extend(v + 1)
            state.pop()

    return source_of, extend(0)


def apply_B(g: Graph, algebra: LieAlgebra, args: Sequence[Polynomial]) -> Polynomial:
    """``B_G(f_1, ..., f_m)`` summed over all edge index states."""
    report = validate(g)
    if not report.admissible:
        raise GraphError(f"B needs an admissible graph: {report.violation}")
    if len(args) != g.m:
        raise GraphError(f"{len(args)} arguments for a graph with {g.m} external vertices")
    _check_dimensions(algebra, args)
    result = Polynomial(algebra.dim)
    if not report.lie_admissible:
        # a second derivative of the linear bivector
        return result
    targets = g.targets
    if g.n == 0:
        product = Polynomial.constant(algebra.dim)
        for f in args:
            product = product * f
        return product
    source_of, states = _states(g, algebra)
    incoming = [[(v, s) for v, pair in enumerate(targets) for s in (0, 1) if pair[s] == g.n + k] for k in range(g.m)]
    for state in states:
        factors = []
        for k, f in enumerate(args):
            derived = f.partial(state[v][s] for v, s in incoming[k])
            if not derived:
                break
            factors.append(derived)
        else:
            term = Polynomial.constant(algebra.dim)
            for w in range(g.n):
                i, j = state[w]
                if w in source_of:
                    u, s = source_of[w]
                    term = term.scale(algebra.c[i][j][state[u][s]])
                else:
                    term = term * alpha(algebra, i, j)
            for derived in factors:
                term = term * derived
            result = result + term
    return result


def apply_vector(vector: GraphVector, algebra: LieAlgebra, args: Sequence[Polynomial]) -> Polynomial:
    result = Polynomial(algebra.dim)
    for key, coefficient in vector.items():
        result = result + apply_B(key.representative(), algebra, args).scale(coefficient)
    return result


@dataclass
class RelationsReport:
    algebra: str
    n: int
    degree: int
    checked: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def vanishes(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "n": self.n,
            "degree": self.degree,
            "checked": self.checked,
            "failures": self.failures,
            "vanishes": self.vanishes,
        }


def b_respects_relations(
    algebra: LieAlgebra, n: int, degree: int = 2, arities: Sequence[int] = (2, 3)
) -> RelationsReport:
    """Evaluate every Jacobi relation at ``(n, m)`` on monomial arguments of degree ``1..degree``."""
    report = RelationsReport(algebra.name, n, degree)
    basis = list(monomials(algebra.dim, degree, lowest=1))
    for m in arities:
        for index, relation in enumerate(jacobi_relations(n, m)):
            for args in itertools.product(basis, repeat=m):
                report.checked += 1
                value = apply_vector(relation, algebra, args)
                if value:
                    report.failures.append(
                        {
                            "m": m,
                            "relation": index,
                            "args": [next(iter(f.terms)) for f in args],
                            "value": value.to_json(),
                        }
                    )
    logger.debug("B on Jacobi relations at n=%d: %d evaluations", n, report.checked)
    return report
