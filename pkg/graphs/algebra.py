"""
Formal rational combinations of graph classes and the operations on them:
product, insertion, the pre-Lie composition, Jacobi relations, the quotient
spaces they cut out, and the coproduct.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Tuple, Union

from .core import (
    Graph,
    GraphClassKey,
    GraphError,
    canonicalize,
    enumerate_graphs,
    graph_product,
    validate,
)
from .linalg import row_echelon

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class GraphVector:
    """A finite sum of canonical graph classes of one bidegree ``(n, m)``."""

    def __init__(self, n: int, m: int, terms: Dict[GraphClassKey, Fraction] = None):
        self.n = n
        self.m = m
        self.terms: Dict[GraphClassKey, Fraction] = {}
        for key, coefficient in (terms or {}).items():
            self.add_key(key, coefficient)

    @classmethod
    def from_graph(cls, g: Graph, coefficient: Scalar = 1) -> "GraphVector":
        vector = cls(g.n, g.m)
        vector.add_graph(g, coefficient)
        return vector

    @classmethod
    def zero_like(cls, other: "GraphVector") -> "GraphVector":
        return cls(other.n, other.m)

    def _check(self, n: int, m: int):
        if (n, m) != (self.n, self.m):
            raise GraphError(
                f"bidegree ({n}, {m}) does not match vector of bidegree ({self.n}, {self.m})"
            )

    def add_key(self, key: GraphClassKey, coefficient: Scalar):
        self._check(key.n, key.m)
        if key.vanishing:
            return
        total = self.terms.get(key, Fraction(0)) + Fraction(coefficient)
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    def add_graph(self, g: Graph, coefficient: Scalar = 1):
        key, sign = canonicalize(g)
        self.add_key(key, sign * Fraction(coefficient))

    def coefficient(self, g: Union[Graph, GraphClassKey]) -> Fraction:
        if isinstance(g, GraphClassKey):
            return self.terms.get(g, Fraction(0))
        key, sign = canonicalize(g)
        if key.vanishing:
            return Fraction(0)
        return sign * self.terms.get(key, Fraction(0))

    def items(self) -> Iterator[Tuple[GraphClassKey, Fraction]]:
        return iter(sorted(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return self.items()

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GraphVector):
            return NotImplemented
        return (self.n, self.m, self.terms) == (other.n, other.m, other.terms)

    def __add__(self, other: "GraphVector") -> "GraphVector":
        result = GraphVector(self.n, self.m, self.terms)
        for key, coefficient in other.terms.items():
            result.add_key(key, coefficient)
        return result

    def __neg__(self) -> "GraphVector":
        return self * -1

    def __sub__(self, other: "GraphVector") -> "GraphVector":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "GraphVector":
        return GraphVector(
            self.n, self.m, {key: c * Fraction(scalar) for key, c in self.terms.items()}
        )

    __rmul__ = __mul__

    def __repr__(self):
        body = " + ".join(f"({c})[{key}]" for key, c in self.items()) or "0"
        return f"GraphVector({self.n}, {self.m}: {body})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "terms": {str(key): str(c) for key, c in self.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "GraphVector":
        vector = cls(int(data["n"]), int(data["m"]))
        for text, coefficient in data["terms"].items():
            vector.add_key(GraphClassKey.parse(text), Fraction(coefficient))
        return vector


def graph_vector_product(v: GraphVector, w: GraphVector) -> GraphVector:
    if v.m != w.m:
        raise GraphError(f"cannot multiply vectors with {v.m} and {w.m} external vertices")
    result = GraphVector(v.n + w.n, v.m)
    for key, a in v.terms.items():
        for key2, b in w.terms.items():
            result.add_graph(graph_product(key.representative(), key2.representative()), a * b)
    return result


# Insertion
def attachments(g: Graph, g2: Graph, i: int) -> Iterator[Graph]:
    """
    Every Lie-admissible graph obtained by inserting ``g2`` at the external
    vertex ``e_i`` of ``g``, ``i`` counted from 1.
    """
    if not 1 <= i <= g.m:
        raise GraphError(f"insertion slot {i} outside 1..{g.m}")
    for graph in (g, g2):
        if not validate(graph).lie_admissible:
            raise GraphError("insertion needs Lie-admissible graphs")
    n, m = g.n + g2.n, g.m + g2.m - 1
    slot = g.n + i - 1

    def outer(t: int) -> int:
        if t < g.n:
            return t
        k = t - g.n
        return n + (k if k < i - 1 else k + g2.m - 1)

    def inner(t: int) -> int:
        if t < g2.n:
            return g.n + t
        return n + i - 1 + (t - g2.n)

    outer_targets = g.targets
    inner_targets = [tuple(inner(t) for t in pair) for pair in g2.targets]
    incoming = [(v, s) for v, pair in enumerate(outer_targets) for s in (0, 1) if pair[s] == slot]
    choices = [inner(t) for t in range(g2.n + g2.m)]
    for landing in itertools.product(choices, repeat=len(incoming)):
        targets = [[outer(t) for t in pair] for pair in outer_targets]
        for (v, s), target in zip(incoming, landing):
            targets[v][s] = target
        candidate = Graph.from_targets(n, m, [tuple(p) for p in targets] + inner_targets)
        if validate(candidate).lie_admissible:
            yield candidate


def compose_at(g: Graph, g2: Graph, i: int) -> GraphVector:
    result = GraphVector(g.n + g2.n, g.m + g2.m - 1)
    for candidate in attachments(g, g2, i):
        result.add_graph(candidate)
    return result


def insertion_sign(i: int, arity: int) -> int:
    """Sign of the ``i``-th insertion of an ``arity``-ary graph; ``(-1)**i`` for arity 2."""
    return -((-1) ** ((i - 1) * (arity - 1)))


def compose(v: GraphVector, w: GraphVector) -> GraphVector:
    result = GraphVector(v.n + w.n, v.m + w.m - 1)
    for key, a in v.terms.items():
        outer = key.representative()
        for key2, b in w.terms.items():
            inner = key2.representative()
            for i in range(1, v.m + 1):
                result += compose_at(outer, inner, i) * (insertion_sign(i, w.m) * a * b)
    return result


def bracket(v: GraphVector, w: GraphVector) -> GraphVector:
    return compose(v, w) - compose(w, v)


def prelie_defect(x: GraphVector, y: GraphVector, z: GraphVector) -> GraphVector:
    return compose(x, compose(y, z)) - compose(compose(x, y), z)


# Jacobi relations
def _jacobi_terms(targets, u: int, w: int) -> List[Tuple[Tuple[Tuple[int, int], ...], int]]:
    """The cyclic rotations around the internal edge ``u -> w`` with their orientation signs."""
    left, right = targets[u]
    sign = 1
    if left == w:
        c = right
    else:
        c, sign = left, -1
    a, b = targets[w]
    terms = []
    for x, (y, z) in ((c, (a, b)), (a, (b, c)), (b, (c, a))):
        if y == z:
            continue
        rotated = list(targets)
        rotated[u] = (w, x)
        rotated[w] = (y, z)
        terms.append((tuple(rotated), sign))
    return terms


def _relations_at(g: Graph) -> Iterator[GraphVector]:
    targets = g.targets
    for u, pair in enumerate(targets):
        for w in pair:
            if w >= g.n or u in targets[w]:
                continue
            relation = GraphVector(g.n, g.m)
            for rotated, sign in _jacobi_terms(targets, u, w):
                relation.add_graph(Graph.from_targets(g.n, g.m, rotated), sign)
            if relation:
                yield relation


def _normalized(vector: GraphVector) -> Tuple:
    (first, lead), *_ = vector.items()
    return tuple((key, c / lead) for key, c in vector.items())


@lru_cache(maxsize=None)
def _jacobi_relations(n: int, m: int) -> Tuple[GraphVector, ...]:
    if n < 2:
        return ()
    seen = {}
    for graph_class in enumerate_graphs(n, m):
        for relation in _relations_at(graph_class.graph):
            seen.setdefault(_normalized(relation), relation)
    logger.debug("generated %d Jacobi relations in G(%d,%d)", len(seen), n, m)
    return tuple(seen[k] for k in sorted(seen, key=lambda t: [(str(a), b) for a, b in t]))


def jacobi_relations(n: int, m: int) -> List[GraphVector]:
    return list(_jacobi_relations(n, m))


# Quotients
@dataclass(frozen=True)
class QuotientSpace:
    n: int
    m: int
    classes: Tuple[GraphClassKey, ...]
    basis: Tuple[GraphClassKey, ...]
    reductions: Dict[GraphClassKey, Dict[GraphClassKey, Fraction]]
    relation_rank: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, vector: GraphVector) -> Tuple[Fraction, ...]:
        if (vector.n, vector.m) != (self.n, self.m):
            raise GraphError(
                f"vector of bidegree ({vector.n}, {vector.m}) projected into J({self.n},{self.m})"
            )
        coordinates = dict.fromkeys(self.basis, Fraction(0))
        for key, c in vector.terms.items():
            if key in coordinates:
                coordinates[key] += c
            else:
                for basis_key, r in self.reductions[key].items():
                    coordinates[basis_key] += c * r
        return tuple(coordinates[key] for key in self.basis)

    def projects_to_zero(self, vector: GraphVector) -> bool:
        return not any(self.project(vector))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "basis": [str(key) for key in self.basis],
            "dim": self.dim,
            "relation_rank": self.relation_rank,
        }


@lru_cache(maxsize=None)
def quotient_space(n: int, m: int) -> QuotientSpace:
    classes = tuple(c.key for c in enumerate_graphs(n, m) if not c.vanishing)
    # latest classes first so that elimination keeps the earliest ones as basis
    columns = list(reversed(classes))
    position = {key: j for j, key in enumerate(columns)}
    rows = []
    for relation in jacobi_relations(n, m):
        row = [Fraction(0)] * len(columns)
        for key, c in relation.terms.items():
            row[position[key]] = c
        rows.append(row)
    reduced, pivots = row_echelon(rows, len(columns))
    pivot_set = set(pivots)
    basis = tuple(key for key in classes if position[key] not in pivot_set)
    reductions = {}
    for row, pivot in zip(reduced, pivots):
        reductions[columns[pivot]] = {
            key: -row[position[key]] for key in basis if row[position[key]]
        }
    logger.debug(
        "J(%d,%d): %d classes, relation rank %d", n, m, len(classes), len(pivots)
    )
    return QuotientSpace(n, m, classes, basis, reductions, len(pivots))


# Coproduct
class CoproductTerm(NamedTuple):
    quotient: Graph
    subgraph: Graph
    position: int


def _contract(g: Graph, block: range, inside: Tuple[int, ...]) -> CoproductTerm:
    members = set(inside) | {g.n + k for k in block}
    outside = [v for v in range(g.n) if v not in members]
    q_n = len(outside)
    q_m = g.m - len(block) + 1
    first = block[0]

    def in_quotient(t: int) -> int:
        if t in members:
            return q_n + first
        if t < g.n:
            return outside.index(t)
        k = t - g.n
        return q_n + (k if k < first else k - len(block) + 1)

    def in_subgraph(t: int) -> int:
        if t < g.n:
            return inside.index(t)
        return len(inside) + t - g.n - first

    targets = g.targets
    quotient = Graph.from_targets(
        q_n, q_m, [tuple(in_quotient(t) for t in targets[v]) for v in outside]
    )
    subgraph = Graph.from_targets(
        len(inside), len(block), [tuple(in_subgraph(t) for t in targets[v]) for v in inside]
    )
    return CoproductTerm(quotient, subgraph, first + 1)


def coproduct(g: Graph) -> List[CoproductTerm]:
    """
    Terms ``G/G' (x) G'`` over the subgraphs ``G'`` spanned by a consecutive block
    of external vertices and internal vertices whose edges stay inside.
    """
    if not validate(g).lie_admissible:
        raise GraphError("coproduct needs a Lie-admissible graph")
    targets = g.targets
    terms = []
    for start in range(g.m):
        for stop in range(start + 1, g.m + 1):
            block = range(start, stop)
            allowed = {g.n + k for k in block}
            for size in range(g.n + 1):
                for inside in itertools.combinations(range(g.n), size):
                    closed = allowed | set(inside)
                    if any(t not in closed for v in inside for t in targets[v]):
                        continue
                    term = _contract(g, block, inside)
                    if validate(term.quotient).lie_admissible:
                        terms.append(term)
    return terms
