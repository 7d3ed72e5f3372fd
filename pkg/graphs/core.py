"""
Lie-admissible graphs: representation, validation, canonical forms and
enumeration.

Vertices are integers. Internal vertices are ``0..n-1`` and external
vertices are ``n..n+m-1``; the names ``v1..vn`` and ``e1..em`` are used in
JSON and in labels. The standard edge order lists the two outgoing edges of
each internal vertex in vertex order, first the left edge then the right one.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from django.conf import settings

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Targets = Tuple[Tuple[int, int], ...]
VertexRef = Union[int, str]


class GraphError(ValueError):
    pass


class EnumerationBoundError(GraphError):
    pass


def vertex_name(vertex: int, n: int) -> str:
    if vertex < n:
        return f"v{vertex + 1}"
    return f"e{vertex - n + 1}"


def vertex_id(ref: VertexRef, n: int) -> int:
    if isinstance(ref, int):
        return ref
    kind, index = ref[0], int(ref[1:]) - 1
    if kind == "v":
        return index
    if kind == "e":
        return n + index
    raise GraphError(f"unknown vertex name {ref!r}")


@dataclass(frozen=True)
class Graph:
    n: int
    m: int
    edges: Tuple[Edge, ...]
    orientation: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_targets(
        cls, n: int, m: int, targets: Iterable[Tuple[VertexRef, VertexRef]]
    ) -> "Graph":
        edges: List[Edge] = []
        orientation = []
        for v, (left, right) in enumerate(targets):
            orientation.append((len(edges), len(edges) + 1))
            edges.append((v, vertex_id(left, n)))
            edges.append((v, vertex_id(right, n)))
        return cls(n, m, tuple(edges), tuple(orientation))

    @property
    def targets(self) -> Targets:
        if len(self.orientation) != self.n:
            raise GraphError("orientation must order the outgoing edges of every vertex")
        return tuple(
            (self.edges[left][1], self.edges[right][1]) for left, right in self.orientation
        )

    @property
    def standard_order(self) -> Tuple[int, ...]:
        return tuple(e for pair in self.orientation for e in pair)

    def external(self, k: int) -> int:
        return self.n + k

    def __str__(self):
        return " ".join(
            f"{vertex_name(v, self.n)}>{vertex_name(a, self.n)},{vertex_name(b, self.n)}"
            for v, (a, b) in enumerate(self.targets)
        ) or f"empty({self.m})"


@dataclass(frozen=True)
class ValidationReport:
    admissible: bool
    lie_admissible: bool
    violation: Optional[str] = None


def validate(g: Graph) -> ValidationReport:
    total = g.n + g.m
    seen = set()
    outgoing = [0] * total
    incoming = [0] * total
    for source, target in g.edges:
        if not (0 <= source < total and 0 <= target < total):
            return ValidationReport(False, False, "edge endpoint out of range")
        if source == target:
            return ValidationReport(False, False, "no looped edges")
        if (source, target) in seen:
            return ValidationReport(False, False, "no double edges")
        if source >= g.n:
            return ValidationReport(False, False, "no edges start in any external vertex")
        seen.add((source, target))
        outgoing[source] += 1
        incoming[target] += 1
    if any(outgoing[v] != 2 for v in range(g.n)):
        return ValidationReport(
            False, False, "exactly two edges start in each internal vertex"
        )
    if len(g.orientation) != g.n or any(
        left == right
        or not (0 <= left < len(g.edges) and 0 <= right < len(g.edges))
        or g.edges[left][0] != v
        or g.edges[right][0] != v
        for v, (left, right) in enumerate(g.orientation)
    ):
        return ValidationReport(
            False, False, "orientation must order the two outgoing edges of each vertex"
        )
    if any(incoming[v] > 1 for v in range(g.n)):
        return ValidationReport(
            True, False, "at most one edge ends in each internal vertex"
        )
    return ValidationReport(True, True)


def _require_admissible(g: Graph) -> Targets:
    report = validate(g)
    if not report.admissible:
        raise GraphError(f"graph is not admissible: {report.violation}")
    return g.targets


# Canonical forms
def _colour_classes(n: int, targets: Targets) -> List[List[int]]:
    parents: List[List[int]] = [[] for _ in range(n)]
    for v, pair in enumerate(targets):
        for t in pair:
            if t < n:
                parents[t].append(v)

    def rank(signatures):
        order = sorted(set(signatures))
        return [order.index(s) for s in signatures]

    colours = rank(
        [
            (
                len(parents[v]),
                tuple(sorted(t for t in targets[v] if t >= n)),
                sum(t < n for t in targets[v]),
            )
            for v in range(n)
        ]
    )
    for _ in range(n):
        refined = rank(
            [
                (
                    colours[v],
                    tuple(sorted(colours[t] for t in targets[v] if t < n)),
                    tuple(sorted(colours[u] for u in parents[v])),
                )
                for v in range(n)
            ]
        )
        if len(set(refined)) == len(set(colours)):
            break
        colours = refined
    classes: Dict[int, List[int]] = {}
    for v in range(n):
        classes.setdefault(colours[v], []).append(v)
    return [classes[c] for c in sorted(classes)]


@dataclass(frozen=True)
class _Canonical:
    code: Targets
    sign: int
    aut_all: int
    aut_even: int


@lru_cache(maxsize=None)
def _canonical(n: int, targets: Targets) -> _Canonical:
    classes = _colour_classes(n, targets)
    best = None
    best_sign = 0
    same = other = 0
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        new = [0] * n
        for new_id, old in enumerate(v for block in choice for v in block):
            new[old] = new_id
        code: List[Tuple[int, int]] = [None] * n  # type: ignore[list-item]
        sign = 1
        for v, (a, b) in enumerate(targets):
            a = new[a] if a < n else a
            b = new[b] if b < n else b
            if a > b:
                a, b = b, a
                sign = -sign
            code[new[v]] = (a, b)
        candidate = tuple(code)
        if best is None or candidate < best:
            best, best_sign, same, other = candidate, sign, 1, 0
        elif candidate == best:
            if sign == best_sign:
                same += 1
            else:
                other += 1
    return _Canonical(best or (), best_sign or 1, same + other, same)


@dataclass(frozen=True, order=True)
class GraphClassKey:
    n: int
    m: int
    code: Targets
    vanishing: bool = field(default=False, compare=False)

    @property
    def text(self) -> str:
        return f"{self.n}.{self.m}:" + ";".join(f"{a},{b}" for a, b in self.code)

    def __str__(self):
        return self.text

    @property
    def label(self) -> str:
        return str(self.representative())

    def representative(self) -> Graph:
        return Graph.from_targets(self.n, self.m, self.code)

    @classmethod
    def parse(cls, text: str) -> "GraphClassKey":
        head, _, body = text.partition(":")
        n, m = (int(x) for x in head.split("."))
        code = tuple(
            tuple(int(x) for x in pair.split(",")) for pair in body.split(";") if pair
        )
        key, sign = canonicalize(Graph.from_targets(n, m, code))
        if key.code != code:
            raise GraphError(f"{text!r} is not a canonical class key")
        return key


def canonicalize(g: Graph) -> Tuple[GraphClassKey, int]:
    targets = _require_admissible(g)
    canon = _canonical(g.n, targets)
    key = GraphClassKey(g.n, g.m, canon.code, vanishing=canon.aut_all != canon.aut_even)
    return key, canon.sign


def automorphism_count(g: Graph, oriented: bool = True) -> int:
    canon = _canonical(g.n, _require_admissible(g))
    return canon.aut_even if oriented else canon.aut_all


def edge_automorphisms(g: Graph) -> List[Tuple[int, ...]]:
    """Automorphisms fixing the external vertices, as permutations of edge indices."""
    targets = _require_admissible(g)
    pairs = [frozenset(pair) for pair in targets]
    classes = _colour_classes(g.n, targets)
    flat = [v for c in classes for v in c]
    found = []
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        image = [0] * g.n
        for old, new in zip(flat, (v for block in choice for v in block)):
            image[old] = new

        def move(t: int) -> int:
            return image[t] if t < g.n else t

        if any(frozenset(move(t) for t in targets[v]) != pairs[image[v]] for v in range(g.n)):
            continue
        edge_map = [0] * len(g.edges)
        for v, pair in enumerate(targets):
            for s, t in enumerate(pair):
                s_image = targets[image[v]].index(move(t))
                edge_map[g.orientation[v][s]] = g.orientation[image[v]][s_image]
        found.append(tuple(edge_map))
    return found


def labellings_count(g: Graph) -> int:
    """Labellings of one orientation class, ``(2n)!/(2|Aut G|)``."""
    if g.n == 0:
        return 1
    return math.factorial(2 * g.n) // (2 * automorphism_count(g))


def z_multiplicity(g: Graph) -> int:
    """Labelled representatives over both orientations, ``(2n)!/|Aut G|``."""
    return math.factorial(2 * g.n) // automorphism_count(g)


def _internal_components(g: Graph) -> List[List[int]]:
    adjacency: List[set] = [set() for _ in range(g.n)]
    for source, target in g.edges:
        if target < g.n:
            adjacency[source].add(target)
            adjacency[target].add(source)
    components, seen = [], set()
    for start in range(g.n):
        if start in seen:
            continue
        stack, component = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            component.append(v)
            for w in adjacency[v] - seen:
                seen.add(w)
                stack.append(w)
        components.append(sorted(component))
    return components


def internal_components(g: Graph) -> List[List[int]]:
    _require_admissible(g)
    return _internal_components(g)


def loop_number(g: Graph) -> int:
    _require_admissible(g)
    internal_edges = sum(1 for _, target in g.edges if target < g.n)
    return internal_edges - g.n + len(_internal_components(g))


def connected_after_external_removal(g: Graph) -> bool:
    _require_admissible(g)
    return g.n > 0 and len(_internal_components(g)) == 1


def is_essential(g: Graph) -> bool:
    _require_admissible(g)
    hit = {target for _, target in g.edges}
    return all(g.external(k) in hit for k in range(g.m))


def relabel(g: Graph, permutation: Sequence[int]) -> Graph:
    targets = _require_admissible(g)
    if sorted(permutation) != list(range(g.n)):
        raise GraphError("relabelling must permute the internal vertices")
    moved: List[Tuple[int, int]] = [None] * g.n  # type: ignore[list-item]
    for v, pair in enumerate(targets):
        moved[permutation[v]] = tuple(permutation[t] if t < g.n else t for t in pair)
    return Graph.from_targets(g.n, g.m, moved)


def flip(g: Graph, vertex: int) -> Graph:
    targets = list(_require_admissible(g))
    left, right = targets[vertex]
    targets[vertex] = (right, left)
    return Graph.from_targets(g.n, g.m, targets)


def graph_product(g: Graph, g2: Graph) -> Graph:
    if g.m != g2.m:
        raise GraphError(f"cannot multiply graphs with {g.m} and {g2.m} external vertices")
    first, second = _require_admissible(g), _require_admissible(g2)
    n = g.n + g2.n

    def shift_first(t: int) -> int:
        return t if t < g.n else t + g2.n

    def shift_second(t: int) -> int:
        return t + g.n

    targets = [tuple(shift_first(t) for t in pair) for pair in first]
    targets += [tuple(shift_second(t) for t in pair) for pair in second]
    return Graph.from_targets(n, g.m, targets)


@dataclass(frozen=True)
class GraphClass:
    key: GraphClassKey
    graph: Graph
    aut_count: int

    @property
    def loop_number(self) -> int:
        return loop_number(self.graph)

    @property
    def connected(self) -> bool:
        return connected_after_external_removal(self.graph)

    @property
    def essential(self) -> bool:
        return is_essential(self.graph)

    @property
    def vanishing(self) -> bool:
        return self.key.vanishing


def graph_class(g: Graph) -> GraphClass:
    key, _ = canonicalize(g)
    return GraphClass(key, key.representative(), automorphism_count(key.representative()))


def _check_bound(n: int, m: int) -> None:
    if n < 0 or m < 0 or n + m < 1:
        raise GraphError(f"no graphs with n={n}, m={m}")
    if n > settings.QNTZ_MAX_INTERNAL:
        raise EnumerationBoundError(
            f"n={n} exceeds the enumeration bound {settings.QNTZ_MAX_INTERNAL}"
        )


def _assignments(n: int, m: int) -> Iterator[Targets]:
    vertices = range(n + m)
    chosen: List[Tuple[int, int]] = []
    indegree = [0] * n

    def extend(v: int):
        if v == n:
            yield tuple(chosen)
            return
        for a, b in itertools.combinations([w for w in vertices if w != v], 2):
            if (a < n and indegree[a]) or (b < n and indegree[b]):
                continue
            for t in (a, b):
                if t < n:
                    indegree[t] += 1
            chosen.append((a, b))
            yield from extend(v + 1)
            chosen.pop()
            for t in (a, b):
                if t < n:
                    indegree[t] -= 1

    yield from extend(0)


@lru_cache(maxsize=None)
def _enumerate(n: int, m: int) -> Tuple[GraphClass, ...]:
    found: Dict[Targets, _Canonical] = {}
    for targets in _assignments(n, m):
        canon = _canonical(n, targets)
        found.setdefault(canon.code, canon)
    classes = []
    for code in sorted(found):
        canon = found[code]
        key = GraphClassKey(n, m, code, vanishing=canon.aut_all != canon.aut_even)
        classes.append(GraphClass(key, key.representative(), canon.aut_even))
    logger.debug("enumerated %d classes in G(%d,%d)", len(classes), n, m)
    return tuple(classes)


def enumerate_graphs(n: int, m: int, essential: bool = False) -> List[GraphClass]:
    _check_bound(n, m)
    classes = list(_enumerate(n, m))
    if essential:
        classes = [c for c in classes if n == 0 or c.essential]
    return classes


@dataclass(frozen=True)
class LabelledGraph:
    graph: Graph
    labels: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.labels) != list(range(len(self.graph.edges))):
            raise GraphError("edge labels must be a bijection onto 0..2n-1")

    @classmethod
    def standard(cls, g: Graph) -> "LabelledGraph":
        labels = [0] * len(g.edges)
        for position, e in enumerate(g.standard_order):
            labels[e] = position
        return cls(g, tuple(labels))

    @property
    def order(self) -> Tuple[int, ...]:
        """Labels of the edges listed in standard order."""
        return tuple(self.labels[e] for e in self.graph.standard_order)

    @property
    def sign(self) -> int:
        return permutation_sign(self.order)


def permutation_sign(permutation: Sequence[int]) -> int:
    seen = [False] * len(permutation)
    sign = 1
    for start in range(len(permutation)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = permutation[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def labellings(g: Graph) -> Iterator[LabelledGraph]:
    order = g.standard_order
    for permutation in itertools.permutations(range(len(order))):
        labels = [0] * len(order)
        for position, e in enumerate(order):
            labels[e] = permutation[position]
        yield LabelledGraph(g, tuple(labels))


def graph_to_json(g: Graph, labels: Optional[Sequence[int]] = None) -> dict:
    data = {
        "n": g.n,
        "m": g.m,
        "edges": [[vertex_name(s, g.n), vertex_name(t, g.n)] for s, t in g.edges],
        "vertex_edge_order": {
            vertex_name(v, g.n): list(pair) for v, pair in enumerate(g.orientation)
        },
    }
    if labels is not None:
        data["edge_labels"] = list(labels)
    return data


def graph_from_json(data: dict) -> Graph:
    try:
        n, m = int(data["n"]), int(data["m"])
        edges = tuple(
            (vertex_id(s, n), vertex_id(t, n)) for s, t in data["edges"]
        )
        order = data.get("vertex_edge_order", {})
        orientation = tuple(
            tuple(order[vertex_name(v, n)]) for v in range(n) if vertex_name(v, n) in order
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    return Graph(n, m, edges, orientation)


def labelled_from_json(data: dict) -> LabelledGraph:
    g = graph_from_json(data)
    if "edge_labels" in data:
        return LabelledGraph(g, tuple(int(x) for x in data["edge_labels"]))
    return LabelledGraph.standard(g)
