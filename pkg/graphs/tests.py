import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import networkx as nx
from django.test import TestCase, override_settings

from .algebra import (
    GraphVector,
    attachments,
    bracket,
    compose,
    compose_at,
    coproduct,
    graph_vector_product,
    jacobi_relations,
    prelie_defect,
    quotient_space,
)
from .core import (
    EnumerationBoundError,
    Graph,
    GraphClassKey,
    GraphError,
    LabelledGraph,
    automorphism_count,
    canonicalize,
    connected_after_external_removal,
    enumerate_graphs,
    flip,
    graph_from_json,
    graph_product,
    graph_to_json,
    is_essential,
    labellings,
    labellings_count,
    loop_number,
    relabel,
    validate,
    z_multiplicity,
)
from .linalg import row_echelon


def naive_graphs(n, m):
    """Every vertex-labelled Lie-admissible graph, built from raw ordered target pairs."""
    for targets in itertools.product(
        *(
            [(a, b) for a in range(n + m) for b in range(n + m) if len({v, a, b}) == 3]
            for v in range(n)
        )
    ):
        g = Graph.from_targets(n, m, targets)
        if validate(g).lie_admissible:
            yield g


def as_networkx(g):
    digraph = nx.DiGraph()
    for v in range(g.n + g.m):
        digraph.add_node(v, kind="internal" if v < g.n else f"e{v - g.n}")
    digraph.add_edges_from(g.edges)
    return digraph


def same_kind(a, b):
    return a["kind"] == b["kind"]


def naive_classes(n, m):
    """Isomorphism classes and automorphism group sizes found with networkx."""
    buckets = {}
    for g in naive_graphs(n, m):
        digraph = as_networkx(g)
        digest = nx.weisfeiler_lehman_graph_hash(digraph, node_attr="kind")
        bucket = buckets.setdefault(digest, [])
        if not any(nx.is_isomorphic(digraph, other, node_match=same_kind) for other in bucket):
            bucket.append(digraph)
    auts = []
    for bucket in buckets.values():
        for digraph in bucket:
            matcher = nx.algorithms.isomorphism.DiGraphMatcher(
                digraph, digraph, node_match=same_kind
            )
            auts.append(sum(1 for _ in matcher.isomorphisms_iter()))
    return auts


class BaseSetUp(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.point = Graph.from_targets(0, 1, [])
        cls.empty = Graph.from_targets(0, 2, [])
        cls.wedge = Graph.from_targets(1, 2, [("e1", "e2")])
        cls.wedge_squared = graph_product(cls.wedge, cls.wedge)
        cls.chain_one = Graph.from_targets(2, 2, [("v2", "e1"), ("e1", "e2")])
        cls.chain_two = Graph.from_targets(2, 2, [("v2", "e2"), ("e1", "e2")])
        cls.spiked_wheel = Graph.from_targets(2, 2, [("v2", "e1"), ("v1", "e1")])
        cls.loop_both = Graph.from_targets(2, 2, [("v2", "e1"), ("v1", "e2")])


# Graph tests.
class ValidateTest(BaseSetUp):
    def test_wedge_is_lie_admissible(self):
        report = validate(self.wedge)
        self.assertIs(report.admissible, True)
        self.assertIs(report.lie_admissible, True)
        self.assertIsNone(report.violation)

    def test_looped_edge(self):
        g = Graph(1, 2, ((0, 0), (0, 1)), ((0, 1),))
        self.assertEqual(validate(g).violation, "no looped edges")

    def test_double_edge(self):
        g = Graph(1, 2, ((0, 1), (0, 1)), ((0, 1),))
        self.assertEqual(validate(g).violation, "no double edges")

    def test_edge_out_of_external(self):
        g = Graph(1, 2, ((0, 1), (0, 2), (1, 2)), ((0, 1),))
        self.assertEqual(validate(g).violation, "no edges start in any external vertex")

    def test_three_outgoing_edges(self):
        g = Graph(2, 2, ((0, 2), (0, 3), (0, 1), (1, 2)), ((0, 1), (2, 3)))
        self.assertFalse(validate(g).admissible)

    def test_two_incoming_edges_not_lie_admissible(self):
        g = Graph.from_targets(3, 2, [("v2", "e1"), ("e1", "e2"), ("v2", "e2")])
        report = validate(g)
        self.assertIs(report.admissible, True)
        self.assertIs(report.lie_admissible, False)
        self.assertEqual(report.violation, "at most one edge ends in each internal vertex")

    def test_vertex_names(self):
        g = Graph.from_targets(2, 2, [("v2", "e1"), ("e1", "e2")])
        self.assertEqual(g.targets, ((1, 2), (2, 3)))
        self.assertEqual(str(g), "v1>v2,e1 v2>e1,e2")


class CanonicalFormTest(BaseSetUp):
    def test_wedge_key(self):
        key, sign = canonicalize(self.wedge)
        self.assertEqual(str(key), "1.2:1,2")
        self.assertEqual(sign, 1)
        self.assertEqual(GraphClassKey.parse("1.2:1,2"), key)

    def test_flip_negates_sign(self):
        key, sign = canonicalize(self.wedge)
        flipped_key, flipped_sign = canonicalize(flip(self.wedge, 0))
        self.assertEqual(flipped_key, key)
        self.assertEqual(flipped_sign, -sign)

    def test_two_flips_at_different_vertices_keep_sign(self):
        g = self.chain_one
        self.assertEqual(canonicalize(flip(flip(g, 0), 1)), canonicalize(g))

    def test_relabel_invariance(self):
        rng = random.Random(7)
        for graph_class in enumerate_graphs(3, 2):
            if graph_class.vanishing:
                continue
            permutation = list(range(3))
            rng.shuffle(permutation)
            moved = relabel(graph_class.graph, permutation)
            self.assertEqual(canonicalize(moved), canonicalize(graph_class.graph))

    def test_representative_has_positive_sign(self):
        for graph_class in enumerate_graphs(3, 2):
            if not graph_class.vanishing:
                self.assertEqual(canonicalize(graph_class.graph)[1], 1)

    def test_wedge_squared_automorphisms(self):
        self.assertEqual(automorphism_count(self.wedge_squared), 2)
        self.assertEqual(labellings_count(self.wedge_squared), 6)
        self.assertEqual(z_multiplicity(self.wedge_squared), 12)

    def test_vanishing_class(self):
        # two vertices sharing both targets through a third one flip under the swap
        g = Graph.from_targets(3, 2, [("v2", "v3"), ("e1", "e2"), ("e1", "e2")])
        key, _ = canonicalize(g)
        self.assertIs(key.vanishing, True)
        self.assertEqual(automorphism_count(g, oriented=False), 2)
        self.assertEqual(automorphism_count(g), 1)

    def test_parse_rejects_non_canonical_key(self):
        with self.assertRaises(GraphError):
            GraphClassKey.parse("1.2:2,1")


class EnumerationTest(BaseSetUp):
    def test_small_counts(self):
        self.assertEqual(len(enumerate_graphs(0, 2)), 1)
        self.assertEqual(len(enumerate_graphs(1, 2)), 1)
        self.assertEqual(len(enumerate_graphs(2, 2)), 6)
        self.assertEqual(len(enumerate_graphs(2, 2, essential=True)), 4)

    def test_agrees_with_networkx(self):
        for n, m in ((1, 2), (2, 2), (3, 2), (1, 3), (2, 3)):
            classes = enumerate_graphs(n, m)
            ours = sorted(automorphism_count(c.graph, oriented=False) for c in classes)
            self.assertEqual(ours, sorted(naive_classes(n, m)), msg=f"G({n},{m})")

    def test_orbit_counts_cover_naive_graphs(self):
        for n, m in ((2, 2), (3, 2), (2, 3)):
            orbits = sum(
                Fraction(math.factorial(n) * 2**n, automorphism_count(c.graph, oriented=False))
                for c in enumerate_graphs(n, m)
            )
            self.assertEqual(orbits, sum(1 for _ in naive_graphs(n, m)))

    def test_sorted_by_key(self):
        keys = [c.key for c in enumerate_graphs(3, 2)]
        self.assertEqual(keys, sorted(keys))

    @override_settings(QNTZ_MAX_INTERNAL=2)
    def test_bound(self):
        with self.assertRaises(EnumerationBoundError):
            enumerate_graphs(3, 2)

    def test_rejects_empty_bidegree(self):
        with self.assertRaises(GraphError):
            enumerate_graphs(0, 0)


class StructureTest(BaseSetUp):
    def test_connectivity(self):
        self.assertIs(connected_after_external_removal(self.wedge), True)
        self.assertIs(connected_after_external_removal(self.wedge_squared), False)
        self.assertIs(connected_after_external_removal(self.spiked_wheel), True)
        self.assertIs(connected_after_external_removal(self.empty), False)

    def test_loop_numbers(self):
        self.assertEqual(loop_number(self.wedge), 0)
        self.assertEqual(loop_number(self.wedge_squared), 0)
        self.assertEqual(loop_number(self.chain_one), 0)
        self.assertEqual(loop_number(self.spiked_wheel), 1)

    def test_loop_number_is_additive(self):
        classes = enumerate_graphs(2, 2) + enumerate_graphs(1, 2)
        for a, b in itertools.product(classes, repeat=2):
            product = graph_product(a.graph, b.graph)
            self.assertEqual(loop_number(product), a.loop_number + b.loop_number)

    def test_essential(self):
        self.assertIs(is_essential(self.loop_both), True)
        self.assertIs(is_essential(self.spiked_wheel), False)

    def test_product_identity_associativity_commutativity(self):
        self.assertEqual(canonicalize(graph_product(self.empty, self.wedge)), canonicalize(self.wedge))
        rng = random.Random(7)
        pool = [c.graph for c in enumerate_graphs(2, 2) + enumerate_graphs(1, 2)]
        for _ in range(10):
            a, b, c = (rng.choice(pool) for _ in range(3))
            left = graph_product(graph_product(a, b), c)
            right = graph_product(a, graph_product(b, c))
            self.assertEqual(canonicalize(left)[0], canonicalize(right)[0])
            self.assertEqual(canonicalize(graph_product(a, b))[0], canonicalize(graph_product(b, a))[0])

    def test_product_requires_matching_m(self):
        with self.assertRaises(GraphError):
            graph_product(self.wedge, self.point)


class LabelledGraphTest(BaseSetUp):
    def test_standard_labelling(self):
        labelled = LabelledGraph.standard(self.chain_one)
        self.assertEqual(labelled.sign, 1)
        self.assertEqual(labelled.order, (0, 1, 2, 3))

    def test_labellings_split_evenly(self):
        signs = Counter(lg.sign for lg in labellings(self.chain_one))
        self.assertEqual(signs, Counter({1: 12, -1: 12}))

    def test_rejects_non_bijective_labels(self):
        with self.assertRaises(GraphError):
            LabelledGraph(self.wedge, (0, 0))

    def test_json(self):
        data = graph_to_json(self.chain_one, labels=[1, 0, 2, 3])
        self.assertEqual(data["edges"][0], ["v1", "v2"])
        self.assertEqual(data["vertex_edge_order"], {"v1": [0, 1], "v2": [2, 3]})
        self.assertEqual(graph_from_json(data), self.chain_one)


# Algebra tests.
class LinalgTest(TestCase):
    def test_row_echelon(self):
        reduced, pivots = row_echelon([[2, 4, 0], [1, 2, 1], [3, 6, 1]], 3)
        self.assertEqual(pivots, [0, 2])
        self.assertEqual(reduced[0], [1, 2, 0])
        self.assertEqual(row_echelon([[1, 1], [2, 2]], 2)[1], [0])


class GraphVectorTest(BaseSetUp):
    def test_as_signs_fold_into_coefficients(self):
        v = GraphVector.from_graph(self.wedge) + GraphVector.from_graph(flip(self.wedge, 0))
        self.assertIs(v.is_zero(), True)

    def test_vanishing_classes_are_never_stored(self):
        g = Graph.from_targets(3, 2, [("v2", "v3"), ("e1", "e2"), ("e1", "e2")])
        self.assertIs(GraphVector.from_graph(g).is_zero(), True)

    def test_arithmetic(self):
        v = GraphVector.from_graph(self.chain_one, Fraction(1, 2))
        w = GraphVector.from_graph(self.chain_two, 3)
        total = v * 2 + w - w
        self.assertEqual(total.coefficient(self.chain_one), 1)
        self.assertEqual(len(total), 1)

    def test_bidegree_mismatch(self):
        with self.assertRaises(GraphError):
            GraphVector.from_graph(self.wedge) + GraphVector.from_graph(self.chain_one)

    def test_product(self):
        v = graph_vector_product(GraphVector.from_graph(self.wedge), GraphVector.from_graph(self.wedge))
        self.assertEqual(v.coefficient(self.wedge_squared), 1)

    def test_json(self):
        v = GraphVector.from_graph(self.chain_two, Fraction(1, 12))
        self.assertEqual(GraphVector.from_json(v.to_json()), v)


class CompositionTest(BaseSetUp):
    @classmethod
    def setUpTestData(cls):
        super().setUpTestData()
        cls.pool = [GraphVector.from_graph(g) for g in (cls.empty, cls.wedge)]
        cls.pool += [GraphVector.from_graph(c.graph) for c in enumerate_graphs(2, 2)[:2]]

    def test_insert_point(self):
        for i in (1, 2):
            self.assertEqual(compose_at(self.chain_one, self.point, i), GraphVector.from_graph(self.chain_one))

    def test_wedge_into_wedge(self):
        graphs = list(attachments(self.wedge, self.wedge, 1))
        self.assertEqual(len(graphs), 3)
        self.assertTrue(all(g.n == 2 and g.m == 3 for g in graphs))
        self.assertEqual(len(compose_at(self.wedge, self.wedge, 1)), 3)

    def test_slot_out_of_range(self):
        with self.assertRaises(GraphError):
            compose_at(self.wedge, self.wedge, 3)

    def test_prelie_identity(self):
        # graded: arity-2 graphs have odd degree
        for x, y, z in itertools.product(self.pool[:2], repeat=3):
            self.assertEqual(prelie_defect(x, y, z), -prelie_defect(x, z, y))
        for x, y, z in itertools.permutations(self.pool[1:], 3):
            self.assertEqual(prelie_defect(x, y, z), -prelie_defect(x, z, y))

    def test_prelie_identity_with_unary_insertion(self):
        point = GraphVector.from_graph(self.point)
        for x, y in itertools.product(self.pool[:2], repeat=2):
            self.assertEqual(prelie_defect(x, y, point), prelie_defect(x, point, y))

    def test_bracket_antisymmetry(self):
        for v, w in itertools.product(self.pool, repeat=2):
            self.assertEqual(bracket(v, w), -bracket(w, v))

    def test_composition_factors_through_relations(self):
        empty = GraphVector.from_graph(self.empty)
        space = quotient_space(2, 4)
        for relation in jacobi_relations(2, 3):
            self.assertIs(space.projects_to_zero(compose(relation, empty)), True)
            self.assertIs(space.projects_to_zero(compose(empty, relation)), True)


class QuotientTest(BaseSetUp):
    def test_dimensions(self):
        self.assertEqual(quotient_space(0, 2).dim, 1)
        self.assertEqual(quotient_space(1, 2).dim, 1)
        self.assertEqual(quotient_space(2, 2).dim, 6)
        self.assertEqual(quotient_space(2, 2).relation_rank, 0)

    def test_no_relations_below_two_vertices(self):
        self.assertEqual(jacobi_relations(1, 2), [])

    def test_relations_project_to_zero(self):
        space = quotient_space(2, 3)
        relations = jacobi_relations(2, 3)
        self.assertTrue(relations)
        for relation in relations:
            self.assertIs(space.projects_to_zero(relation), True)

    def test_dimension_matches_relation_rank(self):
        space = quotient_space(2, 3)
        columns = list(space.classes)
        rows = [[r.coefficient(key) for key in columns] for r in jacobi_relations(2, 3)]
        self.assertEqual(space.dim, len(columns) - len(row_echelon(rows, len(columns))[1]))

    def test_projection_is_linear_and_fixes_basis(self):
        space = quotient_space(2, 3)
        vectors = [GraphVector(2, 3, {key: Fraction(1)}) for key in space.classes]
        for j, key in enumerate(space.basis):
            expected = tuple(Fraction(int(i == j)) for i in range(space.dim))
            self.assertEqual(space.project(GraphVector(2, 3, {key: Fraction(1)})), expected)
        a, b = vectors[0], vectors[-1]
        combined = space.project(a * Fraction(2, 3) + b * -5)
        expected = tuple(
            Fraction(2, 3) * x - 5 * y for x, y in zip(space.project(a), space.project(b))
        )
        self.assertEqual(combined, expected)

    def test_json(self):
        data = quotient_space(1, 2).to_json()
        self.assertEqual(data, {"n": 1, "m": 2, "basis": ["1.2:1,2"], "dim": 1, "relation_rank": 0})


class CoproductTest(BaseSetUp):
    def test_wedge(self):
        terms = coproduct(self.wedge)
        self.assertEqual(len(terms), 3)
        whole = [t for t in terms if t.subgraph.n == 1]
        self.assertEqual(len(whole), 1)
        self.assertEqual((whole[0].quotient.n, whole[0].quotient.m), (0, 1))

    def test_single_external_terms_present(self):
        for graph_class in enumerate_graphs(2, 2):
            terms = coproduct(graph_class.graph)
            trivial = [t for t in terms if t.subgraph.n == 0 and t.subgraph.m == 1]
            self.assertEqual(len(trivial), 2)

    def test_wedge_squared_terms(self):
        self.assertEqual(len(coproduct(self.wedge_squared)), 3)

    def test_graph_is_a_summand_of_the_reinsertion(self):
        for graph_class in enumerate_graphs(2, 2) + enumerate_graphs(2, 3):
            key, _ = canonicalize(graph_class.graph)
            for term in coproduct(graph_class.graph):
                keys = {
                    canonicalize(g)[0]
                    for g in attachments(term.quotient, term.subgraph, term.position)
                }
                self.assertIn(key, keys)
