import itertools
from fractions import Fraction

import numpy as np
from django.test import TestCase

from graphs.core import Graph, GraphError, flip
from weights.engine import MissingWeightError, counted_table, semicircle_table

from .gutt import gutt_star, gutt_star_series
from .lie import LieAlgebra, LieAlgebraError, abelian, affine2, heisenberg, lie_algebra, sl2
from .operators import apply_B, b_respects_relations, poisson_bracket
from .polynomials import HSeries, Polynomial, monomials, random_polynomial
from .product import associativity_residual, commutator, compare_products, star, star_series


def x(dim, i):
    return Polynomial.variable(dim, i)


# Create your tests here.
class BaseSetUp(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.wedge = Graph.from_targets(1, 2, [("e1", "e2")])
        cls.chain_two = Graph.from_targets(2, 2, [("v2", "e2"), ("e1", "e2")])
        cls.table = semicircle_table(2)


class LieAlgebraTest(TestCase):
    def test_shipped_algebras(self):
        for name in ("abelian", "heisenberg", "sl2", "affine2"):
            self.assertIsInstance(lie_algebra(name), LieAlgebra)
        self.assertIs(abelian(4).abelian, True)
        self.assertEqual(affine2().bracket(0, 1), {1: 1})
        self.assertEqual(sl2().bracket(2, 1), {1: -2})

    def test_antisymmetry_is_checked(self):
        c = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
        with self.assertRaises(LieAlgebraError):
            LieAlgebra(c)

    def test_jacobi_is_checked(self):
        c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
        c[0][1][0], c[1][0][0] = 1, -1
        c[0][2][1], c[2][0][1] = 1, -1
        with self.assertRaises(LieAlgebraError):
            LieAlgebra(c)

    def test_json(self):
        algebra = LieAlgebra.from_json(sl2().to_json())
        self.assertEqual(algebra.c, sl2().c)
        self.assertEqual(algebra.to_json()["dim"], 3)

    def test_unknown_name(self):
        with self.assertRaises(LieAlgebraError):
            lie_algebra("so5")


class PolynomialTest(TestCase):
    def test_arithmetic(self):
        p = x(2, 0) * x(2, 0) + x(2, 1).scale(3)
        self.assertEqual(p.derivative(0), x(2, 0).scale(2))
        self.assertEqual(p.partial([0, 0]), 2)
        self.assertEqual(p.degree, 2)
        self.assertTrue((p - p).is_zero())

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            x(2, 0) + x(3, 0)

    def test_json(self):
        p = x(3, 0) * x(3, 2) - Polynomial.constant(3, Fraction(1, 3))
        self.assertEqual(Polynomial.from_json(p.to_json()), p)
        series = HSeries(2, 3, [p, Polynomial(3), p * p])
        self.assertEqual(HSeries.from_json(series.to_json(), 3), series)

    def test_monomial_basis(self):
        self.assertEqual(len(list(monomials(3, 2, lowest=1))), 9)
        self.assertEqual(len(list(monomials(2, 3))), 10)


class PoissonBracketTest(TestCase):
    def test_coordinates(self):
        algebra = sl2()
        self.assertEqual(poisson_bracket(x(3, 0), x(3, 1), algebra), x(3, 2))
        self.assertEqual(poisson_bracket(x(3, 2), x(3, 0), algebra), x(3, 0).scale(2))

    def test_antisymmetry_and_leibniz(self):
        rng = np.random.default_rng(1)
        algebra = sl2()
        for _ in range(5):
            f, g = random_polynomial(rng, 3, 2), random_polynomial(rng, 3, 2)
            self.assertEqual(poisson_bracket(f, g, algebra), -poisson_bracket(g, f, algebra))
            self.assertEqual(
                poisson_bracket(f, g * g, algebra), (g * poisson_bracket(f, g, algebra)).scale(2)
            )

    def test_jacobi(self):
        rng = np.random.default_rng(2)
        algebra = heisenberg()
        f, g, k = (random_polynomial(rng, 3, 2) for _ in range(3))
        total = (
            poisson_bracket(f, poisson_bracket(g, k, algebra), algebra)
            + poisson_bracket(g, poisson_bracket(k, f, algebra), algebra)
            + poisson_bracket(k, poisson_bracket(f, g, algebra), algebra)
        )
        self.assertTrue(total.is_zero())

    def test_dimension_mismatch(self):
        with self.assertRaises(LieAlgebraError):
            poisson_bracket(x(2, 0), x(2, 1), sl2())


class OperatorTest(BaseSetUp):
    def test_wedge_is_the_bracket(self):
        rng = np.random.default_rng(3)
        algebra = sl2()
        f, g = random_polynomial(rng, 3, 2), random_polynomial(rng, 3, 2)
        self.assertEqual(apply_B(self.wedge, algebra, (f, g)), poisson_bracket(f, g, algebra))

    def test_flip_negates(self):
        algebra = sl2()
        f = x(3, 0) * x(3, 1)
        g = x(3, 2) * x(3, 1)
        value = apply_B(self.chain_two, algebra, (f, g))
        self.assertFalse(value.is_zero())
        for v in (0, 1):
            self.assertEqual(apply_B(flip(self.chain_two, v), algebra, (f, g)), -value)

    def test_double_incoming_edge_vanishes(self):
        g = Graph.from_targets(3, 2, [("e1", "e2"), ("v1", "e2"), ("v1", "e1")])
        args = (x(3, 0) * x(3, 1), x(3, 1) * x(3, 2))
        self.assertTrue(apply_B(g, sl2(), args).is_zero())

    def test_abelian_algebra_kills_every_edge(self):
        args = (x(3, 0) * x(3, 1), x(3, 1) * x(3, 2))
        self.assertTrue(apply_B(self.chain_two, abelian(), args).is_zero())

    def test_argument_count(self):
        with self.assertRaises(GraphError):
            apply_B(self.wedge, sl2(), (x(3, 0),))

    def test_relations_are_respected(self):
        self.assertIs(b_respects_relations(sl2(), 2).vanishes, True)
        report = b_respects_relations(heisenberg(), 3, arities=(2,))
        self.assertIs(report.vanishes, True)
        self.assertGreater(report.checked, 0)


class StarProductTest(BaseSetUp):
    def test_low_orders(self):
        algebra = sl2()
        for f, g in itertools.product(list(monomials(3, 3)), repeat=2):
            product = star(f, g, algebra, self.table, order=1)
            self.assertEqual(product[0], f * g)
            self.assertEqual(product[1], poisson_bracket(f, g, algebra).scale(Fraction(1, 2)))

    def test_coordinate_commutator(self):
        algebra = sl2()
        for i, j in itertools.product(range(3), repeat=2):
            bracket = commutator(x(3, i), x(3, j), algebra, self.table, order=2)
            self.assertEqual(bracket[0], 0)
            self.assertEqual(bracket[1], poisson_bracket(x(3, i), x(3, j), algebra))
            self.assertEqual(bracket[2], 0)

    def test_abelian_product_is_plain(self):
        rng = np.random.default_rng(4)
        f, g = random_polynomial(rng, 3, 2), random_polynomial(rng, 3, 2)
        product = star(f, g, abelian(), self.table, order=2)
        self.assertEqual(product, HSeries(2, 3, [f * g]))

    def test_matches_gutt_product(self):
        for algebra in (heisenberg(), sl2(), affine2()):
            for f, g in itertools.product(list(monomials(algebra.dim, 2, lowest=1)), repeat=2):
                self.assertEqual(
                    star(f, g, algebra, self.table, order=2), gutt_star(f, g, algebra, order=2)
                )

    def test_associative(self):
        rng = np.random.default_rng(5)
        algebra = sl2()
        for _ in range(12):
            f, g, k = (random_polynomial(rng, 3, 2) for _ in range(3))
            self.assertTrue(associativity_residual(f, g, k, algebra, self.table, order=2).is_zero())

    def test_series_extension(self):
        algebra = heisenberg()
        f, g = x(3, 0) * x(3, 0), x(3, 1)
        self.assertEqual(
            star_series(HSeries.of(f, 2), HSeries.of(g, 2), algebra, self.table),
            star(f, g, algebra, self.table, order=2),
        )

    def test_table_must_reach_the_order(self):
        with self.assertRaises(MissingWeightError):
            star(x(3, 0), x(3, 1), sl2(), self.table, order=3)

    def test_compare_with_counted_table(self):
        report = compare_products(self.table, counted_table(2), sl2(), order=2)
        self.assertIs(report.zero_loop_agree, True)
        self.assertIs(report.loop_only, True)
        self.assertEqual(report.star_differences[:2], [0, 0])


class GuttTest(TestCase):
    def test_coordinates(self):
        algebra = sl2()
        for i, j in itertools.product(range(3), repeat=2):
            expected = HSeries(
                2, 3, [x(3, i) * x(3, j), poisson_bracket(x(3, i), x(3, j), algebra).scale(Fraction(1, 2))]
            )
            self.assertEqual(gutt_star(x(3, i), x(3, j), algebra, order=2), expected)

    def test_abelian(self):
        f, g = x(3, 0) * x(3, 1), x(3, 1) * x(3, 2)
        self.assertEqual(gutt_star(f, g, abelian(), order=3), HSeries(3, 3, [f * g]))

    def test_associative(self):
        rng = np.random.default_rng(6)
        algebra = sl2()
        for _ in range(4):
            f, g, k = (random_polynomial(rng, 3, 2) for _ in range(3))
            left = gutt_star_series(gutt_star(f, g, algebra, order=3), HSeries.of(k, 3), algebra)
            right = gutt_star_series(HSeries.of(f, 3), gutt_star(g, k, algebra, order=3), algebra)
            self.assertEqual(left, right)


class ThirdOrderTest(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.table = semicircle_table(3)

    def test_matches_gutt_product(self):
        for algebra in (heisenberg(), sl2()):
            for f, g in itertools.product(list(monomials(3, 3, lowest=1)), repeat=2):
                self.assertEqual(
                    star(f, g, algebra, self.table, order=3), gutt_star(f, g, algebra, order=3)
                )

    def test_associative(self):
        rng = np.random.default_rng(7)
        algebra = sl2()
        for _ in range(50):
            f, g, k = (random_polynomial(rng, 3, 3) for _ in range(3))
            self.assertTrue(associativity_residual(f, g, k, algebra, self.table, order=3).is_zero())
