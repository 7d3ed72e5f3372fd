from fractions import Fraction
from unittest import mock

import numpy as np
from django.test import TestCase, override_settings
from model_bakery import baker

from graphs.core import (
    Graph,
    GraphError,
    LabelledGraph,
    automorphism_count,
    canonicalize,
    enumerate_graphs,
    graph_product,
    loop_number,
)

from .angles import AngleMapKind, CoincidentPointsError, angle, angles, wrap
from .densities import OneForm
from .engine import (
    COUNTED,
    MONTE_CARLO,
    SEMICIRCLE,
    MissingWeightError,
    WeightEntry,
    WeightTable,
    alternate_regular_value,
    checked_count,
    counted_table,
    distinct_labellings,
    nudged_value,
    regular_value,
    semicircle_table,
    weight_counted,
    weight_mc,
    weight_semicircle,
)
from .gauss import WHEEL, Configuration, gauss_map, jacobian, numerical_jacobian
from .models import StoredWeightTable
from .montecarlo import Estimate, integrate
from .preimages import NonRegularValueError, find_preimages, signed_count
from .series import connected_part, ln_z, z_coordinates, z_vector, zz_check
from .wheels import (
    collapse_externals,
    folded_degree,
    is_wheel,
    wheel_graph,
    wheel_relation_check,
    wheel_weight_hat,
)


# Create your tests here.
class BaseSetUp(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.empty = Graph.from_targets(0, 2, [])
        cls.wedge = Graph.from_targets(1, 2, [("e1", "e2")])
        cls.wedge_squared = graph_product(cls.wedge, cls.wedge)
        cls.chain_one = Graph.from_targets(2, 2, [("v2", "e1"), ("e1", "e2")])
        cls.chain_two = Graph.from_targets(2, 2, [("v2", "e2"), ("e1", "e2")])
        cls.loop_both = Graph.from_targets(2, 2, [("v2", "e1"), ("v1", "e2")])
        cls.loop_left = Graph.from_targets(2, 2, [("v2", "e1"), ("v1", "e1")])
        cls.semicircle = semicircle_table(2)


# Angle tests.
class AngleTest(BaseSetUp):
    def test_wedge_corner(self):
        p = 1 + 1j
        self.assertAlmostEqual(angle(p, 0), 0.25, places=12)
        self.assertAlmostEqual(angle(p, 1), 0.5, places=12)

    def test_invariant_under_translations_and_homotheties(self):
        rng = np.random.default_rng(3)
        p = rng.normal(size=50) + 1j * rng.uniform(0.1, 3, size=50)
        q = rng.normal(size=50) + 1j * rng.uniform(0.0, 3, size=50)
        for kind in AngleMapKind:
            moved = angles(2 * p + 3, 2 * q + 3, kind)
            self.assertLess(np.abs(wrap(moved - angles(p, q, kind))).max(), 1e-12)

    def test_far_target_has_angle_zero(self):
        self.assertLess(abs(float(wrap(angle(0.3 + 0.7j, 1e9 + 1j)))), 1e-8)

    def test_both_kinds_agree(self):
        rng = np.random.default_rng(5)
        p = rng.normal(size=100) + 1j * rng.uniform(0.1, 3, size=100)
        q = rng.normal(size=100) + 1j * rng.uniform(0.1, 3, size=100)
        difference = angles(p, q, AngleMapKind.HYPERBOLIC) - angles(p, q, AngleMapKind.EUCLIDEAN)
        self.assertLess(np.abs(wrap(difference)).max(), 1e-12)

    def test_coincident_points(self):
        with self.assertRaises(CoincidentPointsError):
            angle(1j, 1j)
        values = angles(np.array([1j, 2j]), np.array([1j, 1 + 1j]), strict=False)
        self.assertTrue(np.isnan(values[0]))
        self.assertAlmostEqual(float(values[1]), angle(2j, 1 + 1j), places=12)


class FormTest(TestCase):
    def test_masses(self):
        grid = (np.arange(400_000) + 0.5) / 400_000
        for form in (
            OneForm.uniform(),
            OneForm.bump(0.3, 0.1),
            OneForm.semicircle(),
            OneForm.bump(0.8, 0.25).fold(),
        ):
            self.assertAlmostEqual(form.density(grid).mean(), 1.0, places=5)

    def test_bump_width_bounds(self):
        with self.assertRaises(ValueError):
            OneForm.bump(0.5, 0.7)

    def test_point_form_has_no_density(self):
        with self.assertRaises(ValueError):
            OneForm.point("1/2").density(0.5)

    def test_json(self):
        form = OneForm.bump(0.25, 0.125).fold()
        self.assertEqual(OneForm.from_json(form.to_json()), form)
        self.assertEqual(str(form), "folded bump(0.25,0.125)")


class GaussMapTest(BaseSetUp):
    def test_wedge_gauss_map(self):
        lg = LabelledGraph.standard(self.wedge)
        values = gauss_map(lg, Configuration.gauged([1 + 1j]))
        np.testing.assert_allclose(values, [0.25, 0.5], atol=1e-12)
        self.assertGreater(np.linalg.det(jacobian(lg, Configuration.gauged([1 + 1j]))), 0)

    def test_analytic_jacobian_matches_differences(self):
        lg = LabelledGraph.standard(self.loop_both)
        c = Configuration.gauged([0.3 + 0.8j, 1.4 + 0.5j])
        np.testing.assert_allclose(jacobian(lg, c), numerical_jacobian(lg, c), atol=1e-6)

    def test_configuration_rejects_boundary_points(self):
        with self.assertRaises(GraphError):
            Configuration.gauged([0.5])

    def test_wrong_size(self):
        with self.assertRaises(GraphError):
            gauss_map(LabelledGraph.standard(self.wedge), Configuration.gauged([1j, 2j]))


# Counting tests.
class RegularValueTest(TestCase):
    def test_default_value(self):
        self.assertEqual(regular_value(1), (Fraction(1, 2), Fraction(33, 64)))

    def test_prefix_stable(self):
        self.assertEqual(regular_value(3)[:4], regular_value(2))

    def test_alternate_value(self):
        self.assertEqual(alternate_regular_value(1), (Fraction(1, 5), Fraction(52, 185)))

    def test_hyperplane(self):
        with self.assertRaises(NonRegularValueError):
            regular_value(1, "1/2", "1/2")


class PreimageTest(BaseSetUp):
    def test_wedge_has_one_preimage(self):
        preimages = find_preimages(LabelledGraph.standard(self.wedge), regular_value(1))
        self.assertEqual(len(preimages), 1)
        self.assertEqual(signed_count(preimages), 1)
        np.testing.assert_allclose(
            gauss_map(LabelledGraph.standard(self.wedge), preimages[0].configuration),
            [float(x) for x in regular_value(1)],
            atol=1e-10,
        )

    def test_signs_agree_with_finite_differences(self):
        r = regular_value(2)
        for g in (self.chain_one, self.chain_two, self.loop_both):
            for lg in distinct_labellings(canonicalize(g)[0]):
                for preimage in find_preimages(lg, r):
                    for step in (1e-6, 5e-7):
                        numeric = np.linalg.det(numerical_jacobian(lg, preimage.configuration, step=step))
                        self.assertEqual(int(np.sign(numeric)), preimage.sign)

    def test_coordinate_hyperplane(self):
        with self.assertRaises(NonRegularValueError):
            find_preimages(LabelledGraph.standard(self.wedge), (Fraction(1, 2), 0))

    def test_dense_grid_finds_the_same_roots(self):
        r = regular_value(2)
        for g in (self.chain_two, self.loop_both):
            for lg in distinct_labellings(canonicalize(g)[0]):
                plain = signed_count(find_preimages(lg, r))
                self.assertEqual(signed_count(find_preimages(lg, r, dense=True)), plain)

    def test_wheel_gauge_preimages(self):
        lg = LabelledGraph.standard(wheel_graph(2))
        for preimage in find_preimages(lg, alternate_regular_value(2), gauge=WHEEL):
            points = preimage.configuration.points
            self.assertEqual(len(np.unique(points)), 3)
            self.assertTrue((preimage.configuration.internal.imag > 0).all())


class CountedWeightTest(BaseSetUp):
    def coefficient(self, g, **options):
        key, sign = canonicalize(g)
        return sign * weight_counted(key, **options).value

    def test_wedge(self):
        self.assertEqual(self.coefficient(self.wedge), Fraction(1, 2))

    def test_wedge_squared(self):
        key, sign = canonicalize(self.wedge_squared)
        weight = weight_counted(key)
        self.assertEqual(sign * weight.value, Fraction(1, 8))
        self.assertEqual(sorted(sign * c.count for c in weight.labellings), [1, 1, 1])

    def test_chains(self):
        key, sign = canonicalize(self.chain_two)
        weight = weight_counted(key)
        self.assertEqual(sign * weight.value, Fraction(1, 12))
        self.assertEqual(sorted(sign * c.count for c in weight.labellings), [-1, 1, 1, 1])
        self.assertEqual(self.coefficient(self.chain_one), Fraction(-1, 12))

    def test_stable_across_regular_values_and_kinds(self):
        values = [
            regular_value(2),
            alternate_regular_value(2),
            regular_value(2, "2/7", "1/53"),
        ]
        for g in (self.wedge_squared, self.chain_one, self.chain_two):
            expected = self.coefficient(g)
            for r in values:
                for kind in AngleMapKind:
                    self.assertEqual(self.coefficient(g, r=r, kind=kind), expected)

    def test_nudged_value_keeps_the_cell(self):
        r = regular_value(2)
        nudged = nudged_value(r)
        self.assertNotEqual(nudged, r)
        self.assertEqual(sorted(range(4), key=nudged.__getitem__), sorted(range(4), key=r.__getitem__))
        self.assertLess(max(b - a for a, b in zip(r, nudged)), Fraction(1, 64))

    def test_cross_check_catches_a_lost_root(self):
        def lossy(lg, r, kind=AngleMapKind.HYPERBOLIC, gauge="boundary", dense=False):
            return [] if dense else find_preimages(lg, r, kind, gauge)

        key = canonicalize(self.wedge)[0]
        with mock.patch("weights.engine.find_preimages", side_effect=lossy):
            with self.assertRaises(NonRegularValueError):
                weight_counted(key)
            with override_settings(QNTZ_CROSS_CHECK=False):
                self.assertEqual(checked_count(LabelledGraph.standard(self.wedge), regular_value(1)), 1)

    def test_scale_invariant_class_weighs_nothing(self):
        weight = weight_counted(canonicalize(self.loop_left)[0])
        self.assertEqual(weight.value, 0)
        self.assertEqual(weight.labellings, ())

    def test_loop_class_is_flagged(self):
        with self.assertLogs("weights.engine", level="WARNING"):
            weight = weight_counted(canonicalize(self.loop_both)[0])
        self.assertIs(weight.value_dependent, True)

    def test_semicircle_rule(self):
        self.assertEqual(weight_semicircle(canonicalize(self.loop_both)[0]), 0)
        key, sign = canonicalize(self.wedge_squared)
        self.assertEqual(sign * weight_semicircle(key), Fraction(1, 8))


class MonteCarloTest(BaseSetUp):
    def test_wedge_uniform(self):
        key, sign = canonicalize(self.wedge)
        estimate = weight_mc(key, OneForm.uniform(), samples=100_000, seed=11)
        self.assertLess(abs(sign * estimate.value - 0.5), 0.01 + 3 * estimate.stderr)
        self.assertLess(estimate.stderr, 0.01)

    def test_loop_vanishes_for_semicircle_form(self):
        estimate = integrate(self.loop_both, OneForm.semicircle(), samples=20_000)
        self.assertEqual(estimate.value, 0.0)
        self.assertEqual(estimate.stderr, 0.0)

    def test_semicircle_form_kills_every_loop_class(self):
        loops = [c for c in enumerate_graphs(2, 2) if loop_number(c.graph) > 0]
        self.assertGreater(len(loops), 1)
        for c in loops:
            self.assertEqual(integrate(c.graph, OneForm.semicircle(), samples=20_000).value, 0.0)

    def test_stderr_shrinks_with_samples(self):
        form = OneForm.bump(0.4, 0.2)
        small = integrate(self.wedge, form, samples=50_000, seed=13)
        large = integrate(self.wedge, form, samples=100_000, seed=17)
        ratio = small.stderr / large.stderr
        self.assertGreater(ratio, 0.8 * np.sqrt(2))
        self.assertLess(ratio, 1.2 * np.sqrt(2))

    def test_narrow_bumps_approach_the_counted_weight(self):
        key, sign = canonicalize(self.wedge)
        counted = sign * weight_counted(key).value * automorphism_count(key.representative())
        for width in (0.2, 0.05):
            estimate = integrate(self.wedge, OneForm.bump(0.5, width), samples=200_000, seed=19)
            self.assertLess(abs(estimate.value - float(counted)), 3 * estimate.stderr + 1e-3)

    def test_weights_are_multiplicative(self):
        form = OneForm.bump(0.4, 0.2)
        single = integrate(self.wedge, form, samples=100_000, seed=23)
        product = integrate(self.wedge_squared, form, samples=100_000, seed=29)
        combined = np.hypot(product.stderr, 2 * abs(single.value) * single.stderr)
        self.assertLess(abs(product.value - single.value**2), 3 * combined)

    def test_deterministic(self):
        first = integrate(self.wedge, OneForm.bump(0.4, 0.2), samples=5_000, seed=3)
        second = integrate(self.wedge, OneForm.bump(0.4, 0.2), samples=5_000, seed=3)
        self.assertEqual(first, second)

    def test_point_form_is_not_integrable(self):
        with self.assertRaises(ValueError):
            integrate(self.wedge, OneForm.point("1/2"))

    def test_estimate_scaling(self):
        estimate = Estimate(-0.5, 0.1).scaled(-2)
        self.assertEqual((estimate.value, estimate.stderr), (1.0, 0.2))
        self.assertEqual(Estimate.from_json(estimate.to_json()), Estimate(1.0, 0.2))


class WeightTableTest(BaseSetUp):
    def test_semicircle_table(self):
        table = self.semicircle
        self.assertIs(table.exact, True)
        self.assertEqual(table.coefficient(canonicalize(self.loop_both)[0]), 0)
        key, sign = canonicalize(self.wedge_squared)
        self.assertEqual(sign * table.weight(key), Fraction(1, 4))

    def test_json(self):
        table = WeightTable.from_json(self.semicircle.to_json())
        self.assertEqual(table.to_json(), self.semicircle.to_json())
        self.assertEqual(table.method, SEMICIRCLE)

    def test_missing_class(self):
        table = WeightTable(1, COUNTED)
        with self.assertRaises(MissingWeightError):
            table.coefficient(canonicalize(self.wedge)[0])
        with self.assertRaises(MissingWeightError):
            self.semicircle.require(3)

    def test_estimates_are_not_exact(self):
        table = WeightTable(1, MONTE_CARLO)
        table.add(WeightEntry(canonicalize(self.wedge)[0], MONTE_CARLO, Estimate(0.5, 0.01)))
        self.assertIs(table.exact, False)
        with self.assertRaises(MissingWeightError):
            z_vector(1, table)


# Series tests.
class SeriesTest(BaseSetUp):
    def test_low_orders(self):
        self.assertEqual(z_vector(0, self.semicircle).coefficient(self.empty), 1)
        self.assertEqual(z_vector(1, self.semicircle).coefficient(self.wedge), Fraction(1, 2))
        (coordinate,) = z_coordinates(1, self.semicircle)
        self.assertEqual(abs(coordinate), Fraction(1, 2))
        z2 = z_vector(2, self.semicircle)
        self.assertEqual(z2.coefficient(self.wedge_squared), Fraction(1, 8))
        self.assertEqual(z2.coefficient(self.chain_two), Fraction(1, 12))

    def test_weights_are_multiplicative(self):
        z1, z2 = z_vector(1, self.semicircle), z_vector(2, self.semicircle)
        self.assertEqual(z2.coefficient(self.wedge_squared), z1.coefficient(self.wedge) ** 2 / 2)

    def test_logarithm_is_the_connected_part(self):
        logarithm = ln_z(2, self.semicircle)
        self.assertTrue(logarithm[0].is_zero())
        for n in (1, 2):
            self.assertEqual(logarithm[n], connected_part(n, self.semicircle))
        self.assertEqual(logarithm[1], z_vector(1, self.semicircle))

    def test_zz_vanishes_for_semicircle_weights(self):
        for n in (1, 2):
            self.assertIs(zz_check(n, self.semicircle).vanishes, True)

    def test_zz_vanishes_for_counted_weights(self):
        tables = [
            counted_table(2),
            counted_table(2, base="1/5", epsilon="3/37"),
        ]
        for table in tables:
            for n in (1, 2):
                self.assertIs(zz_check(n, table).vanishes, True)

    def test_broken_table_is_caught(self):
        table = WeightTable.from_json(self.semicircle.to_json())
        key, _ = canonicalize(self.wedge)
        table.add(WeightEntry(key, SEMICIRCLE, Fraction(0)))
        self.assertIs(zz_check(2, table).vanishes, False)


# Wheel tests.
class WheelTest(BaseSetUp):
    def test_wheel_shape(self):
        wheel = wheel_graph(2)
        self.assertIs(is_wheel(wheel), True)
        self.assertIs(is_wheel(self.wedge), False)
        self.assertEqual(canonicalize(collapse_externals(self.loop_both))[0], canonicalize(wheel)[0])

    def test_collapse_with_double_edge(self):
        with self.assertRaises(GraphError):
            collapse_externals(self.chain_two)

    def test_semicircle_form_kills_both_sides(self):
        self.assertEqual(wheel_weight_hat(wheel_graph(2), OneForm.semicircle(), samples=20_000).value, 0.0)
        self.assertEqual(integrate(self.loop_both, OneForm.semicircle(), samples=20_000).value, 0.0)

    def test_deterministic(self):
        form = OneForm.bump(0.3, 0.2).fold()
        first = wheel_weight_hat(wheel_graph(2), form, samples=5_000, seed=2)
        second = wheel_weight_hat(wheel_graph(2), form, samples=5_000, seed=2)
        self.assertEqual(first, second)

    def test_uniform_wheel_weight_is_small(self):
        estimate = wheel_weight_hat(wheel_graph(2), OneForm.uniform(), samples=100_000, seed=5)
        self.assertLess(abs(estimate.value), 5 * estimate.stderr + 0.02)

    def test_relation_needs_a_one_loop_graph(self):
        with self.assertRaises(GraphError):
            wheel_relation_check(self.chain_two, [OneForm.uniform()])

    @override_settings(QNTZ_MC_SAMPLES=4_000)
    def test_report_shape(self):
        report = wheel_relation_check(self.loop_both, [OneForm.uniform(), OneForm.bump(0.5, 0.2)])
        data = report.to_json()
        self.assertEqual(len(data["forms"]), 2)
        self.assertIs(all(result.form.folded for result in report.results), True)
        # 4! labellings times 2^4 half-turn shifts
        self.assertEqual(Fraction(data["degree"]) * 384 % 1, 0)
        self.assertEqual(folded_degree(self.loop_both), report.degree)

    def test_relation_holds(self):
        forms = [OneForm.uniform(), OneForm.bump(0.3, 0.2), OneForm.bump(0.65, 0.3)]
        report = wheel_relation_check(self.loop_both, forms, samples=200_000, seed=7)
        self.assertIs(report.consistent, True)
        self.assertEqual(report.agreements, [True, True, True])
        uniform = report.results[0].weight_hat
        self.assertLess(abs(uniform.value), 3 * uniform.stderr)


# Model tests.
class StoredWeightTableTest(BaseSetUp):
    def test_round_trip(self):
        stored = StoredWeightTable.from_table(self.semicircle)
        stored.save()
        table = StoredWeightTable.objects.get(pk=stored.pk).get_table()
        key = canonicalize(self.chain_two)[0]
        self.assertEqual(table.coefficient(key), self.semicircle.coefficient(key))
        self.assertEqual(str(stored), "Semicircle rule weights through order 2")

    def test_exact_manager(self):
        baker.make(StoredWeightTable, method=COUNTED, payload={})
        baker.make(StoredWeightTable, method=MONTE_CARLO, payload={})
        self.assertEqual(StoredWeightTable.objects.count(), 2)
        self.assertEqual(StoredWeightTable.exact.count(), 1)
        self.assertEqual(StoredWeightTable.exact.get().method, COUNTED)
