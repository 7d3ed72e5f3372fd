import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase, override_settings
from model_bakery import baker

from graphs.core import Graph, canonicalize
from star.lie import sl2
from star.operators import poisson_bracket
from star.polynomials import HSeries, Polynomial
from weights.engine import MONTE_CARLO, SEMICIRCLE, semicircle_table
from weights.models import StoredWeightTable

from .forms import RunConfigForm, parse_form_option


def run(*args, **options):
    out, err = StringIO(), StringIO()
    call_command(*args, stdout=out, stderr=err, **options)
    return json.loads(out.getvalue()), err.getvalue()


# Create your tests here.
class BaseSetUp(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.wedge = Graph.from_targets(1, 2, [("e1", "e2")])
        cls.stored = baker.make(StoredWeightTable, method=SEMICIRCLE, n=2, payload=semicircle_table(2).to_json())


# Form tests.
class RunConfigFormTest(BaseSetUp):
    def test_form_options(self):
        self.assertEqual(parse_form_option("bump:0.3,0.1")[0].kind, "bump")
        self.assertEqual(parse_form_option("semicircle:0.4")[0].center, 0.4)
        self.assertEqual(parse_form_option("point:1/5,3/37")[1], [Fraction(1, 5), Fraction(3, 37)])

    def test_method_follows_the_form(self):
        for option, method in (
            ("semicircle", "semicircle"),
            ("semicircle:0.4", "mc"),
            ("bump:0.3,0.1", "mc"),
            ("point", "counted"),
        ):
            form = RunConfigForm({"form": option})
            self.assertTrue(form.is_valid(), msg=form.errors)
            self.assertEqual(form.cleaned_data["method"], method)

    def test_point_form_sets_the_regular_value(self):
        form = RunConfigForm({"form": "point:1/5,3/37"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["base"], Fraction(1, 5))
        self.assertEqual(form.config()["epsilon"], "3/37")

    def test_defaults_are_recorded(self):
        form = RunConfigForm({"method": "mc"})
        self.assertTrue(form.is_valid())
        config = form.config()
        self.assertEqual(config["seed"], 7)
        self.assertEqual(config["order"], 3)
        self.assertEqual(config["form"]["kind"], "uniform")
        self.assertEqual(config["angle"], "hyperbolic")

    def test_counted_tables_default_to_second_order(self):
        for data in ({"method": "counted"}, {"form": "point:1/5,3/37"}):
            form = RunConfigForm(data)
            self.assertTrue(form.is_valid())
            self.assertEqual(form.cleaned_data["order"], 2)

    def test_invalid_options(self):
        for data in (
            {"form": "bump:0.5"},
            {"form": "spike"},
            {"method": "mc", "form": "point"},
            {"method": "counted", "form": "uniform"},
            {"table_id": self.stored.pk + 100},
            {"table_id": self.stored.pk, "table": "weights.json"},
            {"wheel_forms": "uniform point"},
        ):
            self.assertFalse(RunConfigForm(data).is_valid(), msg=data)


# Command tests.
class EnumerateCommandTest(TestCase):
    def test_wedge(self):
        report, summary = run("enumerate", 1, 2)
        self.assertEqual(report["command"], "enumerate")
        self.assertEqual(report["result"]["count"], 1)
        self.assertEqual(report["result"]["classes"][0]["loop_number"], 0)
        self.assertIn("1 classes in G(1,2)", summary)

    def test_one_essential_loop_class(self):
        report, _ = run("enumerate", 2, 2, essential=True)
        loops = [c for c in report["result"]["classes"] if c["loop_number"] == 1]
        self.assertEqual(len(loops), 1)

    def test_empty_graph(self):
        report, _ = run("enumerate", 0, 2)
        self.assertEqual(report["result"]["count"], 1)

    def test_usage_error(self):
        with self.assertRaises(CommandError) as raised:
            run("enumerate", 0, 0)
        self.assertEqual(raised.exception.returncode, 2)


class WeightsCommandTest(BaseSetUp):
    def test_wedge_is_one_half(self):
        report, _ = run("weights", order=1, method="counted")
        values = sorted(entry["value"] for entry in report["result"]["entries"])
        self.assertEqual(values, ["1", "1/2"])
        self.assertEqual(report["config"]["method"], "counted")

    def test_second_order_tree_weights(self):
        report, _ = run("weights", order=2, method="counted")
        values = {abs(Fraction(entry["value"])) for entry in report["result"]["entries"]}
        self.assertIn(Fraction(1, 8), values)
        self.assertIn(Fraction(1, 12), values)

    def test_point_form(self):
        report, _ = run("weights", order=1, form="point:1/5,3/37")
        self.assertEqual(report["result"]["regular_value"], ["1/5", "52/185"])
        self.assertIn("1/2", [entry["value"] for entry in report["result"]["entries"]])

    def test_save(self):
        report, _ = run("weights", order=1, method="counted", save=True)
        stored = StoredWeightTable.objects.get(pk=report["result"]["stored_id"])
        self.assertEqual(stored.method, "counted")
        self.assertEqual(len(stored.get_table()), 2)

    @override_settings(QNTZ_MC_SAMPLES=2_000)
    def test_monte_carlo_is_reproducible(self):
        first = StringIO()
        second = StringIO()
        call_command("weights", order=1, method="mc", seed=3, stdout=first, stderr=StringIO())
        call_command("weights", order=1, method="mc", seed=3, stdout=second, stderr=StringIO())
        self.assertEqual(first.getvalue(), second.getvalue())
        self.assertEqual(json.loads(first.getvalue())["config"]["samples"], 2_000)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "weights.json"
            out = StringIO()
            call_command("weights", order=1, method="semicircle", out=str(path), stdout=out, stderr=StringIO())
            self.assertEqual(out.getvalue(), "")
            self.assertEqual(json.loads(path.read_text())["command"], "weights")

    def test_usage_error(self):
        with self.assertRaises(CommandError) as raised:
            run("weights", order=1, form="bump:0.5")
        self.assertEqual(raised.exception.returncode, 2)

    def test_numerical_failure(self):
        with self.assertRaises(CommandError) as raised:
            run("weights", order=1, form="point:1,1/64")
        self.assertEqual(raised.exception.returncode, 3)
        with self.assertRaises(CommandError) as raised:
            run("weights", order=1, method="mc", samples=100, tol=1e-9)
        self.assertEqual(raised.exception.returncode, 3)


class StarTableCommandTest(BaseSetUp):
    def test_first_order_is_half_the_bracket(self):
        report, _ = run("star_table", algebra="sl2", order=1)
        products = report["result"]["products"]
        self.assertEqual(len(products), 9)
        for item in products:
            f, g = Polynomial.from_json(item["f"]), Polynomial.from_json(item["g"])
            product = HSeries.from_json(item["product"], 3)
            self.assertEqual(product[0], f * g)
            self.assertEqual(product[1], poisson_bracket(f, g, sl2()).scale(Fraction(1, 2)))

    def test_stored_table(self):
        report, _ = run("star_table", algebra="heisenberg", table_id=self.stored.pk)
        self.assertEqual(report["result"]["order"], 2)
        self.assertEqual(report["result"]["weights"], SEMICIRCLE)

    def test_estimated_table_is_refused(self):
        stored = baker.make(StoredWeightTable, method=MONTE_CARLO, n=1, payload={})
        with self.assertRaises(CommandError) as raised:
            run("star_table", table_id=stored.pk)
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn("Monte-Carlo", str(raised.exception))

    def test_missing_table_file(self):
        with self.assertRaises(CommandError) as raised:
            run("star_table", table="no-such-table.json")
        self.assertEqual(raised.exception.returncode, 2)


class VerifyCommandTest(BaseSetUp):
    def test_zz(self):
        report, summary = run("verify", "zz", n=2, form="semicircle")
        self.assertIs(report["result"]["passed"], True)
        self.assertEqual(report["config"]["method"], "semicircle")
        self.assertIn("vanishes", summary)

    def test_zz_failure(self):
        payload = semicircle_table(2).to_json()
        wedge = str(canonicalize(self.wedge)[0])
        for entry in payload["entries"]:
            if entry["class"] == wedge:
                entry["value"] = "0"
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "broken.json"
            path.write_text(json.dumps(payload))
            out = StringIO()
            with self.assertRaises(CommandError) as raised:
                call_command("verify", "zz", n=2, table=str(path), stdout=out, stderr=StringIO())
        self.assertEqual(raised.exception.returncode, 1)
        self.assertIs(json.loads(out.getvalue())["result"]["passed"], False)

    def test_assoc(self):
        report, _ = run("verify", "assoc", algebra="sl2", order=2, triples=3, degree=2)
        self.assertIs(report["result"]["passed"], True)
        self.assertEqual(report["result"]["triples"], 3)

    def test_prelie(self):
        report, _ = run("verify", "prelie", n=2)
        self.assertIs(report["result"]["passed"], True)
        self.assertGreater(report["result"]["checked"], 0)

    def test_b_relations(self):
        report, _ = run("verify", "b-relations", algebra="sl2", n=2, degree=1)
        self.assertIs(report["result"]["passed"], True)

    def test_wheel(self):
        report, summary = run("verify", "wheel")
        result = report["result"]
        self.assertIs(result["passed"], True)
        self.assertEqual(len(result["forms"]), 3)
        self.assertEqual(result["agreements"], [True, True, True])
        self.assertIn("consistent", summary)

    def test_wheel_needs_smooth_forms(self):
        with self.assertRaises(CommandError) as raised:
            run("verify", "wheel", wheel_forms=["uniform", "point"])
        self.assertEqual(raised.exception.returncode, 2)


class CompareCommandTest(TestCase):
    def test_counted_against_semicircle(self):
        report, summary = run("compare", method="counted", order=2)
        result = report["result"]
        self.assertEqual(result["reference"], "semicircle")
        self.assertIs(result["zero_loop_agree"], True)
        self.assertIs(result["loop_only"], True)
        self.assertEqual(result["star_differences"][:2], [0, 0])
        self.assertIn("through order 2", summary)
