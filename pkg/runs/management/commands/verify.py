import itertools

import numpy as np

from graphs.algebra import GraphVector, prelie_defect
from graphs.core import Graph, enumerate_graphs
from star.lie import lie_algebra
from star.operators import b_respects_relations
from star.polynomials import random_polynomial
from star.product import associativity_residual
from weights.densities import OneForm
from weights.series import zz_check
from weights.wheels import wheel_relation_check

from runs.reports import ReportCommand, load_table

# the 2-spiked wheel: v1 -> (v2, e1), v2 -> (v1, e2)
SPIKED_WHEEL = (("v2", "e1"), ("v1", "e2"))
WHEEL_FORMS = (OneForm.uniform(), OneForm.bump(0.3, 0.2), OneForm.bump(0.65, 0.3))


class Command(ReportCommand):
    help = "Run one of the consistency checks: assoc, zz, prelie, b-relations or wheel."

    def add_arguments(self, parser):
        parser.add_argument("kind", choices=["assoc", "zz", "prelie", "b-relations", "wheel"])
        parser.add_argument("--n", type=int, help="Number of internal vertices")
        parser.add_argument("--triples", type=int, help="Random triples for assoc")
        parser.add_argument("--forms", nargs="+", dest="wheel_forms", help="Forms for the wheel relation")
        self.add_common_arguments(
            parser, "algebra", "order", "degree", "method", "form", "angle", "seed", "samples", "tol", "table_id", "table"
        )

    def run(self, config):
        check = getattr(self, "check_" + config["kind"].replace("-", "_"))
        result, summary = check(config)
        self.emit(config, result, summary)
        return result["passed"]

    def check_assoc(self, config):
        algebra = lie_algebra(config["algebra"])
        table = load_table(config, exact=True)
        order = min(config["order"], table.order)
        degree = config["degree"] or 3
        rng = np.random.default_rng(config["seed"])
        triples = config["triples"] or 50
        failures = []
        for index in range(triples):
            f, g, k = (random_polynomial(rng, algebra.dim, degree) for _ in range(3))
            residual = associativity_residual(f, g, k, algebra, table, order)
            if not residual.is_zero():
                failures.append(
                    {"triple": index, "f": f.to_json(), "g": g.to_json(), "k": k.to_json(), "residual": residual.to_json()}
                )
        result = {
            "algebra": algebra.name,
            "order": order,
            "triples": triples,
            "failures": failures,
            "passed": not failures,
        }
        return result, f"associativity through h^{order} on {algebra.name}: {triples - len(failures)}/{triples} triples"

    def check_zz(self, config):
        n = 2 if config["n"] is None else config["n"]
        table = load_table({**config, "order": n})
        checks = [zz_check(k, table) for k in range(1, n + 1)]
        passed = all(check.vanishes for check in checks)
        result = {"n": n, "weights": table.method, "orders": [check.to_json() for check in checks], "passed": passed}
        return result, f"Z∘Z through order {n} with {table.method} weights: {'vanishes' if passed else 'nonzero'}"

    def check_prelie(self, config):
        n = 2 if config["n"] is None else config["n"]
        pool = [
            (k, GraphVector.from_graph(c.graph))
            for k in range(n + 1)
            for c in enumerate_graphs(k, 2)
            if not c.vanishing
        ]
        checked, failures = 0, []
        for (a, x), (b, y), (c, z) in itertools.product(pool, repeat=3):
            if a + b + c > n:
                continue
            checked += 1
            defect = prelie_defect(x, y, z) + prelie_defect(x, z, y)
            if not defect.is_zero():
                failures.append({"triple": [str(next(iter(v))[0]) for v in (x, y, z)], "defect": defect.to_json()})
        result = {"n": n, "checked": checked, "failures": failures, "passed": not failures}
        return result, f"pre-Lie identity on {checked} triples through n={n}: {len(failures)} failures"

    def check_b_relations(self, config):
        algebra = lie_algebra(config["algebra"])
        n = 2 if config["n"] is None else config["n"]
        report = b_respects_relations(algebra, n, config["degree"] or 2)
        result = {**report.to_json(), "passed": report.vanishes}
        return result, f"B on Jacobi relations over {algebra.name} at n={n}: {report.checked} evaluations, {len(report.failures)} nonzero"

    def check_wheel(self, config):
        forms = config["wheel_forms"] or list(WHEEL_FORMS)
        report = wheel_relation_check(
            Graph.from_targets(2, 2, SPIKED_WHEEL), forms, config["angle"], config["samples"], config["seed"]
        )
        passed = report.consistent and all(report.agreements)
        result = {**report.to_json(), "passed": passed}
        return result, f"wheel relation over {len(forms)} forms, folded degree {report.degree}: {'consistent' if passed else 'inconsistent'}"
