import itertools

from star.lie import lie_algebra
from star.polynomials import monomials
from star.product import star

from runs.reports import ReportCommand, load_table


class Command(ReportCommand):
    help = "Tabulate star products of monomials for a linear Poisson structure."

    def add_arguments(self, parser):
        self.add_common_arguments(
            parser, "algebra", "order", "degree", "method", "form", "angle", "seed", "samples", "tol", "table_id", "table"
        )

    def run(self, config):
        algebra = lie_algebra(config["algebra"])
        table = load_table(config, exact=True)
        order = min(config["order"], table.order)
        degree = config["degree"] or 1
        basis = list(monomials(algebra.dim, degree, lowest=1))
        products = [
            {"f": f.to_json(), "g": g.to_json(), "product": star(f, g, algebra, table, order).to_json()}
            for f, g in itertools.product(basis, repeat=2)
        ]
        self.emit(
            config,
            {"algebra": algebra.to_json(), "order": order, "weights": table.method, "products": products},
            f"{len(products)} star products over {algebra.name} through h^{order}",
        )
