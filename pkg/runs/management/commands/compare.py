from star.lie import lie_algebra
from star.product import compare_products
from weights.engine import SEMICIRCLE, build_table

from runs.reports import ReportCommand, load_table


class Command(ReportCommand):
    help = (
        "Compare a weight table with a reference table class by class, "
        "and the star products they induce."
    )

    def add_arguments(self, parser):
        parser.add_argument(
            "--against",
            choices=["counted", "mc", "semicircle"],
            help="Method of the reference table (default: semicircle)",
        )
        self.add_common_arguments(
            parser, "algebra", "order", "degree", "method", "form", "angle", "seed", "samples", "tol", "table_id", "table"
        )

    def run(self, config):
        algebra = lie_algebra(config["algebra"])
        table = load_table(config)
        order = min(config["order"], table.order)
        reference = build_table(
            config["against"] or SEMICIRCLE,
            order,
            kind=config["angle"],
            samples=config["samples"],
            seed=config["seed"],
        )
        report = compare_products(reference, table, algebra, order, config["degree"] or 2)
        result = {
            **report.to_json(),
            "algebra": algebra.name,
            "reference": reference.method,
            "weights": table.method,
            "passed": report.zero_loop_agree,
        }
        differing = sum(1 for c in report.classes if not c.agrees)
        self.emit(
            config,
            result,
            f"{reference.method} against {table.method} through order {order}: "
            f"{differing} of {len(report.classes)} classes differ"
            + (", all with loops" if report.loop_only else ""),
        )
        return report.zero_loop_agree
