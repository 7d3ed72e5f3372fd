from weights.models import StoredWeightTable

from runs.reports import ReportCommand, load_table


class Command(ReportCommand):
    help = "Compute the weight table of every graph class in G(n, 2) up to order n."

    def add_arguments(self, parser):
        parser.add_argument("--n", type=int, dest="order", help="Highest order of the table")
        parser.add_argument("--save", action="store_true", help="Store the table in the database")
        self.add_common_arguments(parser, "order", "method", "form", "angle", "seed", "samples", "tol")

    def run(self, config):
        table = load_table(config)
        result = table.to_json()
        if config["save"]:
            stored = StoredWeightTable.from_table(table)
            stored.save()
            result["stored_id"] = stored.pk
        self.emit(config, result, f"{len(table)} {table.method} weights through order {table.order}")
