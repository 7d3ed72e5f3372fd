from graphs.core import enumerate_graphs

from runs.reports import ReportCommand


class Command(ReportCommand):
    help = "List the classes of admissible graphs with n internal and m external vertices."

    def add_arguments(self, parser):
        parser.add_argument("n", type=int)
        parser.add_argument("m", type=int)
        parser.add_argument("--essential", action="store_true", help="Only graphs reaching every external vertex")
        self.add_common_arguments(parser)

    def run(self, config):
        n, m = config["n"], config["m"]
        classes = enumerate_graphs(n, m, essential=config["essential"])
        listing = [
            {
                "class": str(c.key),
                "aut": c.aut_count,
                "loop_number": c.loop_number,
                "connected": c.connected,
                "essential": c.essential,
                "vanishing": c.vanishing,
            }
            for c in classes
        ]
        loops = sum(1 for c in classes if c.loop_number)
        self.emit(
            config,
            {"n": n, "m": m, "count": len(listing), "classes": listing},
            f"{len(listing)} classes in G({n},{m}), {loops} with loops",
        )
