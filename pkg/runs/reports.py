"""
Shared plumbing of the Qntz management commands.

Every command validates its options with :class:`RunConfigForm`, runs one
library operation and emits a report ``{"command", "config", "version",
"result"}``: JSON with sorted keys on stdout or in ``--out``, and a one-line
human summary on stderr.
"""
import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from Qntz import __version__
from graphs.core import GraphError
from star.lie import LieAlgebraError
from weights.angles import CoincidentPointsError
from weights.engine import MissingWeightError, WeightTable, build_table
from weights.models import StoredWeightTable
from weights.montecarlo import SampleBudgetError
from weights.preimages import NonRegularValueError, SolverBudgetError

from .forms import RunConfigForm

logger = logging.getLogger(__name__)

CHECK_FAILED = 1
USAGE_ERROR = 2
NUMERICAL_FAILURE = 3

USAGE_ERRORS = (GraphError, LieAlgebraError, MissingWeightError)
NUMERICAL_ERRORS = (NonRegularValueError, SolverBudgetError, SampleBudgetError, CoincidentPointsError)

COMMON_ARGUMENTS = {
    "order": (("--order", "--N"), {"type": int, "dest": "order"}),
    "method": (
        ("--method",),
        {
            "choices": ["counted", "mc", "semicircle"],
            "help": "counted tables default to order 2; order 3 takes tens of minutes",
        },
    ),
    "form": (("--form",), {"help": "uniform | bump:c,w | semicircle:c | point:base,epsilon"}),
    "angle": (("--angle",), {"choices": ["hyperbolic", "euclidean"]}),
    "seed": (("--seed",), {"type": int}),
    "samples": (("--samples",), {"type": int}),
    "tol": (("--tol",), {"type": float, "help": "Stop Monte-Carlo sampling at this standard error"}),
    "algebra": (("--algebra",), {"default": "sl2"}),
    "degree": (("--degree",), {"type": int}),
    "table_id": (("--table-id",), {"type": int, "dest": "table_id", "help": "Id of a stored weight table"}),
    "table": (("--table",), {"help": "Weight table JSON file"}),
}


def build_report(command: str, config: dict, result: dict) -> dict:
    return {"command": command, "config": config, "version": __version__, "result": result}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def load_table(config: dict, exact: bool = False) -> WeightTable:
    """
    The table named by ``--table-id`` or ``--table``, else a freshly built one.
    ``exact`` restricts stored tables to counted and semicircle weights.
    """
    if config.get("table_id"):
        tables = StoredWeightTable.exact if exact else StoredWeightTable.objects
        try:
            return tables.get(pk=config["table_id"]).get_table()
        except StoredWeightTable.DoesNotExist:
            raise CommandError(
                f"Stored table {config['table_id']} holds Monte-Carlo estimates; exact weights are needed",
                returncode=USAGE_ERROR,
            )
    if config.get("table"):
        try:
            return WeightTable.from_json(json.loads(Path(config["table"]).read_text()))
        except (OSError, KeyError, TypeError, ValueError) as exc:
            raise CommandError(f"Cannot read weight table {config['table']}: {exc}", returncode=USAGE_ERROR)
    return build_table(
        config["method"],
        config["order"],
        kind=config["angle"],
        form=config.get("form"),
        base=config.get("base"),
        epsilon=config.get("epsilon"),
        samples=config.get("samples"),
        seed=config.get("seed"),
        tolerance=config.get("tol"),
    )


class ReportCommand(BaseCommand):
    """Base class: subclasses declare their options and implement ``run``."""

    requires_system_checks = []
    requires_migrations_checks = False

    def add_common_arguments(self, parser, *names):
        for name in names:
            flags, kwargs = COMMON_ARGUMENTS[name]
            parser.add_argument(*flags, **kwargs)
        parser.add_argument("--out", help="Write the JSON report to this file instead of stdout")

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def get_config(self, options: dict) -> dict:
        fields = RunConfigForm.base_fields
        data = {
            name: value
            for name, value in options.items()
            if name in fields and value is not None and value is not False
        }
        data = {name: " ".join(value) if isinstance(value, list) else value for name, value in data.items()}
        form = RunConfigForm(data)
        if not form.is_valid():
            errors = "; ".join(
                f"{name}: {' '.join(messages)}" if name != "__all__" else " ".join(messages)
                for name, messages in form.errors.items()
            )
            raise CommandError(f"Invalid options: {errors}", returncode=USAGE_ERROR)
        form.cleaned_data["config"] = form.config()
        return form.cleaned_data

    def emit(self, config: dict, result: dict, summary: str):
        text = dumps(build_report(self.command_name, config["config"], result))
        if config.get("out"):
            Path(config["out"]).write_text(text + "\n")
        else:
            self.stdout.write(text)
        self.stderr.write(summary)

    def handle(self, *args, **options):
        config = self.get_config(options)
        logger.debug("%s with %s", self.command_name, config["config"])
        try:
            passed = self.run(config)
        except NUMERICAL_ERRORS as exc:
            raise CommandError(f"Numerical failure: {exc}", returncode=NUMERICAL_FAILURE)
        except USAGE_ERRORS as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)
        if passed is False:
            raise CommandError(f"{self.command_name} failed", returncode=CHECK_FAILED)

    def run(self, config: dict):
        raise NotImplementedError("subclasses of ReportCommand must provide a run() method")
