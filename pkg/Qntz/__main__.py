"""Run a Qntz management command: ``python -m Qntz weights --n 2``."""
import os
import sys


def main(argv=None):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "Qntz.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = sys.argv[1:] if argv is None else argv
    execute_from_command_line(["qntz", *argv])


if __name__ == "__main__":
    main()
