#!/usr/bin/env python
"""
Command-line entry point.

Runs the experiment subcommands (zeta, certify, census, haar, equidist, forge,
sequence, selftest) as Django management commands, plus migrate and test.
"""

import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Run the subcommands through `uv run python manage.py ...` "
            "or activate the project's virtual environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
