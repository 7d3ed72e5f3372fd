#!/usr/bin/env python
"""Qntz command-line utility: enumerate graphs, compute weights, run checks."""
import sys

from Qntz.__main__ import main


if __name__ == "__main__":
    main(sys.argv[1:])
