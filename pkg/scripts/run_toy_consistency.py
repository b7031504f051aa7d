#!/usr/bin/env python3
"""Toy-classifier prediction consistency under diagonal shifts.

Thin wrapper over `fpool consistency`; extra flags pass straight through.
"""

import sys

from fpool.cli import main

if __name__ == "__main__":
    sys.exit(main(["consistency", *sys.argv[1:]]))
