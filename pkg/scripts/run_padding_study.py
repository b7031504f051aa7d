#!/usr/bin/env python3
"""Equivalence error against shift, with and without odd padding.

Thin wrapper over `fpool oddpad`; extra flags pass straight through.
"""

import sys

from fpool.cli import main

if __name__ == "__main__":
    sys.exit(main(["oddpad", *sys.argv[1:]]))
