#!/usr/bin/env python3
"""Per-segment equivalence sweeps for the stacked-pooling cascade.

Thin wrapper over `fpool transitivity`; extra flags pass straight through.
"""

import sys

from fpool.cli import main

if __name__ == "__main__":
    sys.exit(main(["transitivity", *sys.argv[1:]]))
