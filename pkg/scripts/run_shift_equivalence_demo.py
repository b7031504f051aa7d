#!/usr/bin/env python3
"""Both evaluation orders for every pooling on one signal and one shift.

Thin wrapper over `fpool demo1d`; extra flags pass straight through.
"""

import sys

from fpool.cli import main

if __name__ == "__main__":
    sys.exit(main(["demo1d", *sys.argv[1:]]))
