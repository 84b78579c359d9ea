#!/usr/bin/env python3

"""
Starting urysel.

Help:
    ./bin/start-urysel.py --config tests/quicktest.ini check metric-axioms
"""

import sys
from start import start_urysel

if __name__ == "__main__":
    start_urysel()
else:
    sys.exit("Can be run only as standalone program.")
