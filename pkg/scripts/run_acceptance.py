#!/usr/bin/env python3
"""Run the acceptance gate with per-criterion pass/fail lines visible."""

import subprocess
import sys

if __name__ == "__main__":
    raise SystemExit(
        subprocess.call([sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-v", "-s"] + sys.argv[1:])
    )
