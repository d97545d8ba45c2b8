#!/usr/bin/env python3
"""Run the three reference eigenvalue -> parameter -> orbit pipelines:
an interior eigenvalue whose orbit settles on the stable fixed point, a
mirrored-branch eigenvalue whose parameter still produces a convergent
orbit, and an exterior eigenvalue whose parameter escapes.
"""

import sys

from fracstab.cli import main

CASES = [
    ("interior", "-0.5701", "0.3019"),
    ("mirrored branch", "0.1464", "-0.2268"),
    ("exterior", "0.1231", "0.5590"),
]

if __name__ == "__main__":
    worst = 0
    for label, lx, ly in CASES:
        print(f"--- {label}: lambda = ({lx}, {ly}), q = 0.85 ---")
        code = main(["verify", "--lambda-x", lx, "--lambda-y", ly, "--q", "0.85"])
        worst = max(worst, code)
        print()
    sys.exit(worst)
