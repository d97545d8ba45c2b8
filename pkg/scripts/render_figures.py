#!/usr/bin/env python3
"""Render the standard picture set into ./figures.

Produces, via the CLI surface:
  * stability-domain rasters for orders 0.5 and 0.8 (the second shows the
    supplementary sector regions under the principal branch policy, plus an
    oddroot rendering for contrast);
  * the fractional parameter-plane set at order 0.85 with its stability
    frontier overlay;
  * the classical set with the main cardioid overlay.

At the default 800x800 and 1000 iterations the fractional render dominates
the runtime (a few minutes); pass --size/--iters to trade fidelity for speed.
"""

import argparse
import pathlib
import sys

from fracstab.cli import main


def run(size: str, iters: int, out_dir: str) -> None:
    out = pathlib.Path(out_dir)
    out.mkdir(exist_ok=True)
    jobs = [
        ["domain", "--q", "0.5", "--size", size,
         "--out", str(out / "domain_q05.ppm")],
        ["domain", "--q", "0.8", "--size", size,
         "--out", str(out / "domain_q08.ppm")],
        ["domain", "--q", "0.8", "--policy", "oddroot", "--size", size,
         "--out", str(out / "domain_q08_oddroot.ppm")],
        ["mandelbrot", "--q", "0.85", "--size", size, "--iters", str(iters),
         "--overlay", "gamma", "--threads", "0",
         "--out", str(out / "fractional_q085.ppm")],
        ["mandelbrot", "--q", "1", "--size", size, "--iters", str(iters),
         "--overlay", "cardioid", "--threads", "0",
         "--out", str(out / "classic.ppm")],
    ]
    for argv in jobs:
        code = main(argv)
        if code != 0:
            sys.exit(code)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", default="800x800")
    ap.add_argument("--iters", type=int, default=1000)
    ap.add_argument("--out-dir", default="figures")
    args = ap.parse_args()
    run(args.size, args.iters, args.out_dir)
