#!/usr/bin/env python3
"""Coverage study: how much of the fractal's main body the fixed-point
stability region fills as the order drops.

Below order one half the region visibly shrinks relative to the body; this
script prints the ratio table and writes shrinkage.csv.
"""

import argparse
import pathlib

from fracstab import RasterParams, Window, coverage_report
from fracstab.cli import write_csv


def run(orders, size, iterations, out):
    params = RasterParams(window=Window(-2.0, 0.6, -1.3, 1.3),
                          width=size, height=size, iterations=iterations)
    rows = []
    print(f"{'q':>6} {'body_px':>9} {'region_px':>10} {'intersect':>10} {'ratio':>7}")
    for q in orders:
        rep = coverage_report(q, params)
        rows.append((rep.q, rep.main_body_pixels, rep.stability_region_pixels,
                     rep.intersection_pixels, rep.ratio))
        print(f"{q:6.2f} {rep.main_body_pixels:9d} {rep.stability_region_pixels:10d} "
              f"{rep.intersection_pixels:10d} {rep.ratio:7.4f}")
    write_csv(pathlib.Path(out),
              ["q", "main_body_pixels", "region_pixels", "intersection", "ratio"], rows)
    print(f"wrote {out}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", type=float, nargs="+",
                    default=[0.95, 0.85, 0.7, 0.5, 0.3, 0.2, 0.1])
    ap.add_argument("--size", type=int, default=600)
    ap.add_argument("--iters", type=int, default=300)
    ap.add_argument("--out", default="shrinkage.csv")
    args = ap.parse_args()
    run(args.orders, args.size, args.iters, args.out)
