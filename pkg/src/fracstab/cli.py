"""Command-line surface: domain plots, fractal renders, verification pipelines,
linear simulation, order sweeps and area reports.

Exit codes: 0 success/concordant, 2 invalid flags, 3 I/O failure,
4 verification discordance.

File outputs are deterministic for fixed flags: rasters are binary PPM (P6),
tables are UTF-8 CSV with reals at 17 significant digits, and all writes
happen from a single writer after computation completes.  Run manifests
(JSON lines) carry wall-clock timings and are the one output excluded from
byte-reproducibility.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .dynamics import OrbitFate, decay_exponent, linear_orbit
from .geometry import Window
from .mandelbrot import (
    RasterParams,
    classic_mandelbrot_raster,
    coverage_report,
    fixed_points,
    frac_mandelbrot_point,
    frac_mandelbrot_raster,
    main_cardioid,
    parameter_frontier,
    parameter_from_eigenvalue,
)
from .numerics import BranchPolicy
from .parallel import row_spans, run_spans
from .stability import (
    VerdictKind,
    boundary_curve,
    classify,
    classify_field,
    matignon_rays,
    region_area_green,
    region_area_grid,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DISCORDANT = 4

POLICY_BY_NAME = {
    "principal": BranchPolicy.PRINCIPAL_COMPLEX,
    "oddroot": BranchPolicy.REAL_ODD_ROOT,
    "restricted": BranchPolicy.RESTRICTED_DOMAIN,
}

# Fixed verdict colormap for domain rasters (RGB):
# interior green, frontier band red, sector-excluded light blue, cells whose
# membership value left real arithmetic white, everything else unset (black).
COLOR_INTERIOR = (0, 168, 0)
COLOR_BOUNDARY = (220, 0, 0)
COLOR_MATIGNON = (165, 205, 255)
COLOR_COMPLEX_POWER = (255, 255, 255)
COLOR_UNSET = (0, 0, 0)

DEFAULT_DOMAIN_WINDOW = "-2.2,2.2,-2.2,2.2"
DEFAULT_FRAC_WINDOW = "-2.0,0.8,-1.4,1.4"
DEFAULT_CLASSIC_WINDOW = "-2.25,0.75,-1.5,1.5"


# ----------------------------------------------------------------------------
# Flag parsing helpers
# ----------------------------------------------------------------------------

def _order(text: str) -> float:
    try:
        q = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < q <= 1.0:
        raise argparse.ArgumentTypeError(f"order q must lie in (0, 1], got {q}")
    return q


def _window(text: str) -> Window:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be x0,x1,y0,y1")
    try:
        x0, x1, y0, y1 = (float(p) for p in parts)
        return Window(x0, x1, y0, y1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("size must be WIDTHxHEIGHT")
    try:
        w, h = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}")
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("size must be at least 1x1")
    return w, h


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0.0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}")


# ----------------------------------------------------------------------------
# Writers
# ----------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_ppm(path: Path, rgb_bottom_up: np.ndarray) -> None:
    """Binary P6 writer; input rows run bottom-to-top, file rows top-to-bottom."""
    h, w, _ = rgb_bottom_up.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb_bottom_up[::-1]).tobytes())


def _maybe_write_png(path: Path, rgb_bottom_up: np.ndarray, want_png: bool) -> None:
    if not want_png:
        return
    from PIL import Image

    Image.fromarray(rgb_bottom_up[::-1], mode="RGB").save(path.with_suffix(".png"))


def _write_manifest(path: Path, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


# ----------------------------------------------------------------------------
# Rendering helpers
# ----------------------------------------------------------------------------

def _domain_image(window: Window, width: int, height: int, q: float,
                  policy: BranchPolicy, threads: int) -> np.ndarray:
    xs = window.x_centers(width)
    ys = window.y_centers(height)
    rgb = np.empty((height, width, 3), dtype=np.uint8)
    palette = np.array(
        [COLOR_INTERIOR, COLOR_BOUNDARY, COLOR_MATIGNON, COLOR_UNSET, COLOR_COMPLEX_POWER],
        dtype=np.uint8,
    )

    def worker(lo: int, hi: int) -> None:
        codes, complex_power = classify_field(xs, ys[lo:hi], q, policy)
        block = palette[codes]
        block[complex_power] = COLOR_COMPLEX_POWER
        rgb[lo:hi] = block

    run_spans(row_spans(height), worker, threads)
    return rgb


def _escape_image(member: np.ndarray, escape_index: np.ndarray, iterations: int) -> np.ndarray:
    """Members black, outside shaded by escape step (early = light)."""
    t = np.clip(escape_index.astype(np.float64) / iterations, 0.0, 1.0)
    shade = np.uint8(np.round(64.0 + 191.0 * (1.0 - t)))
    gray = np.where(member, np.uint8(0), shade)
    return np.repeat(gray[:, :, None], 3, axis=2)


def _curve_rows(poly) -> list[tuple[float, float, float]]:
    return list(zip(poly.parameter_samples, poly.x, poly.y))


# ----------------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------------

def _cmd_domain(args: argparse.Namespace) -> int:
    policy = POLICY_BY_NAME[args.policy]
    width, height = args.size
    out = Path(args.out)
    rgb = _domain_image(args.window, width, height, args.q, policy, args.threads)

    curve = boundary_curve(args.q, args.samples)
    ray_up, ray_dn = matignon_rays(args.q, radius=max(
        math.hypot(args.window.x0, args.window.y0),
        math.hypot(args.window.x1, args.window.y1),
        math.hypot(args.window.x0, args.window.y1),
        math.hypot(args.window.x1, args.window.y0),
    ))
    write_ppm(out, rgb)
    _maybe_write_png(out, rgb, args.png)
    write_csv(out.with_suffix(".boundary.csv"), ["theta", "x", "y"], _curve_rows(curve))
    ray_rows = []
    for sign, ray in ((1.0, ray_up), (-1.0, ray_dn)):
        for t, p in zip(ray.parameter_samples, ray.points):
            ray_rows.append((sign, t, p.real, p.imag))
    write_csv(out.with_suffix(".rays.csv"), ["ray", "t", "x", "y"], ray_rows)
    print(f"wrote {out} ({width}x{height}), boundary and ray tables alongside")
    return EXIT_OK


def _cmd_mandelbrot(args: argparse.Namespace) -> int:
    width, height = args.size
    out = Path(args.out)
    classic = args.q == 1.0
    window = args.window
    if window is None:
        window = _window(DEFAULT_CLASSIC_WINDOW if classic else DEFAULT_FRAC_WINDOW)
    escape = args.escape if args.escape is not None else (2.0 if classic else 1e3)

    start = time.perf_counter()
    if classic:
        # Order one renders the classical integer-order set; the order-one
        # fractional scheme stays available through the library API.
        raster = classic_mandelbrot_raster(window, width, height, args.iters, escape, args.threads)
    else:
        raster = frac_mandelbrot_raster(window, width, height, args.q, args.iters, escape, args.threads)
    elapsed = time.perf_counter() - start

    rgb = _escape_image(raster.member, raster.escape_index, raster.iterations)
    write_ppm(out, rgb)
    _maybe_write_png(out, rgb, args.png)

    if args.overlay != "none":
        poly = main_cardioid(args.samples) if args.overlay == "cardioid" else parameter_frontier(args.q, args.samples)
        write_csv(out.with_suffix(".overlay.csv"), ["theta", "cx", "cy"], _curve_rows(poly))

    members = int(raster.member.sum())
    _write_manifest(out.with_suffix(".manifest.jsonl"), [
        {"event": "config", "command": "mandelbrot", "map": "classic" if classic else "fractional",
         "q": args.q, "window": [window.x0, window.x1, window.y0, window.y1],
         "size": [width, height], "iters": args.iters, "escape": escape,
         "overlay": args.overlay, "threads": args.threads},
        {"event": "result", "elapsed_s": elapsed, "pixels": width * height,
         "members": members, "out": str(out)},
    ])
    print(f"wrote {out} ({width}x{height}, {members} member pixels)")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    policy = POLICY_BY_NAME[args.policy]
    lam = complex(args.lambda_x, args.lambda_y)
    verdict = classify(lam, args.q, policy)
    c = parameter_from_eigenvalue(lam)
    member, orbit = frac_mandelbrot_point(c, args.q, args.iters, args.escape)
    z_plus, z_minus = fixed_points(c)
    # Branch matching: for the canonical (Im c >= 0) parameter, the fixed
    # point i*sqrt(c) owns the eigenvalues with nonpositive real part and
    # -i*sqrt(c) the mirrored pair, so the given eigenvalue's sign picks the
    # fixed point whose stability it witnesses.
    matched = z_plus if lam.real <= 0.0 else z_minus
    if orbit.fate is OrbitFate.CONVERGED:
        fp_error = abs(complex(orbit.point) - matched)
    else:
        fp_error = math.inf
    stable = verdict.variant is VerdictKind.STABLE_INTERIOR
    converged_to_matched = orbit.fate is OrbitFate.CONVERGED and fp_error <= args.tol
    concordant = stable == converged_to_matched

    print(f"lambda           = ({_fmt(lam.real)}, {_fmt(lam.imag)})")
    print(f"q                = {_fmt(args.q)}")
    margin = verdict.margin
    print(f"verdict          = {verdict.variant.value} (matignon_ok={verdict.matignon_ok}, "
          f"margin_kind={margin.kind.value}, margin_re={_fmt(margin.real_part)})")
    print(f"c                = ({_fmt(c.real)}, {_fmt(c.imag)})")
    print(f"set member       = {member}")
    if orbit.fate is OrbitFate.CONVERGED:
        pt = complex(orbit.point)
        print(f"orbit fate       = converged to ({_fmt(pt.real)}, {_fmt(pt.imag)}) "
              f"(tail spread {_fmt(orbit.achieved_tol)})")
    elif orbit.fate is OrbitFate.DIVERGED:
        print(f"orbit fate       = diverged (escape index {orbit.escape_index})")
    else:
        print("orbit fate       = undecided")
    print(f"matched fixpoint = ({_fmt(matched.real)}, {_fmt(matched.imag)})")
    print(f"fixpoint error   = {_fmt(fp_error) if math.isfinite(fp_error) else 'inf'}")
    print(f"concordant       = {'yes' if concordant else 'NO'}")
    if not concordant:
        print("discordance: stability verdict and orbit fate disagree", file=sys.stderr)
        return EXIT_DISCORDANT
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.q_start > args.q_end:
        print("sweep requires q-start <= q-end", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    policy = POLICY_BY_NAME[args.policy]
    width, height = args.size
    qs = np.linspace(args.q_start, args.q_end, args.steps)

    rows = []
    for idx, q in enumerate(qs):
        q = float(q)
        rgb = _domain_image(args.window_domain, width, height, q, policy, args.threads)
        write_ppm(out_dir / f"frame_{idx:03d}.ppm", rgb)
        params = RasterParams(window=args.window_fractal, width=width, height=height,
                              iterations=args.iters, escape_radius=args.escape,
                              threads=args.threads)
        report = coverage_report(q, params, region_policy=policy)
        if args.frames == "both":
            raster = frac_mandelbrot_raster(args.window_fractal, width, height, q,
                                            args.iters, args.escape, args.threads)
            write_ppm(out_dir / f"fractal_{idx:03d}.ppm",
                      _escape_image(raster.member, raster.escape_index, raster.iterations))
        rows.append((q, report.main_body_pixels, report.stability_region_pixels,
                     report.intersection_pixels, report.ratio))
        print(f"q={q:.4f}: body={report.main_body_pixels} region={report.stability_region_pixels} "
              f"ratio={report.ratio:.4f}")
    write_csv(out_dir / "coverage.csv",
              ["q", "main_body_pixels", "region_pixels", "intersection", "ratio"], rows)
    print(f"wrote {args.steps} frame(s) and coverage.csv to {out_dir}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    entries = args.matrix
    d = int(round(math.sqrt(len(entries))))
    if d * d != len(entries) or not 1 <= d <= 4:
        print("matrix must hold d*d entries with d in 1..4", file=sys.stderr)
        return EXIT_USAGE
    if len(args.y0) != d:
        print(f"y0 must hold {d} entries to match the matrix", file=sys.stderr)
        return EXIT_USAGE
    matrix = np.array(entries, dtype=np.float64).reshape(d, d)
    traj = linear_orbit(args.q, matrix, np.array(args.y0), args.iters)
    norms = traj.norms()
    n_last = len(traj) - 1

    rows = []
    for n in range(len(traj)):
        rows.append((n, norms[n], *traj.states[n]))
    header = ["n", "norm"] + [f"y{i}" for i in range(d)]
    write_csv(Path(args.out), header, rows)

    escaped = traj.escape_index is not None
    ref = norms[max(n_last // 10, 0)]
    decaying = (not escaped) and norms[-1] < ref
    print(f"steps completed  = {n_last} of {args.iters}" + (" (escaped)" if escaped else ""))
    lo = max(1, n_last // 10)
    if not escaped and lo < n_last and n_last - lo + 1 >= 10 and np.all(norms[lo:] > 0.0):
        fit = decay_exponent(traj, (lo, n_last))
        print(f"decay fit        = slope {_fmt(fit.slope)}, intercept {_fmt(fit.intercept)}, "
              f"window [{fit.window[0]}, {fit.window[1]}], residual {_fmt(fit.residual)}")
    else:
        print("decay fit        = skipped (escape, zero states or too few samples)")
    print(f"stability        = {'decaying' if decaying else 'NOT decaying (flagged unstable)'}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_area(args: argparse.Namespace) -> int:
    policy = POLICY_BY_NAME[args.policy]
    grid = region_area_grid(args.q, policy, args.window, args.cells, threads=args.threads)
    green = region_area_green(args.q, args.samples)
    gap = abs(grid.value - green.value) / green.value if green.value else math.inf
    write_csv(Path(args.out),
              ["q", "grid_cells", "grid_area", "green_samples", "green_area", "rel_gap"],
              [(args.q, grid.resolution, grid.value, green.resolution, green.value, gap)])
    print(f"grid  area ({args.cells}^2 cells)    = {grid.value:.6f}")
    print(f"green area ({args.samples} samples) = {green.value:.6f}")
    print(f"relative gap = {gap:.3e}")
    print(f"wrote {args.out}")
    return EXIT_OK


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracstab",
        description="Stability domains and fractals of fractional-order difference systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, policy: bool = True, threads: bool = True) -> None:
        if policy:
            p.add_argument("--policy", choices=sorted(POLICY_BY_NAME), default="principal",
                           help="negative-base power semantics")
        if threads:
            p.add_argument("--threads", type=_nonneg_int, default=1,
                           help="worker count for raster tiles (0 = auto)")

    p = sub.add_parser("domain", help="render the stability domain and export its frontier")
    p.add_argument("--q", type=_order, required=True)
    p.add_argument("--window", type=_window, default=_window(DEFAULT_DOMAIN_WINDOW))
    p.add_argument("--size", type=_size, default=(800, 800))
    p.add_argument("--samples", type=_positive_int, default=1024, help="frontier CSV sample count")
    p.add_argument("--png", action="store_true", help="also write a PNG next to the PPM")
    p.add_argument("--out", default="domain.ppm")
    add_common(p)
    p.set_defaults(handler=_cmd_domain)

    p = sub.add_parser("mandelbrot", help="escape-time raster of the parameter-plane set")
    p.add_argument("--q", type=_order, required=True,
                   help="fractional order; q=1 renders the classical integer-order set")
    p.add_argument("--window", type=_window, default=None)
    p.add_argument("--size", type=_size, default=(600, 600))
    p.add_argument("--iters", type=_positive_int, default=1000)
    p.add_argument("--escape", type=_positive_float, default=None,
                   help="escape radius (default 1e3 fractional, 2 classical)")
    p.add_argument("--overlay", choices=["gamma", "cardioid", "none"], default="none",
                   help="companion curve CSV: parameter frontier or main cardioid")
    p.add_argument("--samples", type=_positive_int, default=1024, help="overlay CSV sample count")
    p.add_argument("--png", action="store_true")
    p.add_argument("--out", default="fractal.ppm")
    add_common(p, policy=False)
    p.set_defaults(handler=_cmd_mandelbrot)

    p = sub.add_parser("verify", help="eigenvalue -> parameter -> orbit concordance pipeline")
    p.add_argument("--lambda-x", type=float, required=True, dest="lambda_x")
    p.add_argument("--lambda-y", type=float, required=True, dest="lambda_y")
    p.add_argument("--q", type=_order, required=True)
    p.add_argument("--iters", type=_positive_int, default=1000)
    p.add_argument("--escape", type=_positive_float, default=1e3)
    p.add_argument("--tol", type=_positive_float, default=1e-3)
    add_common(p, threads=False)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("sweep", help="frames plus coverage table across a range of orders")
    p.add_argument("--q-start", type=_order, required=True)
    p.add_argument("--q-end", type=_order, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--size", type=_size, default=(300, 300))
    p.add_argument("--iters", type=_positive_int, default=300)
    p.add_argument("--escape", type=_positive_float, default=1e3)
    p.add_argument("--window-domain", type=_window, default=_window(DEFAULT_DOMAIN_WINDOW))
    p.add_argument("--window-fractal", type=_window, default=_window("-2.0,0.6,-1.3,1.3"))
    p.add_argument("--frames", choices=["domain", "both"], default="domain")
    p.add_argument("--out-dir", required=True)
    add_common(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("simulate", help="simulate a linear system and fit its decay rate")
    p.add_argument("--q", type=_order, required=True)
    p.add_argument("--matrix", type=_float_list, required=True,
                   help="row-major entries, d*d values with d <= 4")
    p.add_argument("--y0", type=_float_list, required=True)
    p.add_argument("--iters", type=_positive_int, default=4000)
    p.add_argument("--out", default="trajectory.csv")
    add_common(p, policy=False, threads=False)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("area", help="stability-domain area by grid count and by quadrature")
    p.add_argument("--q", type=_order, required=True)
    p.add_argument("--cells", type=_positive_int, default=1000, help="grid cells per axis")
    p.add_argument("--samples", type=_positive_int, default=100000, help="quadrature samples")
    p.add_argument("--window", type=_window, default=_window(DEFAULT_DOMAIN_WINDOW))
    p.add_argument("--out", default="area.csv")
    add_common(p)
    p.set_defaults(handler=_cmd_area)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
