"""Parameter-plane fractals of the quadratic map under fractional dynamics.

The fractional discretization iterates the memory convolution with right-hand
side ``z -> z**2 + c`` from ``z(0) = 0``; a parameter ``c`` belongs to the set
when that orbit stays within the escape radius for the whole iteration
budget.  Fixed points of the fractional system solve ``z**2 + c = 0``, so the
maps between the parameter plane and the eigenvalue plane are explicit, and
the stability frontier pulls back to a closed parameter-plane curve.

Note the order-one scheme is ``z -> z + z**2 + c``, not the classical
quadratic recursion; the classical set has its own renderer here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .dynamics import OrbitVerdict, classify_orbit, frac_orbit
from .geometry import Window, point_in_polygon
from .numerics import BranchPolicy, kernel_coefficients
from .parallel import row_spans, run_spans
from .stability import Polyline

__all__ = [
    "DEFAULT_ESCAPE_RADIUS",
    "DEFAULT_ITERATIONS",
    "MAIN_BODY_SEED",
    "RasterGrid",
    "RasterParams",
    "EigenPair",
    "CoverageReport",
    "frac_mandelbrot_point",
    "frac_mandelbrot_raster",
    "classic_mandelbrot_raster",
    "fixed_points",
    "fixed_point_eigenvalues",
    "parameter_from_eigenvalue",
    "parameter_frontier",
    "main_cardioid",
    "main_body_mask",
    "coverage_report",
]

#: The classical |z| > 2 bound is not justified under the memory kernel, so
#: the fractional renderer uses a generous radius by default.
DEFAULT_ESCAPE_RADIUS = 1e3
DEFAULT_ITERATIONS = 1000
#: Interior of the fractional set's main body for every tested order, close
#: to the valley at the origin but inside.
MAIN_BODY_SEED = complex(-0.05, 0.0)
#: Vertex budget of the closed parameter-frontier polygon used for
#: point-in-polygon region tests.
REGION_POLYGON_SAMPLES = 2048


@dataclass(frozen=True)
class RasterGrid:
    """Escape-time raster over a parameter-plane window.

    Row ``iy`` maps to the cell-center ordinate ``window.y_centers(height)[iy]``
    (increasing with the index); column ``ix`` likewise via ``x_centers``.
    ``escape_index[iy, ix]`` is -1 for member pixels.
    """

    window: Window
    width: int
    height: int
    member: np.ndarray
    escape_index: np.ndarray
    iterations: int

    def __post_init__(self) -> None:
        if self.member.shape != (self.height, self.width):
            raise ValueError("member array shape must be (height, width)")
        if self.escape_index.shape != self.member.shape:
            raise ValueError("escape_index shape must match member")
        self.member.setflags(write=False)
        self.escape_index.setflags(write=False)

    @property
    def iterations_used(self) -> np.ndarray:
        return np.where(self.member, self.iterations, self.escape_index)

    def x_centers(self) -> np.ndarray:
        return self.window.x_centers(self.width)

    def y_centers(self) -> np.ndarray:
        return self.window.y_centers(self.height)


@dataclass(frozen=True)
class RasterParams:
    """Raster configuration shared by render and coverage entry points."""

    window: Window
    width: int
    height: int
    iterations: int = DEFAULT_ITERATIONS
    escape_radius: float = DEFAULT_ESCAPE_RADIUS
    threads: int = 1


@dataclass(frozen=True)
class EigenPair:
    """The four fixed-point eigenvalues of one parameter value.

    Components are real square roots of ``2|c| -+ 2*Re c``; the first pair
    carries the positive real part, the second pair its negation.
    """

    lam1: complex
    lam2: complex
    lam3: complex
    lam4: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.lam1, self.lam2, self.lam3, self.lam4)


@dataclass(frozen=True)
class CoverageReport:
    """How much of the fractal's main body the fixed-point stability region covers."""

    q: float
    main_body_pixels: int
    stability_region_pixels: int
    intersection_pixels: int
    ratio: float


def frac_mandelbrot_point(
    c: complex,
    q: float,
    iterations: int = DEFAULT_ITERATIONS,
    escape_radius: float = DEFAULT_ESCAPE_RADIUS,
) -> tuple[bool, OrbitVerdict]:
    """Membership of one parameter value, with the orbit's fate.

    Runs the memory-convolution orbit of ``z -> z**2 + c`` from 0; the point
    is a member exactly when the orbit did not escape within the budget.
    """
    c = complex(c)
    traj = frac_orbit(q, lambda z: z * z + c, 0j, iterations,
                      escape_radius=escape_radius, rhs_tag="quadratic")
    verdict = classify_orbit(traj)
    return traj.escape_index is None, verdict


def _escape_steps_frac(c_flat: np.ndarray, b_rev: np.ndarray, iterations: int, radius: float) -> np.ndarray:
    """Vectorized escape step (-1 = never) of the fractional orbit per pixel."""
    n = iterations
    count = c_flat.size
    esc = np.full(count, -1, dtype=np.int32)
    alive = np.ones(count, dtype=bool)
    x = np.zeros(count, dtype=np.complex128)
    history = np.empty((n, count), dtype=np.complex128)
    for k in range(1, n + 1):
        # Freeze escaped pixels at rhs 0: their later states are meaningless
        # but stay bounded, so no overflow can leak into live columns.
        history[k - 1] = np.where(alive, x * x + c_flat, 0.0)
        x = np.dot(b_rev[n - k:], history[:k])
        newly = alive & (np.abs(x) > radius)
        esc[newly] = k
        alive &= ~newly
        if not alive.any():
            break
    return esc


def frac_mandelbrot_raster(
    window: Window,
    width: int,
    height: int,
    q: float,
    iterations: int = DEFAULT_ITERATIONS,
    escape_radius: float = DEFAULT_ESCAPE_RADIUS,
    threads: int = 1,
) -> RasterGrid:
    """Escape-time raster of the fractional-order set over cell centers.

    Kernel coefficients are computed once and shared; tiles of rows are
    processed independently (see :mod:`fracstab.parallel`), so the raster is
    identical for any worker count.
    """
    if width < 1 or height < 1:
        raise ValueError("raster needs at least one pixel per axis")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    kernel = kernel_coefficients(q, iterations)
    b_rev = kernel.b[::-1].copy()
    xs = window.x_centers(width)
    ys = window.y_centers(height)
    esc = np.empty((height, width), dtype=np.int32)

    def worker(lo: int, hi: int) -> None:
        c_block = (xs[None, :] + 1j * ys[lo:hi, None]).ravel()
        esc[lo:hi] = _escape_steps_frac(c_block, b_rev, iterations, escape_radius).reshape(hi - lo, width)

    run_spans(row_spans(height), worker, threads)
    return RasterGrid(window=window, width=width, height=height,
                      member=esc < 0, escape_index=esc, iterations=iterations)


def classic_mandelbrot_raster(
    window: Window,
    width: int,
    height: int,
    iterations: int = DEFAULT_ITERATIONS,
    escape_radius: float = 2.0,
    threads: int = 1,
) -> RasterGrid:
    """Classical quadratic-map escape-time raster (``z -> z**2 + c`` from 0)."""
    if width < 1 or height < 1:
        raise ValueError("raster needs at least one pixel per axis")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    xs = window.x_centers(width)
    ys = window.y_centers(height)
    esc = np.empty((height, width), dtype=np.int32)

    def worker(lo: int, hi: int) -> None:
        c_block = (xs[None, :] + 1j * ys[lo:hi, None]).ravel()
        z = np.zeros_like(c_block)
        block_esc = np.full(c_block.size, -1, dtype=np.int32)
        alive = np.ones(c_block.size, dtype=bool)
        for k in range(1, iterations + 1):
            z = np.where(alive, z * z + c_block, 0.0)
            newly = alive & (np.abs(z) > escape_radius)
            block_esc[newly] = k
            alive &= ~newly
            if not alive.any():
                break
        esc[lo:hi] = block_esc.reshape(hi - lo, width)

    run_spans(row_spans(height), worker, threads)
    return RasterGrid(window=window, width=width, height=height,
                      member=esc < 0, escape_index=esc, iterations=iterations)


def fixed_points(c: complex) -> tuple[complex, complex]:
    """Fixed points of the fractional system: roots of ``z**2 + c = 0``.

    The first is ``i * sqrt(c)`` with the principal square root, the second
    its negation.
    """
    z1 = 1j * cmath.sqrt(complex(c))
    return z1, -z1


def fixed_point_eigenvalues(c: complex) -> EigenPair:
    """The four eigenvalues attached to the two fixed points of ``c``.

    With ``r = |c|`` the components are ``sqrt(2r - 2*Re c)`` and
    ``sqrt(2r + 2*Re c)``; both radicands are nonnegative (clamped against
    rounding), and the four sign combinations split two per fixed point.
    """
    c = complex(c)
    r = abs(c)
    re_part = math.sqrt(max(2.0 * r - 2.0 * c.real, 0.0))
    im_part = math.sqrt(max(2.0 * r + 2.0 * c.real, 0.0))
    return EigenPair(
        lam1=complex(re_part, im_part),
        lam2=complex(re_part, -im_part),
        lam3=complex(-re_part, im_part),
        lam4=complex(-re_part, -im_part),
    )


def parameter_from_eigenvalue(lam: complex) -> complex:
    """Invert the eigenvalue map, returning the ``Im c >= 0`` representative.

    With ``u = (Re lam)**2`` and ``v = (Im lam)**2``: ``Re c = (v - u)/4`` and
    ``|c| = (u + v)/4``; the sign of ``Im c`` is not recoverable (the forward
    map depends on ``c`` only through ``Re c`` and ``|c|``), so the
    nonnegative branch is returned.  Conjugate symmetry of the fractal makes
    the choice lossless.
    """
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise ValueError("eigenvalue must be finite")
    u = lam.real * lam.real
    v = lam.imag * lam.imag
    cx = (v - u) / 4.0
    r = (u + v) / 4.0
    cy = math.sqrt(max(r * r - cx * cx, 0.0))
    return complex(cx, cy)


def parameter_frontier(q: float, samples: int) -> Polyline:
    """Closed parameter-plane curve bounding the stable-fixed-point region.

    This is the eigenvalue-plane frontier pulled back through the fixed-point
    eigenvalue map, sampled uniformly in ``theta`` on ``[-pi/2, pi/2]`` with
    the endpoints pinned exactly to the origin (the valley cusp).
    """
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise ValueError(f"order q must lie in (0, 1], got {q}")
    if samples < 3:
        raise ValueError("need at least 3 samples")
    theta = np.linspace(-math.pi / 2.0, math.pi / 2.0, samples)
    cos_t = np.cos(theta)
    cos_t[0] = 0.0
    cos_t[-1] = 0.0
    c2q = np.power(cos_t, 2.0 * q)
    cx = -(2.0 ** (2.0 * q - 2.0)) * c2q * np.cos(2.0 * theta * (q - 2.0))
    cy = (2.0 ** (2.0 * q - 1.0)) * np.sin(theta * (2.0 - q)) * c2q * np.cos(theta * (q - 2.0))
    return Polyline(points=cx + 1j * cy, parameter_samples=theta, closed=True)


def main_cardioid(samples: int) -> Polyline:
    """The classical set's main cardioid, ``4c = 2e^{i t} - e^{2it}``."""
    if samples < 3:
        raise ValueError("need at least 3 samples")
    theta = np.linspace(-math.pi, math.pi, samples)
    cx = (2.0 * np.cos(theta) - np.cos(2.0 * theta)) / 4.0
    cy = (2.0 * np.sin(theta) - np.sin(2.0 * theta)) / 4.0
    return Polyline(points=cx + 1j * cy, parameter_samples=theta, closed=True)


def main_body_mask(raster: RasterGrid, seed: complex = MAIN_BODY_SEED) -> np.ndarray:
    """4-connected member component containing the seed's pixel.

    The notion of "main body" this implements is resolution dependent near
    pinch points: a neck that is non-member (or absent) at the raster's
    resolution separates components.
    """
    seed = complex(seed)
    iy, ix = raster.window.pixel_of(seed.real, seed.imag, raster.width, raster.height)
    if not raster.member[iy, ix]:
        raise ValueError(f"seed {seed} does not map to a member pixel")
    labels, _ = ndimage.label(raster.member)  # default structure = 4-connectivity
    return labels == labels[iy, ix]


def coverage_report(
    q: float,
    params: RasterParams,
    region_policy: BranchPolicy = BranchPolicy.PRINCIPAL_COMPLEX,
    seed: complex = MAIN_BODY_SEED,
) -> CoverageReport:
    """Intersect the fractal's main body with the stable-fixed-point region.

    The region is the interior of the closed parameter frontier, tested by
    even-odd ray casting on pixel centers.  ``region_policy`` is accepted for
    interface symmetry with the eigenvalue-plane classifiers but cannot
    change the result: the parametric frontier involves no powers of negative
    bases, and sector-excluded verdicts are policy-stable by construction.
    """
    raster = frac_mandelbrot_raster(
        params.window, params.width, params.height, q,
        iterations=params.iterations, escape_radius=params.escape_radius,
        threads=params.threads,
    )
    body = main_body_mask(raster, seed)
    frontier = parameter_frontier(q, REGION_POLYGON_SAMPLES)
    xs = raster.x_centers()
    ys = raster.y_centers()
    px, py = np.meshgrid(xs, ys)
    region = point_in_polygon(px.ravel(), py.ravel(), frontier.x, frontier.y).reshape(body.shape)
    inter = body & region
    body_n = int(body.sum())
    return CoverageReport(
        q=float(q),
        main_body_pixels=body_n,
        stability_region_pixels=int(region.sum()),
        intersection_pixels=int(inter.sum()),
        ratio=float(inter.sum()) / body_n,
    )
