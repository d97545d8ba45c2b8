"""The stability domain of linear fractional-order difference systems.

A point ``z`` of the eigenvalue plane belongs to the open stability domain of
order ``q`` when two conditions hold together:

* the sector (Matignon) condition ``|arg z| > q*pi/2``, and
* the modulus bound ``|z| < (2*cos((|arg z| - pi)/(2 - q))) ** q``.

``membership_margin`` is the signed difference ``|z| - bound``; its zero level
set is the domain frontier, traced in closed form by ``boundary_curve``.  For
``|arg z| < q*pi/2`` the cosine above is negative and the power base drops out
of real arithmetic, which is why every entry point threads a
:class:`~fracstab.numerics.BranchPolicy` through.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import Window
from .numerics import (
    BranchPolicy,
    PowerKind,
    PowerResult,
    cos_argument,
    principal_arg,
    real_power,
)
from .parallel import row_spans, run_spans

__all__ = [
    "BOUNDARY_TOL",
    "VerdictKind",
    "StabilityVerdict",
    "Polyline",
    "AreaEstimate",
    "membership_margin",
    "classify",
    "classify_field",
    "boundary_curve",
    "matignon_rays",
    "region_area_grid",
    "region_area_green",
]

#: Default half-width of the Boundary band around the frontier.  The
#: parametric identity holds to ~1e-12 in double precision, leaving margin.
BOUNDARY_TOL = 1e-9


class VerdictKind(enum.Enum):
    STABLE_INTERIOR = "stable_interior"
    BOUNDARY = "boundary"
    UNSTABLE_MATIGNON = "unstable_matignon"
    UNSTABLE_MODULUS = "unstable_modulus"
    UNDEFINED_COMPLEX_POWER = "undefined_complex_power"


# Integer codes used by the vectorized classifier (and raster colormaps).
VERDICT_CODE = {
    VerdictKind.STABLE_INTERIOR: 0,
    VerdictKind.BOUNDARY: 1,
    VerdictKind.UNSTABLE_MATIGNON: 2,
    VerdictKind.UNSTABLE_MODULUS: 3,
    VerdictKind.UNDEFINED_COMPLEX_POWER: 4,
}
CODE_VERDICT = {v: k for k, v in VERDICT_CODE.items()}


@dataclass(frozen=True)
class StabilityVerdict:
    """Classification of one eigenvalue-plane point against the domain."""

    variant: VerdictKind
    margin: PowerResult
    matignon_ok: bool


@dataclass(frozen=True)
class Polyline:
    """Sampled plane curve with its parameter values."""

    points: np.ndarray
    parameter_samples: np.ndarray
    closed: bool

    def __post_init__(self) -> None:
        if self.points.size != self.parameter_samples.size or self.points.size < 2:
            raise ValueError("polyline needs matching point/parameter arrays of size >= 2")
        if not np.all(np.diff(self.parameter_samples) > 0):
            raise ValueError("parameter samples must be strictly increasing")
        self.points.setflags(write=False)
        self.parameter_samples.setflags(write=False)

    @property
    def x(self) -> np.ndarray:
        return self.points.real

    @property
    def y(self) -> np.ndarray:
        return self.points.imag


@dataclass(frozen=True)
class AreaEstimate:
    """Area of the stability domain, with the method that produced it."""

    value: float
    method: str  # "grid_count" | "green_theorem"
    resolution: float
    policy: Optional[BranchPolicy]


def _validate_order(q: float, allow_one: bool = True) -> float:
    q = float(q)
    hi_ok = q <= 1.0 if allow_one else q < 1.0
    if not (0.0 < q and hi_ok):
        top = "1]" if allow_one else "1)"
        raise ValueError(f"order q must lie in (0, {top}, got {q}")
    return q


def membership_margin(z: complex, q: float, policy: BranchPolicy = BranchPolicy.PRINCIPAL_COMPLEX) -> PowerResult:
    """Signed membership value ``|z| - (2*cos((|arg z| - pi)/(2 - q))) ** q``.

    Real and negative inside the domain, real and positive outside it; a
    Complex kind (possible only under the principal policy) or an Undefined
    kind (restricted policy) propagates from the power of a negative base.
    """
    q = _validate_order(q)
    z = complex(z)
    a = abs(principal_arg(z))
    e = cos_argument(a, q).value
    power = real_power(2.0 * math.cos(e), q, policy)
    r = abs(z)
    if power.kind is PowerKind.REAL:
        return PowerResult.real(r - power.real_part)
    if power.kind is PowerKind.COMPLEX:
        return PowerResult.from_complex(r - power.real_part, -power.imag_part)
    return PowerResult.undefined()


def classify(
    z: complex,
    q: float,
    policy: BranchPolicy = BranchPolicy.PRINCIPAL_COMPLEX,
    boundary_tol: float = BOUNDARY_TOL,
) -> StabilityVerdict:
    """Classify one point of the eigenvalue plane.

    The sector test runs first, so points inside the excluded sector are
    reported UNSTABLE_MATIGNON no matter how the branch policy treated the
    power there; the complex-power anomaly occurs exactly in that sector, and
    this ordering keeps verdicts policy-stable.  ``z = 0`` has argument 0 by
    convention and fails the strict sector inequality.
    """
    q = _validate_order(q)
    if boundary_tol <= 0.0:
        raise ValueError("boundary_tol must be positive")
    z = complex(z)
    margin = membership_margin(z, q, policy)
    a = abs(principal_arg(z))
    matignon_ok = a > q * math.pi / 2.0
    if not matignon_ok:
        variant = VerdictKind.UNSTABLE_MATIGNON
    elif margin.kind is not PowerKind.REAL:
        # Unreachable for finite z: the power base is nonnegative once the
        # sector test has passed.  Kept for totality.
        variant = VerdictKind.UNDEFINED_COMPLEX_POWER
    elif abs(margin.real_part) <= boundary_tol:
        variant = VerdictKind.BOUNDARY
    elif margin.real_part < 0.0:
        variant = VerdictKind.STABLE_INTERIOR
    else:
        variant = VerdictKind.UNSTABLE_MODULUS
    return StabilityVerdict(variant=variant, margin=margin, matignon_ok=matignon_ok)


def classify_field(
    x: np.ndarray,
    y: np.ndarray,
    q: float,
    policy: BranchPolicy = BranchPolicy.PRINCIPAL_COMPLEX,
    boundary_tol: float = BOUNDARY_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`classify` over the grid ``y[:, None] x x[None, :]``.

    Returns ``(codes, complex_power)`` where ``codes`` holds
    :data:`VERDICT_CODE` entries (shape ``(len(y), len(x))``) and
    ``complex_power`` marks cells whose membership value left real arithmetic
    under the active policy (the white region of domain plots).
    """
    q = _validate_order(q)
    x = np.asarray(x, dtype=np.float64)[None, :]
    y = np.asarray(y, dtype=np.float64)[:, None]
    r = np.hypot(x, y)
    a = np.abs(np.arctan2(y, x))
    base = 2.0 * np.cos((a - math.pi) / (2.0 - q))
    neg = base < 0.0
    bound = np.power(np.where(neg, 0.0, base), q)
    value = r - bound

    matignon_ok = a > q * math.pi / 2.0
    codes = np.full(r.shape, VERDICT_CODE[VerdictKind.UNSTABLE_MATIGNON], dtype=np.int8)
    codes[matignon_ok & (value < -boundary_tol)] = VERDICT_CODE[VerdictKind.STABLE_INTERIOR]
    codes[matignon_ok & (np.abs(value) <= boundary_tol)] = VERDICT_CODE[VerdictKind.BOUNDARY]
    codes[matignon_ok & (value > boundary_tol)] = VERDICT_CODE[VerdictKind.UNSTABLE_MODULUS]

    if policy is BranchPolicy.PRINCIPAL_COMPLEX and not float(q).is_integer():
        complex_power = neg
    else:
        complex_power = np.zeros(r.shape, dtype=bool)
    return codes, complex_power


def boundary_curve(q: float, samples: int) -> Polyline:
    """Closed frontier of the stability domain, sampled uniformly in the
    parameter ``theta`` on ``[-pi/2, pi/2]``.

    Both endpoints are pinned exactly to the origin (``cos(pi/2)`` carries a
    floating-point residue that would otherwise leave the curve open).
    """
    q = _validate_order(q)
    if samples < 3:
        raise ValueError("need at least 3 samples")
    theta = np.linspace(-math.pi / 2.0, math.pi / 2.0, samples)
    c = np.cos(theta)
    c[0] = 0.0
    c[-1] = 0.0
    radius = np.power(2.0 * c, q)
    phase = (2.0 - q) * theta
    points = -radius * np.cos(phase) - 1j * radius * np.sin(phase)
    return Polyline(points=points, parameter_samples=theta, closed=True)


def matignon_rays(q: float, radius: float) -> tuple[Polyline, Polyline]:
    """The two sector rays ``|arg z| = q*pi/2`` as origin-anchored segments."""
    q = _validate_order(q)
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    ang = q * math.pi / 2.0
    t = np.array([0.0, radius])

    def ray(sign: float) -> Polyline:
        end = radius * complex(math.cos(ang), sign * math.sin(ang))
        return Polyline(points=np.array([0j, end]), parameter_samples=t.copy(), closed=False)

    return ray(+1.0), ray(-1.0)


def region_area_grid(
    q: float,
    policy: BranchPolicy,
    window: Window,
    cells_per_axis: int,
    boundary_tol: float = BOUNDARY_TOL,
    threads: int = 1,
) -> AreaEstimate:
    """Domain area by counting interior-classified cell centers.

    The window must contain the closed disk of radius ``2**q`` about the
    origin, which encloses the whole domain.  Cell centers only, no
    supersampling: the count is an integer, so partitioning rows across
    workers cannot change the result.
    """
    q = _validate_order(q)
    if cells_per_axis < 1:
        raise ValueError("cells_per_axis must be >= 1")
    reach = 2.0 ** q
    if not (window.x0 <= -reach and window.x1 >= reach and window.y0 <= -reach and window.y1 >= reach):
        raise ValueError(
            f"window too small: must contain the disk of radius 2**q = {reach:.6g} about the origin"
        )
    xs = window.x_centers(cells_per_axis)
    ys = window.y_centers(cells_per_axis)
    spans = row_spans(cells_per_axis)
    counts = np.zeros(len(spans), dtype=np.int64)
    interior = VERDICT_CODE[VerdictKind.STABLE_INTERIOR]

    def worker(lo: int, hi: int) -> None:
        codes, _ = classify_field(xs, ys[lo:hi], q, policy, boundary_tol)
        counts[spans.index((lo, hi))] = int(np.count_nonzero(codes == interior))

    run_spans(spans, worker, threads)
    cell_area = (window.width / cells_per_axis) * (window.height / cells_per_axis)
    return AreaEstimate(
        value=float(counts.sum()) * cell_area,
        method="grid_count",
        resolution=float(cells_per_axis),
        policy=policy,
    )


def region_area_green(q: float, samples: int) -> AreaEstimate:
    """Domain area by the shoelace rule on the closed parametric frontier."""
    q = _validate_order(q)
    if samples < 100:
        raise ValueError("need at least 100 samples")
    curve = boundary_curve(q, samples)
    x = curve.x
    y = curve.y
    x_next = np.roll(x, -1)
    y_next = np.roll(y, -1)
    area = 0.5 * abs(float(np.sum(x * y_next - x_next * y)))
    return AreaEstimate(value=area, method="green_theorem", resolution=float(samples), policy=None)
