"""Scalar numeric kernels shared by the stability, dynamics and fractal modules.

The delicate spot in this problem is the evaluation of ``x**y`` for ``x < 0``
and non-integer ``y``: IEEE exp/log semantics yield a complex number, while
root-style evaluators yield a signed real and strict real-domain evaluators
reject the input. :class:`BranchPolicy` makes that choice explicit everywhere
a power of a possibly-negative base is taken, so the three behaviours can be
compared instead of silently mixed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "BranchPolicy",
    "PowerKind",
    "PowerResult",
    "QuadrantTag",
    "CosArgument",
    "KernelCoefficients",
    "principal_arg",
    "atan2_emulated",
    "real_power",
    "cos_argument",
    "kernel_coefficients",
]

#: Absolute tolerance on the quadrant-boundary test of :func:`cos_argument`.
QUADRANT_TOL = 1e-12


class BranchPolicy(enum.Enum):
    """Evaluation rule for ``x**y`` with ``x < 0`` and non-integer ``y``."""

    PRINCIPAL_COMPLEX = "principal"  # exp(y * Log x) with the principal log
    REAL_ODD_ROOT = "oddroot"        # sign-preserving real root: -(|x| ** y)
    RESTRICTED_DOMAIN = "restricted"  # domain rejection


class PowerKind(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class PowerResult:
    """Outcome of a branch-policy-aware power evaluation.

    ``imag_part`` is exactly 0.0 when ``kind`` is REAL; UNDEFINED results
    carry NaN in both numeric slots.
    """

    kind: PowerKind
    real_part: float = math.nan
    imag_part: float = math.nan

    @classmethod
    def real(cls, value: float) -> "PowerResult":
        return cls(PowerKind.REAL, float(value), 0.0)

    @classmethod
    def from_complex(cls, re: float, im: float) -> "PowerResult":
        return cls(PowerKind.COMPLEX, float(re), float(im))

    @classmethod
    def undefined(cls) -> "PowerResult":
        return cls(PowerKind.UNDEFINED)

    @property
    def is_real(self) -> bool:
        return self.kind is PowerKind.REAL


class QuadrantTag(enum.Enum):
    QUADRANT_III = "III"
    QUADRANT_IV = "IV"
    BOUNDARY = "boundary"


class CosArgument(NamedTuple):
    value: float
    quadrant: QuadrantTag


def _sign(v: float) -> float:
    """Three-valued sign with sign(0) = 0, as used by the atan2 emulation."""
    return float((v > 0.0) - (v < 0.0))


def _pow(base: float, exponent: float) -> float:
    """``base ** exponent`` saturating to +-inf instead of raising on overflow."""
    try:
        return base ** exponent
    except OverflowError:
        if base < 0.0 and float(exponent).is_integer() and int(exponent) % 2 != 0:
            return -math.inf
        return math.inf


def principal_arg(z: complex) -> float:
    """Principal argument of ``z`` in ``(-pi, pi]``.

    ``principal_arg(0)`` is defined as 0 so that downstream membership tests
    are total.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("principal_arg requires a finite input")
    ang = math.atan2(z.imag, z.real)
    if ang == -math.pi:  # atan2 returns -pi for a negative-zero imaginary part
        ang = math.pi
    return ang


def atan2_emulated(y: float, x: float) -> float:
    """Two-argument arctangent emulated as
    ``arctan(y/x) + (pi/2) * sign(y) * (1 - sign(x))``.

    This is a cross-check helper, not the default argument routine. Known
    deviations from the native two-argument arctangent, inherited from the
    formula itself:

    * ``x == 0`` divides by zero and is rejected here;
    * ``y == 0, x < 0`` yields 0 (``sign(0) == 0``) where the native
      function yields pi.
    """
    y = float(y)
    x = float(x)
    if x == 0.0:
        raise ValueError("atan2_emulated is undefined for x = 0")
    return math.atan(y / x) + (math.pi / 2.0) * _sign(y) * (1.0 - _sign(x))


def real_power(base: float, exponent: float, policy: BranchPolicy) -> PowerResult:
    """Evaluate ``base ** exponent`` under an explicit branch policy.

    Nonnegative bases are policy-independent (``0**0`` is defined as 1,
    ``0**negative`` is undefined). Integer exponents are unambiguous in real
    arithmetic and are evaluated directly under every policy; the policies
    only disagree for negative bases with non-integer exponents.
    """
    base = float(base)
    exponent = float(exponent)
    if not (math.isfinite(base) and math.isfinite(exponent)):
        raise ValueError("real_power requires finite base and exponent")
    if base > 0.0:
        return PowerResult.real(_pow(base, exponent))
    if base == 0.0:
        if exponent == 0.0:
            return PowerResult.real(1.0)
        if exponent > 0.0:
            return PowerResult.real(0.0)
        return PowerResult.undefined()
    if exponent.is_integer():
        return PowerResult.real(_pow(base, exponent))
    if policy is BranchPolicy.REAL_ODD_ROOT:
        return PowerResult.real(-_pow(-base, exponent))
    if policy is BranchPolicy.RESTRICTED_DOMAIN:
        return PowerResult.undefined()
    # Principal branch: exp(y * (log|x| + i*pi)).
    mag = _pow(-base, exponent)
    ang = math.pi * exponent
    return PowerResult.from_complex(mag * math.cos(ang), mag * math.sin(ang))


def cos_argument(angle_abs: float, q: float) -> CosArgument:
    """Map an absolute argument ``a`` to ``(a - pi) / (2 - q)``.

    The result is the angle fed to the cosine inside the stability-domain
    radius bound; its quadrant decides whether that cosine (and hence the
    power base) is negative.  Quadrant III means the value lies below
    ``-pi/2``, which happens exactly when ``a < q*pi/2``.

    ``angle_abs`` must lie in ``[0, pi]``; the closed right endpoint covers
    points on the negative real axis.
    """
    angle_abs = float(angle_abs)
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise ValueError(f"order q must lie in (0, 1], got {q}")
    if not 0.0 <= angle_abs <= math.pi:
        raise ValueError(f"angle_abs must lie in [0, pi], got {angle_abs}")
    value = (angle_abs - math.pi) / (2.0 - q)
    if abs(value + math.pi / 2.0) <= QUADRANT_TOL:
        tag = QuadrantTag.BOUNDARY
    elif value < -math.pi / 2.0:
        tag = QuadrantTag.QUADRANT_III
    else:
        tag = QuadrantTag.QUADRANT_IV
    return CosArgument(value, tag)


@dataclass(frozen=True)
class KernelCoefficients:
    """Memory-kernel weights ``b[j] = Gamma(j+q) / (Gamma(q) * Gamma(j+1))``.

    Immutable after construction; shared read-only across workers.
    """

    q: float
    b: np.ndarray

    def __post_init__(self) -> None:
        self.b.setflags(write=False)

    def __len__(self) -> int:
        return self.b.size


def kernel_coefficients(q: float, n: int) -> KernelCoefficients:
    """First ``n`` memory weights of order ``q``, by multiplicative recurrence.

    The recurrence ``b[j] = b[j-1] * (j - 1 + q) / j`` avoids evaluating the
    gamma function at large arguments, which would overflow doubles near 170.
    """
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise ValueError(f"order q must lie in (0, 1], got {q}")
    if n < 1:
        raise ValueError(f"need at least one coefficient, got n={n}")
    b = np.empty(n, dtype=np.float64)
    b[0] = 1.0
    if n > 1:
        j = np.arange(1.0, n)
        b[1:] = np.cumprod((j - 1.0 + q) / j)
    return KernelCoefficients(q=q, b=b)
