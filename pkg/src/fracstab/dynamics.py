"""Fractional difference integration and orbit diagnostics.

The integrator realizes the memory-convolution solution of a Caputo-type
forward difference system: each new state is the initial condition plus a
weighted sum of every past right-hand-side evaluation, the weights being the
normalized gamma-ratio kernel of the order.  The memory makes each trajectory
inherently sequential in time; independent trajectories parallelize freely
and may share one read-only :class:`~fracstab.numerics.KernelCoefficients`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .numerics import KernelCoefficients, kernel_coefficients

__all__ = [
    "LINEAR_ESCAPE_GUARD",
    "Trajectory",
    "OrbitFate",
    "OrbitVerdict",
    "DecayFit",
    "frac_orbit",
    "linear_orbit",
    "decay_exponent",
    "classify_orbit",
]

#: Overflow guard on the state norm of linear orbits: beyond this, growth is
#: treated as divergence rather than risking float overflow noise.
LINEAR_ESCAPE_GUARD = 1e12


@dataclass(frozen=True)
class Trajectory:
    """Finite orbit ``states[0..m]`` of a fractional difference system.

    ``escape_index`` is None for a full-length run; otherwise the orbit was
    truncated there because the state norm exceeded ``escape_radius`` (or the
    right-hand side stopped returning finite values).
    """

    q: float
    states: np.ndarray
    rhs_tag: str
    escape_index: Optional[int]
    escape_radius: float

    def __post_init__(self) -> None:
        self.states.setflags(write=False)

    def __len__(self) -> int:
        return self.states.shape[0]

    def norms(self) -> np.ndarray:
        if self.states.ndim == 1:
            return np.abs(self.states)
        return np.linalg.norm(self.states, axis=1)


class OrbitFate(enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class OrbitVerdict:
    fate: OrbitFate
    point: Optional[np.ndarray | complex] = None
    achieved_tol: Optional[float] = None
    escape_index: Optional[int] = None


@dataclass(frozen=True)
class DecayFit:
    """Least-squares line through (log n, log ||y(n)||) over an index window."""

    slope: float
    intercept: float
    window: tuple[int, int]
    residual: float


def _state_norm(state: np.ndarray) -> float:
    if state.ndim == 0:
        return abs(complex(state))
    return float(np.linalg.norm(state))


def frac_orbit(
    q: float,
    rhs: Callable,
    x0,
    n_steps: int,
    escape_radius: float = math.inf,
    rhs_tag: str = "custom",
    kernel: Optional[KernelCoefficients] = None,
) -> Trajectory:
    """Integrate ``x(n) = x(0) + sum_{j<n} b_j * rhs(x(n-1-j))`` for n_steps.

    Cost is O(n^2) state-size operations: the convolution over the full
    history is evaluated directly, with no FFT acceleration, so results are
    deterministic and independent of any blocking scheme.  The orbit is
    truncated at the first state whose norm exceeds ``escape_radius``;
    non-finite right-hand-side output truncates the same way.

    States may be real vectors or complex scalars; ``rhs`` must map a state
    to a state of the same shape.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not escape_radius > 0.0:
        raise ValueError("escape_radius must be positive")
    if kernel is None:
        kernel = kernel_coefficients(q, n_steps)
    elif kernel.q != q or len(kernel) < n_steps:
        raise ValueError("supplied kernel does not match the requested order/length")
    b_rev = kernel.b[:n_steps][::-1].copy()

    x0 = np.asarray(x0)
    f0 = np.asarray(rhs(x0))
    if f0.shape != x0.shape:
        raise ValueError("rhs must preserve the state shape")
    dtype = np.result_type(x0, f0, np.float64)
    states = np.empty((n_steps + 1,) + x0.shape, dtype=dtype)
    history = np.empty((n_steps,) + x0.shape, dtype=dtype)
    states[0] = x0

    escape_index: Optional[int] = None
    if not np.all(np.isfinite(states[0])) or _state_norm(states[0]) > escape_radius:
        return Trajectory(q=float(q), states=states[:1].copy(), rhs_tag=rhs_tag,
                          escape_index=0, escape_radius=escape_radius)

    last = 0
    for k in range(1, n_steps + 1):
        f_prev = np.asarray(rhs(states[k - 1]), dtype=dtype)
        if not np.all(np.isfinite(f_prev)):
            escape_index = k - 1
            break
        history[k - 1] = f_prev
        xk = states[0] + np.tensordot(b_rev[n_steps - k:], history[:k], axes=(0, 0))
        states[k] = xk
        last = k
        if not np.all(np.isfinite(xk)) or _state_norm(xk) > escape_radius:
            escape_index = k
            break

    if escape_index is not None:
        states = states[: last + 1].copy()
    return Trajectory(q=float(q), states=states, rhs_tag=rhs_tag,
                      escape_index=escape_index, escape_radius=escape_radius)


def linear_orbit(q: float, matrix, y0, n_steps: int) -> Trajectory:
    """Orbit of the linear system with right-hand side ``y -> A @ y``.

    The escape radius is the overflow guard: decaying and oscillating
    solutions run to full length, while genuinely unstable ones are reported
    as escaped instead of drowning in float overflow.
    """
    a = np.asarray(matrix, dtype=np.float64)
    y = np.asarray(y0, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if y.shape != (a.shape[0],):
        raise ValueError(f"y0 has shape {y.shape}, expected ({a.shape[0]},)")
    return frac_orbit(q, lambda v: a @ v, y, n_steps,
                      escape_radius=LINEAR_ESCAPE_GUARD, rhs_tag="linear")


def decay_exponent(traj: Trajectory, window: tuple[int, int]) -> DecayFit:
    """Fit ``log ||y(n)|| ~ slope * log n + intercept`` over ``window``.

    ``window = (lo, hi)`` is inclusive and must lie within ``[1, N]`` with at
    least 10 samples; the slope estimates the algebraic decay rate (about
    ``-q`` for stable linear systems).
    """
    lo, hi = int(window[0]), int(window[1])
    n_max = len(traj) - 1
    if not (1 <= lo < hi <= n_max):
        raise ValueError(f"window {window} must lie within [1, {n_max}]")
    if hi - lo + 1 < 10:
        raise ValueError("window must contain at least 10 samples")
    norms = traj.norms()[lo: hi + 1]
    if np.any(norms == 0.0):
        raise ValueError("zero state inside the fit window")
    log_n = np.log(np.arange(lo, hi + 1, dtype=np.float64))
    log_v = np.log(norms)
    slope, intercept = np.polyfit(log_n, log_v, 1)
    resid = log_v - (slope * log_n + intercept)
    rms = float(np.sqrt(np.mean(resid * resid)))
    return DecayFit(slope=float(slope), intercept=float(intercept), window=(lo, hi), residual=rms)


def classify_orbit(traj: Trajectory, conv_tol: float = 1e-3, tail: int = 10) -> OrbitVerdict:
    """Decide the fate of a finished orbit.

    Escaped trajectories are Diverged.  Otherwise the orbit is Converged when
    the last ``tail`` states all lie within ``conv_tol`` of their mean; the
    mean (not the final state) is reported as the limit point, damping the
    residual oscillation of fractional orbits.
    """
    if conv_tol <= 0.0:
        raise ValueError("conv_tol must be positive")
    if traj.escape_index is not None:
        return OrbitVerdict(fate=OrbitFate.DIVERGED, escape_index=traj.escape_index)
    if tail < 1 or tail > len(traj):
        raise ValueError(f"tail must lie in [1, {len(traj)}]")
    tail_states = traj.states[-tail:]
    mean = tail_states.mean(axis=0)
    if tail_states.ndim == 1:
        dists = np.abs(tail_states - mean)
        point = complex(mean)
    else:
        dists = np.linalg.norm(tail_states - mean, axis=1)
        point = mean
    achieved = float(dists.max())
    if achieved <= conv_tol:
        return OrbitVerdict(fate=OrbitFate.CONVERGED, point=point, achieved_tol=achieved)
    return OrbitVerdict(fate=OrbitFate.UNDECIDED)
