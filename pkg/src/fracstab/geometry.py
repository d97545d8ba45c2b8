"""Plane-geometry plumbing: rectangular windows, pixel grids, polygon tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Window", "point_in_polygon"]


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle ``[x0, x1] x [y0, y1]`` in the complex plane."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self) -> None:
        for v in (self.x0, self.x1, self.y0, self.y1):
            if not math.isfinite(v):
                raise ValueError("window bounds must be finite")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("window must satisfy x1 > x0 and y1 > y0")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def x_centers(self, nx: int) -> np.ndarray:
        """Cell-center abscissas of an ``nx``-column grid."""
        dx = self.width / nx
        return self.x0 + dx * (np.arange(nx) + 0.5)

    def y_centers(self, ny: int) -> np.ndarray:
        """Cell-center ordinates, increasing with the row index."""
        dy = self.height / ny
        return self.y0 + dy * (np.arange(ny) + 0.5)

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def pixel_of(self, x: float, y: float, width: int, height: int) -> tuple[int, int]:
        """(row, column) of the cell whose center grid covers ``(x, y)``."""
        if not self.contains(x, y):
            raise ValueError(f"point ({x}, {y}) lies outside the window")
        ix = min(int((x - self.x0) / self.width * width), width - 1)
        iy = min(int((y - self.y0) / self.height * height), height - 1)
        return iy, ix


def point_in_polygon(px: np.ndarray, py: np.ndarray, vx: np.ndarray, vy: np.ndarray) -> np.ndarray:
    """Even-odd (ray casting) containment test, vectorized over query points.

    The polygon is closed implicitly (last vertex joins the first); horizontal
    edges contribute nothing under the strict-above convention used here.
    """
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    vx = np.asarray(vx, dtype=np.float64)
    vy = np.asarray(vy, dtype=np.float64)
    if vx.size != vy.size or vx.size < 3:
        raise ValueError("polygon needs at least three vertices")
    inside = np.zeros(px.shape, dtype=bool)
    j = vx.size - 1
    for i in range(vx.size):
        yi, yj = vy[i], vy[j]
        if yi != yj:
            crosses = (yi > py) != (yj > py)
            xi, xj = vx[i], vx[j]
            x_cross = (xj - xi) * (py - yi) / (yj - yi) + xi
            inside ^= crosses & (px < x_cross)
        j = i
    return inside
