"""Nested polar grids used to estimate suprema over the disk.

A grid is a family of circles ``|z| = 1 - 2**-j`` (``j = 0 .. levels``) sampled
at ``angles`` equally spaced arguments starting at 0.  Every supremum is
reported together with the value on the next-coarser nested grid (one dyadic
level fewer, every other angle) so callers can judge convergence.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    levels: int = 24
    angles: int = 1024

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("grid needs at least one dyadic level")
        if self.angles < 1:
            raise ValueError("grid needs at least one angle")

    def dyadic_radii(self, start: int = 0) -> np.ndarray:
        j = np.arange(start, self.levels + 1, dtype=float)
        return 1.0 - 2.0 ** -j

    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles) / self.angles

    def coarse_angle_slice(self) -> slice:
        return slice(None, None, 2) if self.angles % 2 == 0 and self.angles > 1 else slice(None)

    def to_dict(self) -> dict:
        return {"max_dyadic_level": self.levels, "angles": self.angles}

    def replace(self, **kw) -> "GridSpec":
        return dataclasses.replace(self, **kw)


@dataclass(frozen=True)
class GridSup:
    """Grid estimate of a supremum with its attaining point."""

    value: float
    point: complex
    coarse_value: float

    @property
    def radius(self) -> float:
        return abs(self.point)

    @property
    def gap(self) -> float:
        return abs(self.value - self.coarse_value)


def polar_points(radii, thetas) -> np.ndarray:
    """Points laid out as ``(angle, radius)``; row-major order is angle first."""
    radii = np.asarray(radii, dtype=float)
    rot = np.exp(1j * np.asarray(thetas, dtype=float))
    rot[0] = 1.0
    return rot[:, None] * radii[None, :]


def grid_max(values: np.ndarray, points: np.ndarray, coarse_cols, angle_slice=slice(None)) -> GridSup:
    """Maximise ``values`` (same layout as ``points``).

    Ties go to the smallest angle, then the smallest radius, because
    ``argmax`` returns the first hit in row-major order and radii are sorted.
    ``coarse_cols`` selects the radius columns that make up the coarse grid.
    """
    values = np.asarray(values, dtype=float)
    top = values.max()
    # rounding in r * exp(i theta) perturbs radial values; treat near-equal as ties
    idx = int(np.argmax(values >= top - TIE_RTOL * abs(top)))
    a, r = np.unravel_index(idx, values.shape)
    coarse = values[angle_slice][:, coarse_cols]
    coarse_value = float(coarse.max()) if coarse.size else float(values[a, r])
    return GridSup(float(top), complex(points[a, r]), coarse_value)
