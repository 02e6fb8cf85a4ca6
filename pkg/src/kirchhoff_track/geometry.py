"""Antenna ring, ROI lattice and the far-field admissibility check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .wavecore import as_complex

FAR_CONDITION_MIN = 0.25


@dataclass(frozen=True)
class AntennaArray:
    """Antennas on a circle of radius ``radius_m``.

    ``positions`` is an (N, 2) array; ``angles`` holds theta_n in [0, 2pi).
    Non-uniform arrays are allowed (see :meth:`from_angles`).
    """

    positions: np.ndarray
    radius_m: float
    angles: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        ang = np.asarray(self.angles, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] != ang.size:
            raise ConfigError("positions must be (N, 2) and match angles")
        if not self.radius_m > 0:
            raise ConfigError("array radius must be > 0")
        if np.any(np.abs(np.hypot(pos[:, 0], pos[:, 1]) - self.radius_m) > 1e-12 * self.radius_m):
            raise ConfigError("all antennas must lie on the circle |a_n| = R")
        pos.setflags(write=False)
        ang.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "angles", ang)

    @classmethod
    def from_angles(cls, angles, radius_m: float) -> "AntennaArray":
        ang = np.mod(np.asarray(angles, dtype=float), 2.0 * math.pi)
        ang = np.sort(ang)
        if ang.size < 2:
            raise ConfigError("need at least 2 antennas")
        if np.any(np.diff(ang) <= 0):
            raise ConfigError("antenna angles must be distinct")
        pos = radius_m * np.column_stack([np.cos(ang), np.sin(ang)])
        return cls(pos, float(radius_m), ang)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def directions(self) -> np.ndarray:
        """Unit vectors theta_n = a_n / R, shape (N, 2)."""
        return self.positions / self.radius_m

    def rotated(self, angle: float) -> "AntennaArray":
        return AntennaArray.from_angles(self.angles + angle, self.radius_m)


def uniform_circular_array(n_antennas: int, radius_m: float, offset_rad: float = 0.0) -> AntennaArray:
    """theta_n = offset + 2 pi (n - 1) / N, n = 1..N."""
    if int(n_antennas) != n_antennas or n_antennas < 2:
        raise ConfigError(f"n_antennas must be an integer >= 2, got {n_antennas}")
    if not radius_m > 0:
        raise ConfigError("array radius must be > 0")
    n = int(n_antennas)
    ang = offset_rad + 2.0 * math.pi * np.arange(n) / n
    if offset_rad == 0.0:
        pos = radius_m * np.column_stack([np.cos(ang), np.sin(ang)])
        return AntennaArray(pos, float(radius_m), ang)
    # angles are kept increasing in [0, 2pi), so a wrapping offset relabels antennas
    return AntennaArray.from_angles(ang, radius_m)


@dataclass(frozen=True)
class ImagingGrid:
    """Square lattice of spacing ``step_m`` clipped to the ROI disk.

    Points are ordered row-major: by lattice row ``iy`` then column ``ix``.
    """

    roi_radius_m: float
    step_m: float
    points: np.ndarray = field(repr=False)
    ix: np.ndarray = field(repr=False)
    iy: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def half_width(self) -> int:
        """Lattice index bound n: indices run over -n..n on both axes."""
        return int(max(np.abs(self.ix).max(), np.abs(self.iy).max()))

    def raster(self, values, fill=0.0) -> np.ndarray:
        """Scatter per-point ``values`` into a (2n+1, 2n+1) array indexed [iy + n, ix + n]."""
        n = self.half_width
        out = np.full((2 * n + 1, 2 * n + 1), fill, dtype=np.result_type(values, fill))
        out[self.iy + n, self.ix + n] = values
        return out


def build_disk_grid(roi_radius_m: float, step_m: float) -> ImagingGrid:
    if not step_m > 0:
        raise ConfigError("grid step must be > 0")
    if not roi_radius_m > 0 or step_m > roi_radius_m:
        raise ConfigError("need 0 < step <= roi radius")
    n = int(math.floor(roi_radius_m / step_m + 1e-9))
    idx = np.arange(-n, n + 1)
    iy, ix = np.meshgrid(idx, idx, indexing="ij")
    iy = iy.ravel()
    ix = ix.ravel()
    x = ix * step_m
    y = iy * step_m
    keep = x * x + y * y <= roi_radius_m * roi_radius_m * (1 + 1e-12)
    pts = np.column_stack([x[keep], y[keep]])
    # lattice points a hair outside from rounding are pulled onto the disk
    rad = np.hypot(pts[:, 0], pts[:, 1])
    over = rad > roi_radius_m
    pts[over] *= (roi_radius_m / rad[over])[:, None]
    ix, iy = ix[keep], iy[keep]
    for a in (pts, ix, iy):
        a.setflags(write=False)
    return ImagingGrid(float(roi_radius_m), float(step_m), pts, ix, iy)


@dataclass(frozen=True)
class FarConditionReport:
    min_value: float
    passed: bool


def validate_far_condition(array: AntennaArray, grid: ImagingGrid, k) -> FarConditionReport:
    """min over antennas and grid points of |k| |a_n - r|; passes when >= 0.25."""
    kmag = abs(as_complex(k))
    pts = grid.points if isinstance(grid, ImagingGrid) else np.atleast_2d(np.asarray(grid, dtype=float))
    diff = array.positions[:, None, :] - pts[None, :, :]
    dmin = float(np.sqrt((diff ** 2).sum(axis=-1)).min())
    val = kmag * dmin
    return FarConditionReport(val, val >= FAR_CONDITION_MIN)
