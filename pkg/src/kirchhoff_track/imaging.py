"""Steering vectors and the zero-diagonal Kirchhoff imaging function.

The imaging value at r is |conj(F(r))^T G conj(F(r))|, with the same
conjugated unit steering vector on both sides. ``form="sesquilinear"``
computes |conj(F)^T G F| instead, for comparison only.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, ShapeError
from .forward import ScatteringFrame, incident_fields
from .geometry import AntennaArray, ImagingGrid, validate_far_condition
from .wavecore import BackgroundMedium

MODES = ("exact", "farfield")
FORMS = ("bilinear", "sesquilinear")


@dataclass(frozen=True)
class SteeringVector:
    entries: np.ndarray
    mode: str = "exact"

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


@dataclass
class ImagingMap:
    grid: ImagingGrid
    values: np.ndarray = field(repr=False)
    time_s: float = 0.0

    def __post_init__(self):
        if self.values.shape != (self.grid.size,):
            raise ShapeError(f"map has {self.values.shape} values for {self.grid.size} grid points")

    @property
    def argmax(self) -> np.ndarray:
        return self.grid.points[int(np.argmax(self.values))]

    @property
    def max(self) -> float:
        return float(self.values.max()) if self.values.size else 0.0


def steering_matrix(array: AntennaArray, medium: BackgroundMedium, points, mode: str = "exact") -> np.ndarray:
    """Unit steering vectors F(r) for every point, shape (P, N).

    ``exact`` normalises the incident fields W(r); ``farfield`` uses the
    plane-wave phases exp(-i Re(k_b) theta_n . r) with magnitude 1/sqrt(N).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if mode == "exact":
        w = incident_fields(medium, array, pts, "exact").T
        return w / np.linalg.norm(w, axis=1, keepdims=True)
    if mode == "farfield":
        kr = medium.wavenumber.value.real
        phase = pts @ array.directions.T
        return np.exp(-1j * kr * phase) / math.sqrt(array.n)
    raise ConfigError(f"steering mode must be one of {MODES}")


def steering_vector(array: AntennaArray, medium: BackgroundMedium, r, mode: str = "exact") -> SteeringVector:
    return SteeringVector(steering_matrix(array, medium, np.asarray(r, dtype=float)[None, :], mode)[0], mode)


def _as_matrix(frame) -> np.ndarray:
    return frame.matrix if isinstance(frame, ScatteringFrame) else np.asarray(frame, dtype=complex)


def _entries(f) -> np.ndarray:
    return f.entries if isinstance(f, SteeringVector) else np.asarray(f, dtype=complex)


def _quadratic(m: np.ndarray, f: np.ndarray, form: str) -> complex:
    if m.ndim != 2 or m.shape != (f.size, f.size):
        raise ShapeError(f"frame shape {m.shape} does not match steering length {f.size}")
    if form not in FORMS:
        raise ConfigError(f"form must be one of {FORMS}")
    fb = f.conj()
    right = fb if form == "bilinear" else f
    return complex(fb @ m @ right)


def imaging_value(frame, f, form: str = "bilinear") -> float:
    """|conj(f)^T G conj(f)| for one steering vector."""
    return abs(_quadratic(_as_matrix(frame), _entries(f), form))


def imaging_value_full(frame, f, form: str = "bilinear") -> float:
    """Same quadratic form on a full matrix K whose diagonal is known."""
    if isinstance(frame, ScatteringFrame) and not frame.diagonal_known:
        raise ConfigError("imaging_value_full needs a frame with diagonal_known=True")
    return abs(_quadratic(_as_matrix(frame), _entries(f), form))


def _values(conj_steer: np.ndarray, m: np.ndarray, form: str) -> np.ndarray:
    right = conj_steer if form == "bilinear" else conj_steer.conj()
    return np.abs(np.einsum("pi,pi->p", conj_steer @ m, right))


class Imager:
    """Evaluates imaging maps on a fixed grid, caching the steering vectors.

    Steering vectors depend only on grid, array and medium, so a sequence of
    frames pays for them once. ``workers > 1`` splits the grid into chunks
    evaluated on a thread pool; each chunk writes a disjoint slice.
    """

    def __init__(self, grid: ImagingGrid, array: AntennaArray, medium: BackgroundMedium,
                 mode: str = "exact", form: str = "bilinear", workers: int = 1,
                 chunk_size: Optional[int] = None):
        if mode not in MODES:
            raise ConfigError(f"steering mode must be one of {MODES}")
        if form not in FORMS:
            raise ConfigError(f"form must be one of {FORMS}")
        self.grid = grid
        self.array = array
        self.medium = medium
        self.mode = mode
        self.form = form
        self.workers = max(1, int(workers))
        n = grid.size
        self.chunk_size = chunk_size or max(1, math.ceil(n / self.workers))
        self._conj_steer = None
        far = validate_far_condition(array, grid, medium.wavenumber)
        if not far.passed:
            warnings.warn(f"far-field condition fails: min |k||a_n - r| = {far.min_value:.3g} < 0.25",
                          stacklevel=2)

    def _slices(self):
        n = self.grid.size
        return [slice(i, min(i + self.chunk_size, n)) for i in range(0, n, self.chunk_size)]

    def _run(self, fn):
        slices = self._slices()
        if self.workers == 1 or len(slices) == 1:
            for sl in slices:
                fn(sl)
            return
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            list(pool.map(fn, slices))

    @property
    def conj_steering(self) -> np.ndarray:
        """conj(F(r)) for every grid point, shape (P, N)."""
        if self._conj_steer is None:
            out = np.empty((self.grid.size, self.array.n), dtype=complex)

            def fill(sl):
                out[sl] = steering_matrix(self.array, self.medium, self.grid.points[sl], self.mode).conj()

            self._run(fill)
            self._conj_steer = out
        return self._conj_steer

    def values(self, frame) -> np.ndarray:
        m = _as_matrix(frame)
        if m.shape != (self.array.n, self.array.n):
            raise ShapeError(f"frame shape {m.shape} does not match {self.array.n} antennas")
        if self._conj_steer is not None or self.workers == 1:
            return _values(self.conj_steering, m, self.form)
        # cold and parallel: steering and values computed chunk by chunk
        steer = np.empty((self.grid.size, self.array.n), dtype=complex)
        out = np.empty(self.grid.size)

        def work(sl):
            steer[sl] = steering_matrix(self.array, self.medium, self.grid.points[sl], self.mode).conj()
            out[sl] = _values(steer[sl], m, self.form)

        self._run(work)
        self._conj_steer = steer
        return out

    def map(self, frame) -> ImagingMap:
        t = frame.time_s if isinstance(frame, ScatteringFrame) else 0.0
        return ImagingMap(self.grid, self.values(frame), t)


def imaging_map(frame, grid: ImagingGrid, array: AntennaArray, medium: BackgroundMedium,
                mode: str = "exact", form: str = "bilinear", workers: int = 1) -> ImagingMap:
    """Imaging function over every grid point, in grid order."""
    return Imager(grid, array, medium, mode, form, workers).map(frame)
