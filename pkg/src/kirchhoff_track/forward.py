"""Born-approximated scattering matrices for small moving disks.

Antenna indices in this module are 0-based; the frame CSV files use 1-based
indices (see :mod:`kirchhoff_track.io`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, SingularityError
from .geometry import AntennaArray
from .wavecore import BackgroundMedium, hankel1_0, hankel_farfield

FIELD_MODELS = ("exact", "farfield")
QUADRATURES = ("disk", "point")
DEFAULT_PEC_SIGMA = 10.0


@dataclass(frozen=True)
class Trajectory:
    """Waypoints ``(time_s, (x, y))`` with strictly increasing times."""

    waypoints: tuple

    def __post_init__(self):
        wps = tuple((float(t), (float(p[0]), float(p[1]))) for t, p in self.waypoints)
        if not wps:
            raise ConfigError("trajectory needs at least one waypoint")
        times = [t for t, _ in wps]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("trajectory times must be strictly increasing")
        object.__setattr__(self, "waypoints", wps)

    @classmethod
    def static(cls, point) -> "Trajectory":
        return cls(((0.0, point),))

    @classmethod
    def linear(cls, start, stop, t0: float, t1: float) -> "Trajectory":
        return cls(((t0, start), (t1, stop)))

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.waypoints])

    @property
    def points(self) -> np.ndarray:
        return np.array([p for _, p in self.waypoints])


def position_at(traj: Trajectory, t: float) -> np.ndarray:
    """Piecewise-linear position, clamped to the end waypoints outside the time span."""
    if not traj.waypoints:
        raise ConfigError("trajectory has no waypoints")
    times, pts = traj.times, traj.points
    return np.array([np.interp(t, times, pts[:, 0]), np.interp(t, times, pts[:, 1])])


@dataclass(frozen=True)
class Scatterer:
    """Disk of radius ``radius_m`` moving along ``trajectory``.

    ``conductivity_s_per_m`` may be ``math.inf`` for a perfect conductor, in
    which case the contrast uses ``pec_sigma_eff`` unless ``contrast_override``
    is given.
    """

    trajectory: Trajectory
    radius_m: float
    rel_permittivity: Optional[float] = None
    conductivity_s_per_m: float = 0.0
    contrast_override: Optional[complex] = None
    name: str = ""
    pec_sigma_eff: float = DEFAULT_PEC_SIGMA

    def __post_init__(self):
        if not self.radius_m > 0:
            raise ConfigError(f"scatterer {self.name!r}: radius must be > 0")
        if self.conductivity_s_per_m < 0:
            raise ConfigError(f"scatterer {self.name!r}: conductivity must be >= 0")

    @property
    def area(self) -> float:
        return math.pi * self.radius_m ** 2

    @property
    def is_pec(self) -> bool:
        return math.isinf(self.conductivity_s_per_m)

    def center(self, t: float) -> np.ndarray:
        return position_at(self.trajectory, t)


@dataclass(frozen=True)
class Scene:
    scatterers: tuple
    medium: BackgroundMedium
    quadrature: str = "disk"
    radial_cells: int = 8
    angular_cells: int = 16

    def __post_init__(self):
        object.__setattr__(self, "scatterers", tuple(self.scatterers))
        if self.quadrature not in QUADRATURES:
            raise ConfigError(f"quadrature must be one of {QUADRATURES}")
        if self.radial_cells < 1 or self.angular_cells < 1:
            raise ConfigError("quadrature cell counts must be >= 1")

    def with_scatterers(self, scatterers) -> "Scene":
        return Scene(tuple(scatterers), self.medium, self.quadrature, self.radial_cells, self.angular_cells)


@dataclass(frozen=True)
class ScatteringFrame:
    """One N x N scattering matrix at ``time_s``.

    With ``diagonal_known=False`` (the measurable case) the diagonal must be
    exactly zero; use :meth:`from_full` to blank it.
    """

    time_s: float
    matrix: np.ndarray = field(repr=False)
    diagonal_known: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError(f"frame matrix must be square, got shape {m.shape}")
        if not self.diagonal_known and np.any(np.diag(m) != 0):
            raise ConfigError("diagonal must be zero when diagonal_known is False")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "time_s", float(self.time_s))

    @classmethod
    def from_full(cls, time_s: float, full: np.ndarray) -> "ScatteringFrame":
        g = np.array(full, dtype=complex)
        np.fill_diagonal(g, 0)
        return cls(time_s, g, False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def contrast(s: Scatterer, medium: BackgroundMedium) -> complex:
    """(eps_m - eps_b)/eps_b + i (sigma_m - sigma_b)/(omega eps_b)."""
    if s.contrast_override is not None:
        return complex(s.contrast_override)
    w_eps = medium.omega * medium.eps_b
    if s.is_pec:
        return complex(-1.0, s.pec_sigma_eff / w_eps)
    if s.rel_permittivity is None:
        raise ConfigError(f"scatterer {s.name!r}: needs rel_permittivity or contrast_override")
    re = (s.rel_permittivity - medium.rel_permittivity) / medium.rel_permittivity
    im = (s.conductivity_s_per_m - medium.conductivity_s_per_m) / w_eps
    return complex(re, im)


def disk_nodes(center, radius: float, radial: int = 8, angular: int = 16):
    """Midpoint rule on a polar subdivision of a disk: (points (M, 2), areas (M,))."""
    edges = np.linspace(0.0, radius, radial + 1)
    rmid = 0.5 * (edges[:-1] + edges[1:])
    dtheta = 2.0 * math.pi / angular
    tmid = (np.arange(angular) + 0.5) * dtheta
    ring_area = 0.5 * (edges[1:] ** 2 - edges[:-1] ** 2) * dtheta
    rr, tt = np.meshgrid(rmid, tmid, indexing="ij")
    pts = np.column_stack([center[0] + (rr * np.cos(tt)).ravel(), center[1] + (rr * np.sin(tt)).ravel()])
    areas = np.repeat(ring_area, angular)
    return pts, areas


def quadrature_nodes(scene: Scene, t: float, quadrature: Optional[str] = None):
    """Nodes and complex weights (contrast x area) for every scatterer at time t."""
    quad = quadrature or scene.quadrature
    pts, wts = [], []
    for s in scene.scatterers:
        c = contrast(s, scene.medium)
        center = s.center(t)
        if quad == "point":
            p, a = center[None, :], np.array([s.area])
        else:
            p, a = disk_nodes(center, s.radius_m, scene.radial_cells, scene.angular_cells)
        pts.append(p)
        wts.append(c * a)
    if not pts:
        return np.zeros((0, 2)), np.zeros(0, dtype=complex)
    return np.concatenate(pts), np.concatenate(wts)


def incident_field(medium: BackgroundMedium, a, r):
    """(i/4) H0^(1)(k_b |a - r|); broadcasts over leading axes of a and r."""
    d = np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(r, dtype=float), axis=-1)
    if np.any(d == 0):
        raise SingularityError("incident field evaluated at its source point")
    return 0.25j * hankel1_0(medium.wavenumber.value * d)


def incident_fields(medium: BackgroundMedium, array: AntennaArray, points, field_model: str = "exact") -> np.ndarray:
    """Incident fields from every antenna at every point, shape (N, P)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if field_model == "exact":
        return incident_field(medium, array.positions[:, None, :], pts[None, :, :])
    if field_model == "farfield":
        return 0.25j * hankel_farfield(medium.wavenumber, array.radius_m,
                                       array.directions[:, None, :], pts[None, :, :])
    raise ConfigError(f"field_model must be one of {FIELD_MODELS}")


def born_prefactor(medium: BackgroundMedium) -> complex:
    """i k0^2 / (4 omega mu_b) with the lossless k0^2 = omega^2 eps_b mu_b."""
    return 1j * medium.k0_squared / (4.0 * medium.omega * medium.permeability_h_per_m)


def born_matrix(scene: Scene, array: AntennaArray, t: float, field_model: str = "exact") -> np.ndarray:
    """Full Born scattering matrix K(t), diagonal included."""
    pts, wts = quadrature_nodes(scene, t)
    n = array.n
    if wts.size == 0:
        return np.zeros((n, n), dtype=complex)
    e = incident_fields(scene.medium, array, pts, field_model)
    k = born_prefactor(scene.medium) * (e * wts) @ e.T
    # matmul rounding differs between (p, q) and (q, p); reciprocity is exact
    return 0.5 * (k + k.T)


def born_s_parameter(scene: Scene, array: AntennaArray, p: int, q: int, t: float,
                     field_model: str = "exact", full: bool = False) -> complex:
    """S_scat(p, q, t) under the Born approximation (0-based antenna indices).

    ``p == q`` is only meaningful for the full-matrix research path and
    requires ``full=True``.
    """
    n = array.n
    if not (0 <= p < n and 0 <= q < n):
        raise ConfigError(f"antenna index out of range 0..{n - 1}: ({p}, {q})")
    if p == q and not full:
        raise ConfigError("diagonal S-parameters are not measurable; pass full=True")
    pts, wts = quadrature_nodes(scene, t)
    if wts.size == 0:
        return 0j
    sub = AntennaArray(array.positions[[p, q]], array.radius_m, array.angles[[p, q]])
    e = incident_fields(scene.medium, sub, pts, field_model)
    return complex(born_prefactor(scene.medium) * np.sum(wts * e[0] * e[1]))


def frame_seed(seed: int, index: int) -> np.random.Generator:
    """Independent generator for frame ``index`` so frames can be built in any order."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def add_noise(matrix: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Circular complex Gaussian noise on the off-diagonal entries at a per-frame SNR.

    SNR is ||G||_F^2 / E||noise||_F^2 over the off-diagonal entries.
    """
    if not math.isfinite(snr_db):
        raise ConfigError(f"noise SNR must be finite, got {snr_db}")
    n = matrix.shape[0]
    off = ~np.eye(n, dtype=bool)
    power = np.sum(np.abs(matrix[off]) ** 2)
    sigma = math.sqrt(power / (10.0 ** (snr_db / 10.0) * off.sum()))
    noise = sigma * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    out = matrix + np.where(off, noise, 0)
    return out


def synthesize_frames(scene: Scene, array: AntennaArray, times: Sequence[float],
                      noise_snr_db: Optional[float] = None, field_model: str = "exact",
                      seed: int = 0, full: bool = False) -> list:
    """Zero-diagonal frames G(t) (or full K(t) with ``full=True``) at each time."""
    times = [float(t) for t in times]
    if not times:
        raise ConfigError("need at least one frame time")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigError("frame times must be strictly increasing")
    if noise_snr_db is not None and not math.isfinite(noise_snr_db):
        raise ConfigError(f"noise SNR must be finite, got {noise_snr_db}")
    if field_model not in FIELD_MODELS:
        raise ConfigError(f"field_model must be one of {FIELD_MODELS}")
    frames = []
    for i, t in enumerate(times):
        k = born_matrix(scene, array, t, field_model)
        if not full:
            np.fill_diagonal(k, 0)
        if noise_snr_db is not None:
            k = add_noise(k, noise_snr_db, frame_seed(seed, i))
        frames.append(ScatteringFrame(t, k, diagonal_known=full))
    return frames


@dataclass
class ObjectCheck:
    name: str
    size_value: Optional[float]
    size_limit: float
    size_ok: Optional[bool]
    note: str = ""


@dataclass
class SceneReport:
    objects: list
    low_loss_ratio: float
    low_loss_ok: bool
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.low_loss_ok and not self.warnings and all(o.size_ok is not False for o in self.objects)


def validate_scene(scene: Scene, medium: Optional[BackgroundMedium] = None,
                   times: Optional[Sequence[float]] = None,
                   roi_radius_m: Optional[float] = None) -> SceneReport:
    """Admissibility report; never raises and never blocks a simulation.

    Per object: max(sqrt(eps_m/eps_b) - 1, 0) * diam < wavelength/4 (``None``
    when there is no permittivity, e.g. perfect conductors). Optionally checks
    pairwise disjointness and ROI containment at ``times``.
    """
    medium = medium or scene.medium
    limit = medium.wavelength / 4.0
    objs = []
    for i, s in enumerate(scene.scatterers):
        name = s.name or f"D{i + 1}"
        if s.rel_permittivity is None or s.is_pec:
            objs.append(ObjectCheck(name, None, limit, None, "no permittivity; size condition not applicable"))
            continue
        factor = max(math.sqrt(s.rel_permittivity / medium.rel_permittivity) - 1.0, 0.0)
        val = factor * 2.0 * s.radius_m
        objs.append(ObjectCheck(name, val, limit, val < limit))
    warns = []
    for t in times or ():
        centers = [s.center(t) for s in scene.scatterers]
        for i in range(len(centers)):
            for j in range(i + 1, len(centers)):
                gap = np.linalg.norm(centers[i] - centers[j])
                if gap <= scene.scatterers[i].radius_m + scene.scatterers[j].radius_m:
                    warns.append(f"t={t:g}: objects {i + 1} and {j + 1} overlap")
            if roi_radius_m is not None and np.linalg.norm(centers[i]) + scene.scatterers[i].radius_m > roi_radius_m:
                warns.append(f"t={t:g}: object {i + 1} leaves the ROI")
    return SceneReport(objs, medium.low_loss_ratio, medium.low_loss_ok, warns)
