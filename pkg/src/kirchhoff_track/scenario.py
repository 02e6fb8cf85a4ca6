"""Scenario files, the per-frame tracking pipeline and the antenna-count sweep."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import jsonschema
import numpy as np

from .errors import ConfigError, IngestError
from .forward import FIELD_MODELS, Scatterer, Scene, Trajectory, synthesize_frames
from .geometry import AntennaArray, ImagingGrid, build_disk_grid, uniform_circular_array
from .imaging import ImagingMap, Imager
from .tracking import associate, extract_peaks
from .wavecore import MU0, BackgroundMedium

DEFAULT_INTERVAL = 0.5

# Object cross-sections of the bench experiment (diameters halved to radii).
PRESETS = {
    "D1": {"radius_m": 0.010, "rel_permittivity": 3.0, "conductivity_s_per_m": 0.0},
    "D2": {"radius_m": 0.0032, "rel_permittivity": None, "conductivity_s_per_m": math.inf},
    "D3": {"radius_m": 0.003275, "rel_permittivity": None, "conductivity_s_per_m": math.inf},
    "D4": {"radius_m": 0.0032, "rel_permittivity": 2.5, "conductivity_s_per_m": 0.0},
}


def preset_scatterer(preset: str, trajectory: Trajectory, name: Optional[str] = None, **overrides) -> Scatterer:
    if preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    kw = dict(PRESETS[preset])
    kw.update(overrides)
    return Scatterer(trajectory=trajectory, name=name or preset, **kw)


@dataclass(frozen=True)
class TrackerParams:
    rel_threshold: float = 0.5
    min_sep_m: Optional[float] = None
    gate_m: Optional[float] = None
    v_max_m_per_s: float = 0.05
    max_missed: int = 3

    def resolved(self, wavelength: float, interval: float):
        """(min_sep, gate) with defaults filled in."""
        min_sep = wavelength / 2.0 if self.min_sep_m is None else self.min_sep_m
        gate = 3.0 * interval * self.v_max_m_per_s if self.gate_m is None else self.gate_m
        return min_sep, gate


@dataclass(frozen=True)
class Scenario:
    medium: BackgroundMedium
    array: AntennaArray
    grid: ImagingGrid
    scene: Scene
    times: tuple
    noise_snr_db: Optional[float] = None
    seed: int = 0
    field_model: str = "exact"
    imaging_mode: str = "exact"
    form: str = "bilinear"
    workers: int = 1
    tracker: TrackerParams = field(default_factory=TrackerParams)

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if not times:
            raise ConfigError("scenario needs at least one frame time")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("frame times must be strictly increasing")
        if self.field_model not in FIELD_MODELS:
            raise ConfigError(f"field_model must be one of {FIELD_MODELS}")
        if self.scene.medium != self.medium:
            raise ConfigError("scene medium differs from scenario medium")
        object.__setattr__(self, "times", times)

    @property
    def frame_interval(self) -> float:
        if len(self.times) < 2:
            return DEFAULT_INTERVAL
        return float(np.median(np.diff(self.times)))

    def synthesize(self) -> list:
        return synthesize_frames(self.scene, self.array, self.times, self.noise_snr_db,
                                 self.field_model, self.seed)

    def imager(self, array: Optional[AntennaArray] = None) -> Imager:
        return Imager(self.grid, array or self.array, self.medium, self.imaging_mode, self.form, self.workers)


def _schema() -> dict:
    return json.loads(resources.files("kirchhoff_track").joinpath("data/scenario.schema.json").read_text())


def _frame_times(spec: dict) -> list:
    if "times_s" in spec:
        return [float(t) for t in spec["times_s"]]
    start = float(spec.get("start_s", 0.0))
    step = float(spec.get("interval_s", DEFAULT_INTERVAL))
    if "stop_s" not in spec:
        return [start]
    stop = float(spec["stop_s"])
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ConfigError("frames: stop_s precedes start_s")
    return [start + i * step for i in range(count)]


def _scatterer(d: dict, index: int) -> Scatterer:
    kw = dict(PRESETS[d["preset"]]) if "preset" in d else {}
    for key in ("radius_m", "rel_permittivity", "pec_sigma_eff"):
        if key in d:
            kw[key] = d[key]
    if "conductivity_s_per_m" in d:
        c = d["conductivity_s_per_m"]
        kw["conductivity_s_per_m"] = math.inf if c == "infinite" else float(c)
    if d.get("contrast_override") is not None:
        re_, im_ = d["contrast_override"]
        kw["contrast_override"] = complex(re_, im_)
    if "radius_m" not in kw:
        raise ConfigError(f"scatterer {index + 1}: radius_m or preset required")
    traj = Trajectory(tuple((w[0], (w[1], w[2])) for w in d["trajectory"]))
    name = d.get("name") or d.get("preset") or f"D{index + 1}"
    return Scatterer(trajectory=traj, name=name, **kw)


def scenario_from_dict(d: dict) -> Scenario:
    try:
        jsonschema.validate(d, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"scenario invalid at '{path}': {exc.message}") from None
    m = d["medium"]
    medium = BackgroundMedium(
        frequency_hz=m["frequency_hz"],
        rel_permittivity=m["rel_permittivity"],
        conductivity_s_per_m=m.get("conductivity_s_per_m", 0.0),
        permeability_h_per_m=m.get("permeability_h_per_m", MU0),
        conjugate_wavenumber=m.get("conjugate_wavenumber", False),
    )
    a = d["array"]
    if "angles_rad" in a:
        if len(a["angles_rad"]) != a["n_antennas"]:
            raise ConfigError("array: angles_rad length differs from n_antennas")
        array = AntennaArray.from_angles(a["angles_rad"], a["radius_m"])
    else:
        array = uniform_circular_array(a["n_antennas"], a["radius_m"], a.get("offset_rad", 0.0))
    g = d["grid"]
    grid = build_disk_grid(g["roi_radius_m"], g.get("step_m", 0.0017))
    s = d.get("scene", {})
    scene = Scene(
        tuple(_scatterer(x, i) for i, x in enumerate(s.get("scatterers", []))),
        medium,
        s.get("quadrature", "disk"),
        s.get("radial_cells", 8),
        s.get("angular_cells", 16),
    )
    noise = d.get("noise", {})
    img = d.get("imaging", {})
    tr = d.get("tracker", {})
    return Scenario(
        medium=medium,
        array=array,
        grid=grid,
        scene=scene,
        times=tuple(_frame_times(d.get("frames", {}))),
        noise_snr_db=noise.get("snr_db"),
        seed=noise.get("seed", 0),
        field_model=d.get("field_model", "exact"),
        imaging_mode=img.get("mode", "exact"),
        form=img.get("form", "bilinear"),
        workers=img.get("workers", 1),
        tracker=TrackerParams(**tr),
    )


def load_scenario(path) -> Scenario:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    return scenario_from_dict(d)


def default_scenario_dict() -> dict:
    return json.loads(resources.files("kirchhoff_track").joinpath("data/default_scenario.json").read_text())


def default_scenario() -> Scenario:
    return scenario_from_dict(default_scenario_dict())


def ground_truth(scene: Scene, times: Sequence[float]) -> dict:
    """{name: {t: (x, y)}} for every scatterer; names made unique if needed."""
    out = {}
    for i, s in enumerate(scene.scatterers):
        name = s.name or f"D{i + 1}"
        if name in out:
            name = f"{name}#{i + 1}"
        out[name] = {float(t): tuple(float(v) for v in s.center(t)) for t in times}
    return out


@dataclass
class FrameMetrics:
    frame: int
    argmax_err_m: float
    n_peaks: int


@dataclass
class TrackingResult:
    tracks: list
    maps: list
    metrics: list
    frames: list
    truth: dict


def run_tracking(scenario: Scenario, frames: Optional[list] = None, keep_maps: bool = True) -> TrackingResult:
    """Frame-by-frame: (synthesize or ingest) -> map -> peaks -> association.

    Frames are processed strictly in time order; the tracks after frame i
    depend only on frames 0..i. Truth comes from the scenario scene when it
    has scatterers.
    """
    if frames is None:
        frames = scenario.synthesize()
    for fr in frames:
        if fr.n != scenario.array.n:
            raise IngestError(f"frame at t={fr.time_s} has N={fr.n}, array has {scenario.array.n}")
    times = [fr.time_s for fr in frames]
    truth = ground_truth(scenario.scene, times) if scenario.scene.scatterers else {}
    imager = scenario.imager()
    min_sep, gate = scenario.tracker.resolved(scenario.medium.wavelength, scenario.frame_interval)
    tracks, maps, metrics = [], [], []
    for i, fr in enumerate(frames):
        m = imager.map(fr)
        peaks = extract_peaks(m, scenario.tracker.rel_threshold, min_sep)
        tracks = associate(tracks, peaks, fr.time_s, gate, scenario.tracker.max_missed)
        err = math.nan
        if truth and m.max > 0:
            am = m.argmax
            err = min(math.hypot(am[0] - tr[fr.time_s][0], am[1] - tr[fr.time_s][1]) for tr in truth.values())
        metrics.append(FrameMetrics(i, err, len(peaks)))
        if keep_maps:
            maps.append(m)
    return TrackingResult(tracks, maps, metrics, frames, truth)


def offtarget_fraction(m: ImagingMap, centers, radius_m: float) -> float:
    """Share of total map value lying outside disks of ``radius_m`` around ``centers``."""
    total = float(m.values.sum())
    if total <= 0:
        return 0.0
    pts = m.grid.points
    near = np.zeros(len(pts), dtype=bool)
    for c in centers:
        near |= np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1]) <= radius_m
    return float(m.values[~near].sum()) / total


@dataclass
class SweepRow:
    n_antennas: int
    n_frames: int
    mean_offtarget: float
    max_offtarget: float


def sweep_antennas(scenario: Scenario, n_list: Sequence[int]) -> list:
    """Off-target energy fraction (outside lambda/2 of every object) vs. antenna count."""
    if not scenario.scene.scatterers:
        raise ConfigError("sweep needs a scene with at least one scatterer")
    radius = scenario.medium.wavelength / 2.0
    rows = []
    for n in n_list:
        arr = uniform_circular_array(int(n), scenario.array.radius_m)
        frames = synthesize_frames(scenario.scene, arr, scenario.times, scenario.noise_snr_db,
                                   scenario.field_model, scenario.seed)
        imager = scenario.imager(arr)
        fr_vals = []
        for fr in frames:
            centers = [s.center(fr.time_s) for s in scenario.scene.scatterers]
            fr_vals.append(offtarget_fraction(imager.map(fr), centers, radius))
        rows.append(SweepRow(int(n), len(frames), float(np.mean(fr_vals)), float(np.max(fr_vals))))
    return rows


def scenario_with(scenario: Scenario, **changes) -> Scenario:
    """Copy with fields replaced; keeps the scene medium consistent."""
    d = copy.copy(scenario.__dict__)
    d.update(changes)
    return Scenario(**d)
