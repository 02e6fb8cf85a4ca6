"""Peak extraction and greedy nearest-neighbour track association."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigError, MetricError
from .imaging import ImagingMap

ACTIVE, COASTING, DEAD = "active", "coasting", "dead"


@dataclass(frozen=True)
class Peak:
    position: tuple
    value: float
    index: int = -1


@dataclass
class Track:
    id: int
    samples: list = field(default_factory=list)
    status: str = ACTIVE
    missed: int = 0

    @property
    def last_position(self) -> np.ndarray:
        return np.asarray(self.samples[-1][1])

    @property
    def last_time(self) -> float:
        return self.samples[-1][0]

    @property
    def times(self) -> list:
        return [s[0] for s in self.samples]


def local_maxima(m: ImagingMap) -> np.ndarray:
    """Grid indices whose value is >= all 8 lattice neighbours and > 0."""
    grid = m.grid
    vals = np.asarray(m.values, dtype=float)
    ras = grid.raster(vals, fill=-np.inf)
    pad = np.pad(ras, 1, constant_values=-np.inf)
    n = grid.half_width
    r0, c0 = grid.iy + n + 1, grid.ix + n + 1
    ok = vals > 0
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                ok &= vals >= pad[r0 + dy, c0 + dx]
    return np.flatnonzero(ok)


def extract_peaks(m: ImagingMap, rel_threshold: float = 0.5, min_sep_m: float = 0.0) -> list:
    """Thresholded local maxima, greedily thinned to ``min_sep_m`` (strongest first).

    Ties in value are broken by grid order. An all-zero map has no peaks.
    """
    if not 0 < rel_threshold <= 1:
        raise ConfigError("rel_threshold must lie in (0, 1]")
    if m.values.size == 0:
        raise ConfigError("empty map")
    top = m.max
    if top <= 0:
        return []
    idx = local_maxima(m)
    idx = idx[m.values[idx] >= rel_threshold * top]
    order = sorted(idx.tolist(), key=lambda i: (-m.values[i], i))
    kept = []
    for i in order:
        p = m.grid.points[i]
        if all(np.hypot(*(p - m.grid.points[j])) >= min_sep_m for j in kept):
            kept.append(i)
    return [Peak((float(m.grid.points[i][0]), float(m.grid.points[i][1])), float(m.values[i]), int(i))
            for i in kept]


def associate(tracks: Sequence[Track], peaks: Sequence[Peak], t: float, gate_m: float,
              max_missed: int = 3) -> list:
    """One association step; returns updated copies of ``tracks`` plus new ones.

    Live tracks and peaks are paired greedily by increasing distance within
    ``gate_m``. Unmatched peaks start tracks; unmatched tracks coast and are
    marked dead after ``max_missed`` consecutive misses.
    """
    out = [replace(tr, samples=list(tr.samples)) for tr in tracks]
    live = [i for i, tr in enumerate(out) if tr.status != DEAD]
    for i in live:
        if out[i].samples and t <= out[i].last_time:
            raise ConfigError(f"track {out[i].id}: time {t} does not advance past {out[i].last_time}")
    pairs = []
    for i in live:
        last = out[i].last_position
        for j, pk in enumerate(peaks):
            d = float(np.hypot(*(np.asarray(pk.position) - last)))
            if d <= gate_m:
                pairs.append((d, out[i].id, i, j))
    pairs.sort()
    used_t, used_p = set(), set()
    for d, _, i, j in pairs:
        if i in used_t or j in used_p:
            continue
        used_t.add(i)
        used_p.add(j)
        tr = out[i]
        tr.samples.append((float(t), peaks[j].position, peaks[j].value))
        tr.status = ACTIVE
        tr.missed = 0
    for i in live:
        if i not in used_t:
            tr = out[i]
            tr.missed += 1
            tr.status = DEAD if tr.missed >= max_missed else COASTING
    next_id = max((tr.id for tr in out), default=0) + 1
    for j, pk in enumerate(peaks):
        if j not in used_p:
            out.append(Track(next_id, [(float(t), pk.position, pk.value)]))
            next_id += 1
    return out


def localization_rmse(tracks: Sequence[Track], ground_truth: Mapping, times: Optional[Sequence[float]] = None) -> float:
    """RMS position error over samples of greedily matched (track, truth) pairs.

    ``ground_truth`` maps an object name to ``{t: (x, y)}``. Pairs are formed
    one-to-one in order of increasing mean distance over shared times;
    ``times`` restricts which samples count.
    """
    allowed = None if times is None else {float(t) for t in times}
    cands = []
    for ti, tr in enumerate(tracks):
        for name, truth in ground_truth.items():
            errs = [float(np.hypot(pos[0] - truth[t][0], pos[1] - truth[t][1]))
                    for t, pos, _ in tr.samples
                    if t in truth and (allowed is None or t in allowed)]
            if errs:
                cands.append((float(np.mean(errs)), ti, name, errs))
    if not cands:
        raise MetricError("no track overlaps the ground truth in time")
    cands.sort(key=lambda c: (c[0], c[1], str(c[2])))
    used_t, used_g, errs = set(), set(), []
    for _, ti, name, e in cands:
        if ti in used_t or name in used_g:
            continue
        used_t.add(ti)
        used_g.add(name)
        errs.extend(e)
    return math.sqrt(float(np.mean(np.square(errs))))
