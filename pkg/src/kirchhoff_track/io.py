"""Text formats: frame CSV, heatmap CSV/PGM, tracks, metrics, oracle report.

Frame files::

    # frames v1, N=16
    0,1,2,1.2345678901234567e-05,-3.4567890123456789e-06
    ...

one row ``t,p,q,re,im`` per off-diagonal entry, antenna indices 1-based,
numbers written with 17 significant digits so a read/write cycle is exact.
"""

from __future__ import annotations

import math
import re
from collections import OrderedDict
from pathlib import Path

import numpy as np

from .errors import IngestError
from .forward import ScatteringFrame
from .imaging import ImagingMap

_FRAMES_HEADER = re.compile(r"^#\s*frames\s+v1\s*,\s*N\s*=\s*(\d+)\s*$")


def fmt(x: float) -> str:
    return "%.17g" % x


def format_frames(frames) -> str:
    frames = list(frames)
    if not frames:
        raise IngestError("no frames to write")
    n = frames[0].n
    lines = [f"# frames v1, N={n}"]
    for fr in frames:
        if fr.n != n:
            raise IngestError("all frames must have the same size")
        t = fmt(fr.time_s)
        m = fr.matrix
        for p in range(n):
            for q in range(n):
                if p != q:
                    v = m[p, q]
                    lines.append(f"{t},{p + 1},{q + 1},{fmt(v.real)},{fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def write_frames(path, frames) -> None:
    Path(path).write_text(format_frames(frames))


def parse_frames(text: str, n_antennas=None, allow_missing: bool = False) -> list:
    """Parse frame CSV text. Entries need not be symmetric.

    Missing off-diagonal entries are an error unless ``allow_missing`` (then
    they read as 0). Diagonal rows are rejected: the format carries only the
    measurable entries.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise IngestError("empty frame file")
    m = _FRAMES_HEADER.match(lines[0])
    if not m:
        raise IngestError(f"bad frame header: {lines[0]!r}")
    n = int(m.group(1))
    if n_antennas is not None and n != n_antennas:
        raise IngestError(f"frame file has N={n} but the array has {n_antennas} antennas")
    mats = OrderedDict()
    seen = OrderedDict()
    for lineno, ln in enumerate(lines[1:], start=2):
        if ln.startswith("#"):
            continue
        parts = ln.split(",")
        if len(parts) != 5:
            raise IngestError(f"line {lineno}: expected t,p,q,re,im")
        try:
            t = float(parts[0])
            p, q = int(parts[1]), int(parts[2])
            val = complex(float(parts[3]), float(parts[4]))
        except ValueError as exc:
            raise IngestError(f"line {lineno}: {exc}") from None
        if not (1 <= p <= n and 1 <= q <= n):
            raise IngestError(f"line {lineno}: antenna index out of range 1..{n}")
        if p == q:
            raise IngestError(f"line {lineno}: diagonal entries are not part of the format")
        if not (math.isfinite(t) and math.isfinite(val.real) and math.isfinite(val.imag)):
            raise IngestError(f"line {lineno}: non-finite value")
        if t not in mats:
            mats[t] = np.zeros((n, n), dtype=complex)
            seen[t] = np.zeros((n, n), dtype=bool)
        if seen[t][p - 1, q - 1]:
            raise IngestError(f"line {lineno}: duplicate entry ({p},{q}) at t={t}")
        mats[t][p - 1, q - 1] = val
        seen[t][p - 1, q - 1] = True
    times = list(mats)
    if any(b <= a for a, b in zip(times, times[1:])):
        raise IngestError("frame times must be strictly increasing")
    expected = ~np.eye(n, dtype=bool)
    for t in times:
        if not allow_missing and not np.array_equal(seen[t], expected):
            raise IngestError(f"frame t={t} is missing {int((expected & ~seen[t]).sum())} entries")
    return [ScatteringFrame(t, mats[t]) for t in times]


def read_frames(path, n_antennas=None, allow_missing: bool = False) -> list:
    return parse_frames(Path(path).read_text(), n_antennas, allow_missing)


def format_map(m: ImagingMap, normalize: bool = True) -> str:
    """Heatmap CSV, ``x,y,value`` in grid order; values scaled so the max is 1."""
    vals = m.values
    if normalize and m.max > 0:
        vals = vals / m.max
    lines = [f"# map v1, t={fmt(m.time_s)}"]
    for (x, y), v in zip(m.grid.points, vals):
        lines.append(f"{fmt(x)},{fmt(y)},{fmt(v)}")
    return "\n".join(lines) + "\n"


def write_map_csv(path, m: ImagingMap, normalize: bool = True) -> None:
    Path(path).write_text(format_map(m, normalize))


def map_to_pgm(m: ImagingMap) -> bytes:
    """8-bit binary PGM; min-max normalised over the ROI, pixels outside the disk are 0.

    The top image row is the largest y.
    """
    vals = np.asarray(m.values, dtype=float)
    lo, hi = vals.min(), vals.max()
    scaled = np.zeros_like(vals) if hi <= lo else (vals - lo) / (hi - lo)
    pix = np.round(scaled * 255.0).astype(np.uint8)
    img = m.grid.raster(pix, fill=np.uint8(0)).astype(np.uint8)[::-1]
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def write_map_pgm(path, m: ImagingMap) -> None:
    Path(path).write_bytes(map_to_pgm(m))


def format_tracks(tracks) -> str:
    rows = []
    for tr in tracks:
        for t, pos, val in tr.samples:
            rows.append((t, tr.id, pos[0], pos[1], val))
    rows.sort(key=lambda r: (r[0], r[1]))
    lines = ["t,track_id,x,y,value"]
    lines += [f"{fmt(t)},{i},{fmt(x)},{fmt(y)},{fmt(v)}" for t, i, x, y, v in rows]
    return "\n".join(lines) + "\n"


def write_tracks(path, tracks) -> None:
    Path(path).write_text(format_tracks(tracks))


def format_metrics(metrics) -> str:
    lines = ["frame,argmax_err_m,n_peaks"]
    for row in metrics:
        err = "" if row.argmax_err_m is None or math.isnan(row.argmax_err_m) else fmt(row.argmax_err_m)
        lines.append(f"{row.frame},{err},{row.n_peaks}")
    return "\n".join(lines) + "\n"


def write_metrics(path, metrics) -> None:
    Path(path).write_text(format_metrics(metrics))


def format_comparison(report) -> str:
    lines = ["x,y,engine_value,oracle_value,rel_err"]
    for (x, y), e, o, r in zip(report.points, report.engine, report.oracle, report.rel_err):
        lines.append(f"{fmt(x)},{fmt(y)},{fmt(e)},{fmt(o)},{fmt(r)}")
    return "\n".join(lines) + "\n"


def write_comparison(path, report) -> None:
    Path(path).write_text(format_comparison(report))
