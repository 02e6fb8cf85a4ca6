import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _helpers import plastic, scene_of
from kirchhoff_track.errors import IngestError
from kirchhoff_track.forward import ScatteringFrame, synthesize_frames
from kirchhoff_track.geometry import build_disk_grid
from kirchhoff_track.imaging import ImagingMap
from kirchhoff_track.io import (format_comparison, format_frames, format_map, format_metrics, format_tracks,
                                map_to_pgm, parse_frames, read_frames, write_frames)
from kirchhoff_track.oracle import ComparisonReport
from kirchhoff_track.scenario import FrameMetrics
from kirchhoff_track.tracking import Track


def frames_fixture(water, array16):
    return synthesize_frames(scene_of(water, plastic((0.01, 0.02))), array16, [0.0, 0.5, 1.0], 20.0, seed=1)


class TestFrames:
    def test_round_trip_exact(self, water, array16, tmp_path):
        frames = frames_fixture(water, array16)
        p = tmp_path / "f.csv"
        write_frames(p, frames)
        back = read_frames(p, n_antennas=16)
        assert [f.time_s for f in back] == [0.0, 0.5, 1.0]
        for a, b in zip(frames, back):
            assert np.array_equal(a.matrix, b.matrix)
        assert format_frames(back) == p.read_text()

    def test_header_and_rows(self, water, array16):
        text = format_frames(frames_fixture(water, array16)[:1])
        lines = text.splitlines()
        assert lines[0] == "# frames v1, N=16"
        assert len(lines) == 1 + 16 * 15
        assert lines[1].startswith("0,1,2,")

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=1e300, allow_nan=False, allow_infinity=False),
                    min_size=6, max_size=6))
    def test_arbitrary_values_round_trip(self, vals):
        m = np.zeros((3, 3), dtype=complex)
        m[~np.eye(3, dtype=bool)] = vals
        text = format_frames([ScatteringFrame(0.25, m)])
        assert np.array_equal(parse_frames(text)[0].matrix, m)

    def test_asymmetric_accepted(self):
        text = "# frames v1, N=2\n0,1,2,1,0\n0,2,1,5,-1\n"
        m = parse_frames(text)[0].matrix
        assert m[0, 1] == 1 and m[1, 0] == 5 - 1j

    @pytest.mark.parametrize("text", [
        "",
        "# frames v2, N=2\n0,1,2,1,0\n0,2,1,1,0\n",
        "# frames v1, N=2\n0,1,2,1\n",
        "# frames v1, N=2\n0,1,3,1,0\n0,2,1,1,0\n",
        "# frames v1, N=2\n0,1,1,1,0\n0,1,2,1,0\n0,2,1,1,0\n",
        "# frames v1, N=2\n0,1,2,1,0\n0,1,2,1,0\n0,2,1,1,0\n",
        "# frames v1, N=2\n0,1,2,1,0\n",
        "# frames v1, N=2\n1,1,2,1,0\n1,2,1,1,0\n0,1,2,1,0\n0,2,1,1,0\n",
        "# frames v1, N=2\n0,1,2,abc,0\n0,2,1,1,0\n",
        "# frames v1, N=2\n0,1,2,nan,0\n0,2,1,1,0\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(IngestError):
            parse_frames(text)

    def test_missing_allowed(self):
        m = parse_frames("# frames v1, N=2\n0,1,2,1,0\n", allow_missing=True)[0].matrix
        assert m[1, 0] == 0

    def test_array_mismatch(self, water, array16):
        text = format_frames(frames_fixture(water, array16))
        with pytest.raises(IngestError):
            parse_frames(text, n_antennas=8)


class TestMaps:
    def test_csv_normalised(self):
        grid = build_disk_grid(0.01, 0.005)
        vals = np.arange(grid.size, dtype=float) * 3
        lines = format_map(ImagingMap(grid, vals, 1.5)).splitlines()
        assert lines[0] == "# map v1, t=1.5"
        assert len(lines) == grid.size + 1
        assert float(lines[-1].split(",")[2]) == 1.0
        x, y, _ = map(float, lines[1].split(","))
        assert (x, y) == tuple(grid.points[0])

    def test_pgm(self):
        grid = build_disk_grid(0.01, 0.005)
        vals = grid.points[:, 1] + 1.0
        data = map_to_pgm(ImagingMap(grid, vals))
        header, body = data.split(b"\n255\n", 1)
        assert header == b"P5\n5 5"
        img = np.frombuffer(body, dtype=np.uint8).reshape(5, 5)
        assert img[0, 2] == 255 and img[4, 2] == 0
        assert img[0, 0] == 0  # corner lies outside the disk

    def test_tracks_metrics_comparison(self):
        tr = [Track(2, [(0.5, (0.1, 0.2), 3.0)]), Track(1, [(0.5, (0.0, 0.0), 1.0), (1.0, (0.0, 0.1), 1.0)])]
        assert format_tracks(tr).splitlines() == ["t,track_id,x,y,value", "0.5,1,0,0,1", "0.5,2,0.10000000000000001,0.20000000000000001,3", "1,1,0,0.10000000000000001,1"]
        assert format_metrics([FrameMetrics(0, math.nan, 0), FrameMetrics(1, 0.25, 2)]).splitlines() == [
            "frame,argmax_err_m,n_peaks", "0,,0", "1,0.25,2"]
        rep = ComparisonReport(np.array([[0.0, 1.0]]), np.array([2.0]), np.array([1.0]))
        assert format_comparison(rep).splitlines() == ["x,y,engine_value,oracle_value,rel_err", "0,1,2,1,1"]
