import copy
import json
import math

import numpy as np
import pytest

from kirchhoff_track.cli import main
from kirchhoff_track.errors import ConfigError, IngestError
from kirchhoff_track.forward import Scene, Trajectory
from kirchhoff_track.geometry import uniform_circular_array
from kirchhoff_track.scenario import (PRESETS, default_scenario, default_scenario_dict, load_scenario,
                                      preset_scatterer, run_tracking, scenario_from_dict, scenario_with,
                                      sweep_antennas)


def small_dict(**changes):
    d = default_scenario_dict()
    d["grid"] = {"roi_radius_m": 0.085, "step_m": 0.0034}
    d["frames"] = {"start_s": 0.0, "stop_s": 2.0, "interval_s": 0.5}
    d.update(changes)
    return d


def write(tmp_path, d, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


class TestScenario:
    def test_default(self):
        sc = default_scenario()
        assert sc.array.n == 16 and sc.array.radius_m == 0.09
        assert sc.grid.roi_radius_m == 0.085
        assert sc.medium.frequency_hz == 925e6 and sc.medium.rel_permittivity == 78.0
        assert sc.medium.conductivity_s_per_m == 0.2
        assert len(sc.times) == 31 and sc.frame_interval == 0.5
        (s,) = sc.scene.scatterers
        assert s.is_pec and s.radius_m == pytest.approx(0.00655 / 2)

    def test_presets(self):
        assert {k: 2 * v["radius_m"] for k, v in PRESETS.items()} == pytest.approx(
            {"D1": 0.020, "D2": 0.0064, "D3": 0.00655, "D4": 0.0064})
        assert PRESETS["D1"]["rel_permittivity"] == 3.0 and PRESETS["D4"]["rel_permittivity"] == 2.5
        assert math.isinf(PRESETS["D2"]["conductivity_s_per_m"])
        with pytest.raises(ConfigError):
            preset_scatterer("D9", Trajectory.static((0, 0)))

    def test_tracker_defaults(self):
        sc = default_scenario()
        min_sep, gate = sc.tracker.resolved(sc.medium.wavelength, sc.frame_interval)
        assert min_sep == pytest.approx(sc.medium.wavelength / 2)
        assert gate == pytest.approx(3 * 0.5 * 0.05)

    @pytest.mark.parametrize("mutate", [
        lambda d: d.pop("medium"),
        lambda d: d.update(extra=1),
        lambda d: d["array"].update(n_antennas=1),
        lambda d: d["medium"].update(frequency_hz=-1),
        lambda d: d["scene"]["scatterers"][0].update(preset="D7"),
        lambda d: d["array"].update(angles_rad=[0.0, 1.0]),
        lambda d: d.update(frames={"times_s": [1.0, 0.5]}),
        lambda d: d["scene"]["scatterers"][0].update(trajectory=[[1.0, 0, 0], [0.5, 0, 0]]),
        lambda d: d["scene"]["scatterers"].append({"trajectory": [[0, 0, 0]]}),
    ])
    def test_invalid(self, mutate):
        d = copy.deepcopy(default_scenario_dict())
        mutate(d)
        with pytest.raises(ConfigError):
            scenario_from_dict(d)

    def test_explicit_fields(self):
        d = small_dict()
        d["array"] = {"n_antennas": 3, "radius_m": 0.09, "angles_rad": [0.0, 2.0, 4.0]}
        d["scene"]["scatterers"] = [{"radius_m": 0.004, "conductivity_s_per_m": "infinite",
                                     "contrast_override": [0.5, -0.1], "trajectory": [[0, 0, 0]]}]
        d["frames"] = {"times_s": [0.0, 0.25]}
        sc = scenario_from_dict(d)
        assert np.allclose(sc.array.angles, [0.0, 2.0, 4.0])
        assert sc.scene.scatterers[0].contrast_override == 0.5 - 0.1j
        assert sc.times == (0.0, 0.25)

    def test_load_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / "missing.json")
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError):
            load_scenario(p)


class TestRunTracking:
    def test_static_single(self):
        d = small_dict(noise={"snr_db": None, "seed": 0})
        d["scene"]["scatterers"][0]["trajectory"] = [[0.0, 0.02, -0.01]]
        res = run_tracking(scenario_from_dict(d))
        assert len(res.frames) == 5
        assert len(res.tracks) == 1 and len(res.tracks[0].samples) == 5
        assert all(m.n_peaks == 1 for m in res.metrics)
        sc = scenario_from_dict(d)
        assert max(m.argmax_err_m for m in res.metrics) <= sc.medium.wavelength / 4

    def test_empty_scene(self):
        d = small_dict(noise={"snr_db": None, "seed": 0})
        d["scene"]["scatterers"] = []
        res = run_tracking(scenario_from_dict(d))
        assert res.tracks == [] and res.truth == {}
        assert all(math.isnan(m.argmax_err_m) and m.n_peaks == 0 for m in res.metrics)

    def test_frame_array_mismatch(self):
        sc = scenario_from_dict(small_dict())
        other = scenario_with(sc, array=uniform_circular_array(8, 0.09))
        with pytest.raises(IngestError):
            run_tracking(sc, other.synthesize())

    def test_causal(self):
        sc = scenario_from_dict(small_dict())
        frames = sc.synthesize()
        full = run_tracking(sc, frames)
        part = run_tracking(sc, frames[:3])
        for a, b in zip(part.tracks, full.tracks):
            assert a.samples == [s for s in b.samples if s[0] <= frames[2].time_s]

    def test_deterministic(self):
        sc = scenario_from_dict(small_dict())
        a, b = run_tracking(sc), run_tracking(sc)
        assert [t.samples for t in a.tracks] == [t.samples for t in b.tracks]

    def test_sweep(self):
        sc = scenario_from_dict(small_dict())
        rows = sweep_antennas(sc, [8, 16])
        assert [r.n_antennas for r in rows] == [8, 16]
        assert all(0 <= r.mean_offtarget <= r.max_offtarget <= 1 for r in rows)
        with pytest.raises(ConfigError):
            sweep_antennas(scenario_with(sc, scene=Scene((), sc.medium)), [8])


class TestCli:
    def test_simulate_track_image(self, tmp_path):
        s = write(tmp_path, small_dict())
        f = tmp_path / "f.csv"
        assert main(["simulate", "--scenario", s, "--out", str(f)]) == 0
        assert f.read_text().startswith("# frames v1, N=16\n")
        t, m = tmp_path / "t.csv", tmp_path / "m.csv"
        assert main(["track", "--scenario", s, "--frames", str(f), "--tracks", str(t), "--metrics", str(m)]) == 0
        assert t.read_text().splitlines()[0] == "t,track_id,x,y,value"
        assert m.read_text().splitlines()[0] == "frame,argmax_err_m,n_peaks"
        assert len(m.read_text().splitlines()) == 6
        out = tmp_path / "maps"
        assert main(["image", "--scenario", s, "--frames", str(f), "--out-dir", str(out), "--pgm"]) == 0
        assert len(list(out.glob("*.csv"))) == 5 and len(list(out.glob("*.pgm"))) == 5

    def test_track_without_frames_file(self, tmp_path):
        s = write(tmp_path, small_dict())
        assert main(["track", "--scenario", s, "--tracks", str(tmp_path / "t.csv")]) == 0

    def test_oracle(self, tmp_path, capsys):
        d = small_dict()
        d["medium"]["conductivity_s_per_m"] = 0.0
        out = tmp_path / "o.csv"
        assert main(["oracle", "--scenario", write(tmp_path, d), "--out", str(out), "--points-per-side", "21"]) == 0
        rows = out.read_text().splitlines()
        assert rows[0] == "x,y,engine_value,oracle_value,rel_err"
        assert max(float(r.split(",")[4]) for r in rows[1:]) < 1e-9
        assert "max_rel_err=" in capsys.readouterr().out

    def test_sweep(self, tmp_path):
        out = tmp_path / "sw.csv"
        assert main(["sweep", "--scenario", write(tmp_path, small_dict()), "--n-list", "6,12", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n_antennas,n_frames,mean_offtarget_fraction,max_offtarget_fraction"
        assert [ln.split(",")[0] for ln in lines[1:]] == ["6", "12"]

    def test_default_scenario_round_trip(self, tmp_path):
        out = tmp_path / "d.json"
        assert main(["default-scenario", "--out", str(out)]) == 0
        a, b = load_scenario(out), default_scenario()
        assert a.times == b.times and a.scene == b.scene and a.tracker == b.tracker
        assert np.array_equal(a.array.positions, b.array.positions)
        assert np.array_equal(a.grid.points, b.grid.points)

    def test_config_error_exit(self, tmp_path, capsys):
        d = small_dict()
        d["array"]["n_antennas"] = 1
        assert main(["simulate", "--scenario", write(tmp_path, d), "--out", str(tmp_path / "x")]) == 2
        assert "config error" in capsys.readouterr().err
        assert main(["track", "--frames", str(tmp_path / "nope.csv"), "--tracks", str(tmp_path / "t")]) == 2

    def test_ingest_mismatch_exit(self, tmp_path):
        d8 = small_dict()
        d8["array"]["n_antennas"] = 8
        f = tmp_path / "f.csv"
        assert main(["simulate", "--scenario", write(tmp_path, d8, "s8.json"), "--out", str(f)]) == 0
        assert main(["track", "--scenario", write(tmp_path, small_dict()), "--frames", str(f),
                     "--tracks", str(tmp_path / "t.csv")]) == 2

    def test_numeric_error_exit(self, tmp_path, capsys):
        d = small_dict()
        d["scene"] = {"quadrature": "point", "scatterers": [{"preset": "D1", "trajectory": [[0, 0.09, 0.0]]}]}
        assert main(["simulate", "--scenario", write(tmp_path, d), "--out", str(tmp_path / "x")]) == 3
        assert "numeric error" in capsys.readouterr().err


def test_offtarget_trend_over_antenna_counts():
    # no cutoff asserted: only the overall trend between a sparse and a dense ring
    sc = scenario_with(default_scenario(), times=(0.0, 7.5))
    rows = sweep_antennas(sc, list(range(4, 17)))
    for r in rows:
        print(f"N={r.n_antennas:2d} off-target {r.mean_offtarget:.3f}")
    assert rows[-1].mean_offtarget < rows[0].mean_offtarget
    assert all(0.0 <= r.mean_offtarget <= 1.0 for r in rows)
