"""Two steel bars on perpendicular paths; frame-by-frame tracking and RMSE."""

from kirchhoff_track import default_scenario, localization_rmse, run_tracking
from kirchhoff_track.forward import Scene, Trajectory
from kirchhoff_track.scenario import preset_scatterer, scenario_with

sc = default_scenario()
a = preset_scatterer("D2", Trajectory.linear((-0.02, 0.0), (0.06, 0.0), 0.0, 15.0), name="A")
b = preset_scatterer("D2", Trajectory.linear((0.0, -0.06), (0.0, 0.02), 0.0, 15.0), name="B")
sc = scenario_with(sc, scene=Scene((a, b), sc.medium))

res = run_tracking(sc, keep_maps=False)
for tr in res.tracks:
    (t0, p0, _), (t1, p1, _) = tr.samples[0], tr.samples[-1]
    print(f"track {tr.id}: {len(tr.samples)} samples, ({p0[0]:+.3f},{p0[1]:+.3f}) @ {t0:.1f}s"
          f" -> ({p1[0]:+.3f},{p1[1]:+.3f}) @ {t1:.1f}s, {tr.status}")
print(f"RMSE {localization_rmse(res.tracks, res.truth) * 1e3:.2f} mm"
      f" (quarter wavelength {sc.medium.wavelength / 4 * 1e3:.2f} mm)")
