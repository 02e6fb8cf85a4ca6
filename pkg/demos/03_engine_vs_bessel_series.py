"""The imaging engine against its closed-form Bessel-series counterpart."""

import math

from kirchhoff_track import StructureParams, build_disk_grid, compare_engine_oracle, default_scenario
from kirchhoff_track.forward import Scatterer, Scene, Trajectory

sc = default_scenario()
k = sc.medium.wavenumber.value
target = Scatterer(Trajectory.static((0.02, 0.01)), radius_m=0.0032, rel_permittivity=3.0)
scene = Scene((target,), sc.medium, quadrature="point")
grid = build_disk_grid(0.085, 0.17 / 40)

for s_max in (20, 40, 60, math.ceil(abs(k) * 0.34) + 15):
    params = StructureParams.for_array(sc.array, k, 0.085, s_max)
    rep = compare_engine_oracle(scene, sc.array, grid, params=params)
    print(f"S = {s_max:3d}: max relative difference {rep.max_rel_err:.2e} over {len(rep.points)} points")
