"""How much map energy lands away from the objects as the antenna count grows."""

from kirchhoff_track import default_scenario, sweep_antennas

sc = default_scenario()
sc = type(sc)(**{**sc.__dict__, "times": sc.times[::6]})
print(" N   mean off-target   max off-target")
for row in sweep_antennas(sc, [6, 8, 12, 16, 24, 32]):
    print(f"{row.n_antennas:2d}   {row.mean_offtarget:14.3f}   {row.max_offtarget:14.3f}")
