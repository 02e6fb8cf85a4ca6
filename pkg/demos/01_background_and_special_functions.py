"""Background wavenumber in lossy water and a look at the Bessel/Hankel kernels."""

import numpy as np

from kirchhoff_track import BackgroundMedium, bessel_j, hankel1_0, hankel_farfield

water = BackgroundMedium(frequency_hz=925e6, rel_permittivity=78.0, conductivity_s_per_m=0.2)
k = water.wavenumber.value
print(f"k_b = {k.real:.4f} {k.imag:+.4f}i  1/m   |k_b| = {abs(k):.2f}   wavelength = {water.wavelength * 1e3:.2f} mm")
print(f"field decays by exp(-Im k * 0.09) = {np.exp(-k.imag * 0.09):.3f} across the array radius")

print("\n  x      J0(x)            J3(x)")
for x in (0.5, 2.404825557695773, 10.0, 40.0):
    print(f"{x:6.2f}  {bessel_j(0, x).real: .3e}  {bessel_j(3, x).real: .3e}")

print("\nAntenna at 90 mm: exact H0 vs the far-field form for a point r' along the antenna axis")
theta = np.array([1.0, 0.0])
for x in (0.0, -0.02, -0.05, -0.08):
    h = hankel1_0(k * (0.09 - x))
    a = hankel_farfield(k, 0.09, theta, np.array([x, 0.0]))
    print(f"  r' = {x * 1e3:+6.1f} mm  |k||a-r'| = {abs(k) * (0.09 - x):6.2f}  rel diff = {abs(h - a) / abs(h):.2e}")
