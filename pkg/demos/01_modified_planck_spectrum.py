"""
Modified Planck spectrum of a small conducting sphere
=====================================================

Smooth terms plus the periodic-orbit sum for a 2 cm sphere at 5 K.
"""

# %%
import numpy as np

from cavity_radiance import SphericalCavity, GaussianResolution, HardLength, spectrum_sweep, figure1_spectrum
from cavity_radiance.constants import SI

cav = SphericalCavity(0.02)
nu = np.linspace(1.5e11, 3e11, 7)
s = spectrum_sweep(cav, 5.0, nu, [GaussianResolution(5e-3)])
for row in s.rows():
    print(f"{row.nu:.3e} Hz  u/u_inf = {row.ratio:.5f}")

# %%
# The figure preset: 200-wavelength hard cut, 1e11..6e11 Hz
fig = figure1_spectrum()
osc = fig.ratio - 1 - fig.curvature_part
amp = np.abs(np.fft.rfft((osc - osc.mean()) * np.hanning(len(osc))))
tau = np.fft.rfftfreq(len(osc), fig.nu[1] - fig.nu[0])
top = tau[1 + np.argsort(amp[1:])[::-1][:3]]
print("strongest delays in units of r0/c:", np.round(top * SI.c / cav.r0, 3))
print("diameter 4, square 4*sqrt(2) =", round(4 * np.sqrt(2), 3))

# %%
# A cut shorter than the diameter leaves only the smooth terms
flat = spectrum_sweep(cav, 5.0, nu, [HardLength(l_cut=0.01)])
print("ratio - 1 with no orbits:", flat.ratio - 1)
