"""
Mesoscopic fluctuations in a chaotic cavity
===========================================
"""

# %%
import numpy as np

from cavity_radiance.geometry import GenericCavity
from cavity_radiance.fluctuations import (escape_length, exitance_variance, heisenberg_time,
                                          diagonal_relative_variance, energy_density_relative_variance,
                                          synthetic_ergodic_table)
from cavity_radiance.dos import ExponentialEscape, generic_oscillatory_density
from cavity_radiance.constants import SI, stefan_boltzmann_infinite, weyl_density

L, V = 0.02, 3.351e-5
cav = GenericCavity(L=L, V=V, C=0.0, n=0, aperture_area=2.63e-5)
l_esc = escape_length(cav)
print("escape length", l_esc, "m;  Heisenberg time at 3e11 Hz", heisenberg_time(cav, 3e11), "s")

v = exitance_variance(cav, 5.0, l_min=0.08, nu=3e11)
print("rms exitance / sigma T^4 =", v.rms / stefan_boltzmann_infinite(5.0))

# %%
# Random-phase orbit table with the ergodic sum rule, against the two estimates
table = synthetic_ergodic_table(0.05 / SI.c, 20 * 0.8 / SI.c, 20000, seed=1)
g = GenericCavity(L=0.05, V=V, C=0.0, n=0, orbits=table)
for nu0 in (1e11, 1e12):
    nu = np.linspace(nu0, 1.01 * nu0, 4000)
    rho = generic_oscillatory_density(g, nu, [ExponentialEscape(0.8)])
    emp = np.var(rho / weyl_density(nu, V))
    print(f"{nu0:.0e} Hz  empirical {emp:.3e}  diagonal {diagonal_relative_variance(nu0, V, 0.8, 0.05):.3e}"
          f"  closed {energy_density_relative_variance(nu0, 0.8):.3e}")
