"""
Finite-size corrections to the Stefan-Boltzmann law
===================================================
"""

# %%
import warnings

import numpy as np

from cavity_radiance import SphericalCavity
from cavity_radiance.exitance import (corrected_exitance, rescaled_exitance, sphere_b_coefficients,
                                      sphere_state_for_x, oscillatory_exitance)
from cavity_radiance.oracle import enumerate_sphere_modes, direct_exitance
from cavity_radiance.constants import stefan_boltzmann_infinite

print("b0 =", sphere_b_coefficients().b0, " b1 =", sphere_b_coefficients().b1)

# %%
# Dimensionless curve in x = r0 k T/(hbar c)
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for x in np.linspace(1, 6, 6):
        print(f"x = {x:.0f}  R_sca = {rescaled_exitance(x):.5f}")

# %%
# Compare every normalization with the direct mode sum
cav = SphericalCavity(0.01)
modes = enumerate_sphere_modes(cav, 610 * 2.99792458e8 / (2 * np.pi * 0.01))
for x in (2.0, 5.0, 10.0):
    T = sphere_state_for_x(x, cav.r0)
    sb = stefan_boltzmann_infinite(T)
    line = [f"x={x:g}", f"direct {direct_exitance(modes, cav, T) / sb - 1:+.5f}"]
    for norm in ("conductor", "closed_form", "general"):
        line.append(f"{norm} {corrected_exitance(cav, T, norm).ratio - 1:+.5f}")
    line.append(f"orbits {oscillatory_exitance(cav, T) / sb:+.2e}")
    print("  ".join(line))
