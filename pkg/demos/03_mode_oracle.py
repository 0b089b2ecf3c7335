"""
Exact TE/TM modes as ground truth
=================================

Roots of j_l and of (x j_l)' give the modes of the conducting sphere.  The
counting function and its smoothed density test the orbit expansion.
"""

# %%
import numpy as np

from cavity_radiance import SphericalCavity
from cavity_radiance.constants import SI
from cavity_radiance.oracle import enumerate_sphere_modes, counting_staircase, weyl_residual_fit
from cavity_radiance.validation import compare_with_oracle

cav = SphericalCavity(0.01)
modes = enumerate_sphere_modes(cav, 6e11)
print(modes.total_count, "modes below", modes.nu_max, "Hz; lowest at", modes.nu[0])

# %%
# Staircase minus the volume term drifts linearly; its slope is the curvature term
fit = weyl_residual_fit(modes)
print("fitted slope", fit.slope, " -16 r0/3c =", -16 * cav.r0 / (3 * SI.c))

# %%
# Smoothed mode density against the resolution-weighted orbit sum
nu = np.linspace(3e11, 5e11, 400)
for rel in (5e-3, 1e-2, 2e-2):
    cmp = compare_with_oracle(cav, nu, rel, modes=enumerate_sphere_modes(cav, 7.2e11))
    print(f"rel width {rel:g}: rel rms {cmp.rel_rms:.3f}, correlation {cmp.correlation:.4f}")
