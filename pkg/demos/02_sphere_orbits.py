"""
Periodic orbits of the sphere and cutoff policies
=================================================
"""

# %%
import math

from cavity_radiance import SphericalCavity, enumerate_sphere_orbits, TotalInternalReflection, ExponentialEscape
from cavity_radiance.dos import policy_weights

cav = SphericalCavity(0.02)
orbits = enumerate_sphere_orbits(cav, 0.2, p_max=40)
for o in orbits[:8]:
    print(f"(p={o.p:2d}, t={o.t})  L = {o.length:.4f} m  incidence = {o.incidence_from_normal:.4f} rad")

# %%
# Dielectric sphere: only rays beyond the critical angle stay trapped
tir = TotalInternalReflection(1.5, 1.0)
print("critical angle", math.asin(1 / 1.5))
kept = [(o.p, o.t) for o in orbits if policy_weights([tir], o.length, o.incidence_from_normal, 1e11) == 1.0]
print(len(kept), "of", len(orbits), "orbits survive, e.g.", kept[:5])

# %%
# weights multiply: escape through an aperture on top of TIR
pols = [tir, ExponentialEscape(0.5)]
for o in orbits[1:4]:
    print(o.p, o.t, float(policy_weights(pols, o.length, o.incidence_from_normal, 1e11)))
