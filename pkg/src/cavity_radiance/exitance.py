"""Finite-size corrections to the Stefan-Boltzmann law.

    R(T) = sigma T^4 + R_C(T) + b1 k_B T c / L^3 -/+ b0 hbar c^2 / L^4

Three normalizations of the curvature term R_C are available, all of the
form  k * C (k_B T)^2 / (V hbar):

``"conductor"``
    k = -1/36.  Integrates the perfect-conductor curvature density
    rho_C = -4C/(3 pi c) with the exitance prefactor c/4 (the one for which
    the Planck integral gives sigma T^4).  For a sphere this is
    -(k_B T)^2 / (12 hbar r0^2); the direct mode sum of the conducting
    sphere converges to it.  Default.
``"closed_form"``
    k = 1/(36 pi), i.e. +(k_B T)^2/(12 pi hbar r0^2) for a sphere.
``"general"``
    k = 1/(72 pi), i.e. +(k_B T)^2/(24 pi hbar r0^2) for a sphere; this is
    rho_C = 2C/(3 pi c) integrated with a c/(4 pi) prefactor.

The orbit-sum coefficients b0, b1 are the published sphere values and the
generic symmetric-cavity sums; they are not fitted to anything.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import pi

import mpmath
import numpy as np
from scipy.integrate import quad

from .constants import SI, _temperature, stefan_boltzmann_infinite, thermal_parameter
from .dos import as_policies, policy_weights, sphere_orbit_table
from .geometry import DEFAULT_P_MAX, GenericCavity, SphericalCavity

CURVATURE_NORMALIZATIONS = {
    "conductor": -1.0 / 36.0,
    "closed_form": 1.0 / (36.0 * pi),
    "general": 1.0 / (72.0 * pi),
}
DEFAULT_NORMALIZATION = "conductor"

# Terms in the sum over repetitions t >= 1 of 1/t^3 (tail below 1e-10).
_ZETA3_TERMS = 100_000


class ExpansionValidityWarning(UserWarning):
    """Parameters outside the range where the 1/x expansion holds."""


@dataclass
class ExitanceBreakdown:
    stefan_term: float
    curvature_term: float
    linear_term: float
    constant_term: float
    x: float
    normalization: str

    @property
    def total(self) -> float:
        return self.stefan_term + self.curvature_term + self.linear_term + self.constant_term

    @property
    def ratio(self) -> float:
        return self.total / self.stefan_term


@dataclass
class OrbitSumCoefficients:
    b0: float
    b1: float
    n: int
    n_terms: int
    last_term: float = 0.0


def curvature_exitance(cavity, state, normalization: str = DEFAULT_NORMALIZATION) -> float:
    """Curvature contribution R_C in W/m^2 (scales as T^2 / L^2)."""
    try:
        k = CURVATURE_NORMALIZATIONS[normalization]
    except KeyError:
        raise ValueError(f"unknown normalization {normalization!r}; "
                         f"choose from {sorted(CURVATURE_NORMALIZATIONS)}") from None
    kT = SI.k_B * _temperature(state)
    return k * cavity.curvature * kT**2 / (cavity.volume * SI.hbar)


def sphere_b_coefficients() -> OrbitSumCoefficients:
    """b1 = 0 (only even-vertex orbits), b0 = 3/(512 pi^3) * sum_t 1/t^3."""
    t = np.arange(1, _ZETA3_TERMS + 1, dtype=float)
    zeta3 = float(np.sum(1.0 / t[::-1] ** 3))
    return OrbitSumCoefficients(b0=3.0 / (512.0 * pi**3) * zeta3, b1=0.0, n=3,
                                n_terms=_ZETA3_TERMS, last_term=1.0 / _ZETA3_TERMS**3)


def generic_b_coefficients(cavity: GenericCavity) -> OrbitSumCoefficients:
    """Orbit sums b0, b1 for cavities with n = 0 or 2 symmetry axes.

    b0 = -((n+2)/4) (-2 pi L/c)^(1+n/2) sum A f(mu) / (tau r)^(2+n/2)
    b1 = (2 pi L/c)^(n/2) sum A g(mu) / (tau r)^(1+n/2)
    f = cos mu + (sin mu - cos mu) n/2,   g = -sin mu - (sin mu - cos mu) n/2

    A is the table amplitude times its polarization factor.  A sphere-like
    cavity (n = 3) gets the sphere coefficients.
    """
    n = cavity.n
    if n == 3:
        return sphere_b_coefficients()
    if n not in (0, 2):
        raise ValueError(f"no orbit-sum coefficients for n={n}")
    if not cavity.orbits:
        return OrbitSumCoefficients(0.0, 0.0, n, 0)
    c, L = SI.c, cavity.L
    A = np.array([o.amplitude * o.polarization_factor for o in cavity.orbits])
    mu = np.array([o.maslov for o in cavity.orbits])
    period = np.array([o.tau_p * o.r for o in cavity.orbits])
    half = n / 2.0
    f = np.cos(mu) + (np.sin(mu) - np.cos(mu)) * half
    g = -np.sin(mu) - (np.sin(mu) - np.cos(mu)) * half
    t0 = A * f / period ** (2 + half)
    t1 = A * g / period ** (1 + half)
    b0 = -(n + 2) / 4.0 * (-2.0 * pi * L / c) ** (1 + half) * float(np.sum(t0))
    b1 = (2.0 * pi * L / c) ** half * float(np.sum(t1))
    last = max(abs(t0[-1]) / max(abs(np.sum(t0)), 1e-300), abs(t1[-1]) / max(abs(np.sum(t1)), 1e-300))
    return OrbitSumCoefficients(b0, b1, n, len(A), last)


def corrected_exitance(cavity, state, normalization: str = DEFAULT_NORMALIZATION) -> ExitanceBreakdown:
    """sigma T^4 plus curvature and orbit-sum corrections.

    Sphere: constant term -b0 hbar c^2/r0^4.  Generic cavity: +b0 hbar c^2/L^4.
    Warns when the thermal length hbar c/(k_B T) exceeds the shortest orbit.
    """
    T = _temperature(state)
    L = cavity.length
    kT = SI.k_B * T
    l_T = SI.hbar * SI.c / kT
    l_min = cavity.shortest_orbit
    if l_min is not None and l_T >= l_min:
        warnings.warn(f"thermal length {l_T:.3g} m is not below the shortest orbit {l_min:.3g} m",
                      ExpansionValidityWarning, stacklevel=2)
    if isinstance(cavity, SphericalCavity):
        b = sphere_b_coefficients()
        const = -b.b0 * SI.hbar * SI.c**2 / L**4
    else:
        b = generic_b_coefficients(cavity)
        const = b.b0 * SI.hbar * SI.c**2 / L**4
        if cavity.n == 3:
            const = -const
    return ExitanceBreakdown(
        stefan_term=stefan_boltzmann_infinite(T),
        curvature_term=curvature_exitance(cavity, T, normalization),
        linear_term=b.b1 * kT * SI.c / L**3,
        constant_term=const,
        x=thermal_parameter(L, T),
        normalization=normalization,
    )


def rescaled_exitance(x):
    """R/(sigma T^4) = 1 + 5/(pi^3 x^2) + 60 b0/(pi^2 x^4) for a sphere, x = r0 k_B T/(hbar c)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    if np.any(x < 1.5):
        warnings.warn("the 1/x expansion is only claimed down to x ~ 2", ExpansionValidityWarning,
                      stacklevel=2)
    b0 = sphere_b_coefficients().b0
    out = 1.0 + 5.0 / (pi**3 * x**2) + 60.0 * b0 / (pi**2 * x**4)
    return out.item() if out.ndim == 0 else out


def sphere_state_for_x(x: float, r0: float):
    """Temperature giving thermal parameter ``x`` for radius ``r0``."""
    return x * SI.hbar * SI.c / (r0 * SI.k_B)


# --- oscillatory exitance by integrating the orbit sum over frequency --------


def _orbit_integral_hurwitz(s: float, omega: float, mu: float) -> float:
    """int_0^inf y^(s-1)/(e^y - 1) cos(omega y + mu) dy via the Hurwitz zeta function."""
    z = mpmath.gamma(s) * mpmath.zeta(s, 1 - 1j * omega)
    return float(mpmath.re(mpmath.exp(1j * mu) * z))


def _orbit_integral_quad(s: float, omega: float, mu: float) -> float:
    f = lambda y: y ** (s - 1) / math.expm1(y) if y > 0 else 0.0
    top = 80.0
    c_part, _ = quad(f, 0.0, top, weight="cos", wvar=omega, limit=400)
    s_part, _ = quad(f, 0.0, top, weight="sin", wvar=omega, limit=400)
    return math.cos(mu) * c_part - math.sin(mu) * s_part


def oscillatory_exitance(cavity, state, policies=(), *, l_max: float | None = None,
                         p_max: int = DEFAULT_P_MAX, method: str = "hurwitz") -> float:
    """Oscillatory exitance (c/4V) * integral of rho_osc(nu) eps(nu) dnu, orbit by orbit.

    Each orbit term A nu^e cos(2 pi nu l/c + mu) integrates in closed form:
    with y = h nu/k_B T and omega = l k_B T/(hbar c),
        (k_B T)^(e+2)/h^(e+1) * Gamma(e+2) Re[e^(i mu) zeta(e+2, 1 - i omega)].
    ``method="quad"`` does the same integrals by oscillatory quadrature.
    No cutoff is needed for convergence; ``policies`` may still weight orbits.
    For a sphere, orbits up to ``l_max`` (default 40 r0) are included.
    """
    T = _temperature(state)
    kT = SI.k_B * T
    if isinstance(cavity, SphericalCavity):
        l_max = 40.0 * cavity.r0 if l_max is None else l_max
        table = sphere_orbit_table(cavity, l_max, p_max)
        n_half = 1.5
        nu_ref = 1.0
    else:
        table = list(cavity.orbits)
        n_half = cavity.n / 2.0
        nu_ref = cavity.nu_ref
    integral = {"hurwitz": _orbit_integral_hurwitz, "quad": _orbit_integral_quad}[method]
    policies = as_policies(policies)
    total = 0.0
    for o in table:
        e = n_half if o.nu_exponent is None else o.nu_exponent
        w = 1.0
        if policies:
            # frequency-dependent policies are evaluated at the thermal peak
            w = float(policy_weights(policies, o.length, o.incidence, 2.82 * kT / SI.h))
            if w == 0.0:
                continue
        omega = o.length * kT / (SI.hbar * SI.c)
        scale = kT ** (e + 2) / SI.h ** (e + 1) / nu_ref**e
        total += w * o.amplitude * o.polarization_factor * scale * integral(e + 2, omega, o.maslov)
    return SI.c / (4.0 * cavity.volume) * total
