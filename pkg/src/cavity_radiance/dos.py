"""Mode density rho(nu) = rho_V + rho_C + oscillatory periodic-orbit sum.

Long orbits are suppressed by cutoff policies.  Each policy multiplies the
weight of an orbit of total length ``l`` at frequency ``nu``; policies in a
list compose by multiplication.  The sphere's orbit sum does not converge
pointwise, so at least one policy must bound the orbit length.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from math import pi

import numpy as np

from .constants import SI, weyl_density
from .geometry import DEFAULT_P_MAX, GenericCavity, SphericalCavity, sphere_orbit_pairs

# An orbit is dropped once its weight is below this for every frequency.
WEIGHT_FLOOR = 1e-8
_LOG_FLOOR = -math.log(WEIGHT_FLOOR)

# Semiclassical expansion parameter lambda/L above which results are flagged.
VALIDITY_LIMIT = 0.2

# The two candidate curvature coefficients, rho_C = coefficient * C / c.
CURVATURE_CONVENTIONS = {
    # 2/(3 pi) C/c, i.e. 8 r0/(3c) for a sphere.
    "positive": 2.0 / (3.0 * pi),
    # Perfect-conductor value, -16 r0/(3c) for a sphere; this is what the
    # eigenmode staircase of the conducting sphere follows.
    "conductor": -4.0 / (3.0 * pi),
}
DEFAULT_CURVATURE = "conductor"


class SemiclassicalValidityWarning(UserWarning):
    """lambda/L too large for the periodic-orbit expansion."""


class UnboundedSeriesError(ValueError):
    """No cutoff policy bounds the orbit length."""


@dataclass(frozen=True)
class NoCutoff:
    def factor(self, length, incidence, nu):
        return np.ones(np.broadcast(length, nu).shape)

    def stop_length(self, nu_min):
        return math.inf


@dataclass(frozen=True)
class HardLength:
    """Keep orbits with ``l <= l_cut``.

    Give either a fixed ``l_cut`` in metres or ``wavelengths``, in which case
    the cutoff is ``wavelengths * c / nu`` and moves with frequency.
    """

    l_cut: float | None = None
    wavelengths: float | None = None

    def __post_init__(self):
        if (self.l_cut is None) == (self.wavelengths is None):
            raise ValueError("HardLength needs exactly one of l_cut or wavelengths")
        value = self.l_cut if self.l_cut is not None else self.wavelengths
        if not value > 0:
            raise ValueError("hard cutoff must be positive")

    def cutoff(self, nu):
        if self.l_cut is not None:
            return np.full(np.shape(nu), self.l_cut, dtype=float)
        return self.wavelengths * SI.c / np.asarray(nu, dtype=float)

    def factor(self, length, incidence, nu):
        return (np.asarray(length) <= self.cutoff(nu)).astype(float)

    def stop_length(self, nu_min):
        return float(np.max(self.cutoff(nu_min)))


@dataclass(frozen=True)
class ExponentialEscape:
    """Survival probability exp(-l/l_esc) of a ray inside an open cavity."""

    l_esc: float

    def __post_init__(self):
        if not self.l_esc > 0:
            raise ValueError("escape length must be positive")

    def factor(self, length, incidence, nu):
        return np.exp(-np.asarray(length) / self.l_esc) * np.ones(np.shape(nu))

    def stop_length(self, nu_min):
        return min(_LOG_FLOOR, 20.0) * self.l_esc


@dataclass(frozen=True)
class GaussianResolution:
    """Instrument resolution: Gaussian kernel of standard deviation rel*nu.

    Convolving the delta comb with that kernel damps an orbit of length l by
    exp(-(2*pi*rel*nu*l/c)**2 / 2).
    """

    rel: float

    def __post_init__(self):
        if not 0 < self.rel < 1:
            raise ValueError("relative resolution must lie in (0, 1)")

    def factor(self, length, incidence, nu):
        arg = 2.0 * pi * self.rel * np.asarray(nu) * np.asarray(length) / SI.c
        return np.exp(-0.5 * arg**2)

    def stop_length(self, nu_min):
        scale = SI.c / (2.0 * pi * self.rel * nu_min)
        return min(math.sqrt(2.0 * _LOG_FLOOR), 20.0) * scale


@dataclass(frozen=True)
class TotalInternalReflection:
    """Dielectric sphere of index n1 in a medium of index n2 <= n1.

    An orbit survives only if its rays hit the surface beyond the critical
    angle arcsin(n2/n1) from the normal.
    """

    n1: float
    n2: float

    def __post_init__(self):
        if not (self.n2 > 0 and self.n1 >= self.n2):
            raise ValueError("total internal reflection needs n1 >= n2 > 0")

    @property
    def theta_c(self) -> float:
        return math.asin(self.n2 / self.n1)

    def factor(self, length, incidence, nu):
        if incidence is None:
            raise ValueError("total-internal-reflection cutoff needs orbit incidence angles")
        keep = (np.asarray(incidence) > self.theta_c).astype(float)
        return keep * np.ones(np.broadcast(length, nu).shape)

    def stop_length(self, nu_min):
        return math.inf


def as_policies(policies) -> tuple:
    if policies is None:
        return ()
    if isinstance(policies, (list, tuple)):
        return tuple(policies)
    return (policies,)


def policy_weights(policies, length, incidence, nu) -> np.ndarray:
    """Product of policy factors, broadcasting ``length`` against ``nu``."""
    w = np.ones(np.broadcast(np.asarray(length), np.asarray(nu)).shape)
    for pol in as_policies(policies):
        w = w * pol.factor(length, incidence, nu)
    return w


def orbit_weight(orbit, policies, nu):
    """Weight in [0, 1] of a single orbit (anything with ``length``/``incidence``)."""
    w = policy_weights(policies, orbit.length, getattr(orbit, "incidence", None), nu)
    return w.item() if w.ndim == 0 else w


def stop_length(policies, nu_min: float) -> float:
    """Orbit length beyond which every policy weight is below WEIGHT_FLOOR."""
    lengths = [pol.stop_length(nu_min) for pol in as_policies(policies)]
    stop = min(lengths, default=math.inf)
    if not math.isfinite(stop):
        raise UnboundedSeriesError(
            "the periodic-orbit sum does not converge without a length-bounding cutoff "
            "(add a hard, escape or resolution policy)")
    return stop


def curvature_density(cavity, convention: str = DEFAULT_CURVATURE) -> float:
    """Frequency-independent curvature term rho_C in modes/Hz."""
    try:
        coeff = CURVATURE_CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown curvature convention {convention!r}; "
                         f"choose from {sorted(CURVATURE_CONVENTIONS)}") from None
    return coeff * cavity.curvature / SI.c


@dataclass
class SeriesDiagnostics:
    """Bookkeeping for a truncated orbit sum."""

    n_orbits: int
    stop_length: float
    p_max: int
    truncation_estimate: float
    lambda_over_L: float


@dataclass
class DosBreakdown:
    nu: np.ndarray
    rho_volume: np.ndarray
    rho_curvature: float
    rho_oscillatory: np.ndarray
    diagnostics: SeriesDiagnostics | None = None
    trace: np.ndarray | None = field(default=None, repr=False)

    @property
    def total(self) -> np.ndarray:
        return self.rho_volume + self.rho_curvature + self.rho_oscillatory


def _validity(cavity, nu) -> float:
    lam_over_L = float(np.max(SI.c / (np.asarray(nu) * cavity.length)))
    if lam_over_L > VALIDITY_LIMIT:
        warnings.warn(f"lambda/L = {lam_over_L:.3g} exceeds {VALIDITY_LIMIT}; the periodic-orbit "
                      "expansion is outside its range of validity",
                      SemiclassicalValidityWarning, stacklevel=3)
    return lam_over_L


def _positive_nu(nu) -> np.ndarray:
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if nu.size == 0 or np.any(~np.isfinite(nu)) or np.any(nu <= 0):
        raise ValueError("frequencies must be finite and positive")
    return nu


def _sphere_terms(r0, p, t, nu, half_length_phase=False):
    """Unweighted sphere orbit terms, shape (len(p), len(nu)).

    Diameter family (p == 2t):
        -V (2 pi/c) 3 nu/(c r0 t pi) sin(2 pi nu L/c)
    Polygons (p > 2t):
        V (6 pi/c) (2 pi nu/c)^(3/2) (-1)^t sin(2 phi) sqrt(sin(phi)/(r0 pi^3 p))
          * sin((2p+3) pi/4 + 2 pi nu L/c)
    """
    c = SI.c
    V = 4.0 / 3.0 * pi * r0**3
    p = p[:, None].astype(float)
    t_int = t[:, None]
    t = t_int.astype(float)
    phi = pi * t / p
    L = 2.0 * p * r0 * np.sin(phi)
    nu = nu[None, :]
    phase = 2.0 * pi * nu * L / c
    diam = p == 2.0 * t
    poly_phase = phase * 0.5 if half_length_phase else phase
    # (2p+3)*pi/4 reduced exactly modulo 2*pi before it meets the large phase
    offset = ((2 * p.astype(np.int64) + 3) % 8) * (pi / 4.0)
    sign = np.where(t_int % 2 == 0, 1.0, -1.0)
    amp_poly = (V * 6.0 * pi / c * (2.0 * pi * nu / c) ** 1.5 * sign * np.sin(2.0 * phi)
                * np.sqrt(np.sin(phi) / (r0 * pi**3 * p)))
    amp_diam = -V * 2.0 * pi / c * 3.0 * nu / (c * r0 * t * pi)
    return np.where(diam, amp_diam * np.sin(phase), amp_poly * np.sin(offset + poly_phase))


def sphere_oscillatory_density(cavity: SphericalCavity, nu, policies, *, p_max: int = DEFAULT_P_MAX,
                               half_length_phase: bool = False, full_output: bool = False,
                               chunk: int = 256):
    """Oscillatory mode density of the sphere, summed over (p, t) orbits.

    Every polygon term oscillates with its own length, 2*pi*nu*L_{p,t}/c, the
    same convention as the diameter terms.  ``half_length_phase=True``
    evaluates the polygon phase as 2*pi*nu*p*r0*sin(phi)/c (half the orbit
    length) for comparison only; the mode oracle rules it out.
    """
    nu = _positive_nu(nu)
    policies = as_policies(policies)
    lam = _validity(cavity, nu)
    l_stop = stop_length(policies, float(nu.min()))
    pt = sphere_orbit_pairs(cavity.r0, l_stop, p_max)
    total = np.zeros_like(nu)
    for start in range(0, len(pt), chunk):
        p, t = pt[start:start + chunk, 0], pt[start:start + chunk, 1]
        L = 2.0 * p * cavity.r0 * np.sin(pi * t / p)
        incidence = pi / 2 - pi * t / p
        w = policy_weights(policies, L[:, None], incidence[:, None], nu[None, :])
        total += np.sum(w * _sphere_terms(cavity.r0, p, t, nu, half_length_phase), axis=0)
    if not full_output:
        return total
    diag = SeriesDiagnostics(len(pt), l_stop, p_max,
                             _sphere_truncation(cavity, nu, policies, l_stop, p_max, pt), lam)
    return total, diag


def _sphere_truncation(cavity, nu, policies, l_stop, p_max, pt) -> float:
    """Magnitude of the first omitted terms (next length, and p = p_max + 2)."""
    r0 = cavity.r0
    cand = []
    # first orbit beyond the stop length
    beyond = sphere_orbit_pairs(r0, l_stop * 1.5 + 4 * r0, p_max)
    if len(beyond):
        L = 2.0 * beyond[:, 0] * r0 * np.sin(pi * beyond[:, 1] / beyond[:, 0])
        nxt = np.nonzero(L > l_stop)[0]
        if len(nxt):
            cand.append(beyond[nxt[0]])
    for t in np.unique(pt[:, 1]) if len(pt) else ():
        cand.append((p_max + 2 + (p_max % 2), t))
    if not cand:
        return 0.0
    cand = np.array(cand, dtype=int)
    L = 2.0 * cand[:, 0] * r0 * np.sin(pi * cand[:, 1] / cand[:, 0])
    inc = pi / 2 - pi * cand[:, 1] / cand[:, 0]
    w = policy_weights(policies, L[:, None], inc[:, None], nu[None, :])
    c = SI.c
    V = cavity.volume
    phi = pi * cand[:, 1] / cand[:, 0]
    amp = np.where((cand[:, 0] == 2 * cand[:, 1])[:, None],
                   V * 6.0 / (c * c * r0 * cand[:, 1])[:, None] * nu[None, :],
                   (V * 6.0 * pi / c * np.sin(2 * phi) * np.sqrt(np.sin(phi) / (r0 * pi**3 * cand[:, 0])))[:, None]
                   * (2.0 * pi * nu[None, :] / c) ** 1.5)
    return float(np.max(np.abs(amp * w)))


def generic_oscillatory_density(cavity: GenericCavity, nu, policies=(), *, chunk: int = 256):
    """Orbit-table sum: sum weight * pol * A (nu/nu_ref)^e cos(2 pi nu r l_p/c + mu).

    ``e`` is the orbit's ``nu_exponent`` or ``n/2``.
    """
    nu = _positive_nu(nu)
    if not cavity.orbits:
        raise ValueError("orbit table is empty")
    policies = as_policies(policies)
    _validity(cavity, nu)
    total = np.zeros_like(nu)
    orbits = cavity.orbits
    for start in range(0, len(orbits), chunk):
        block = orbits[start:start + chunk]
        L = np.array([o.length for o in block])[:, None]
        inc = [o.incidence for o in block]
        inc = None if any(i is None for i in inc) else np.array(inc)[:, None]
        if inc is None and any(isinstance(p, TotalInternalReflection) for p in policies):
            raise ValueError("total-internal-reflection cutoff needs incidence angles in the orbit table")
        amp = np.array([o.amplitude * o.polarization_factor for o in block])[:, None]
        expo = np.array([cavity.n / 2 if o.nu_exponent is None else o.nu_exponent for o in block])[:, None]
        mu = np.array([o.maslov for o in block])[:, None]
        w = policy_weights(policies, L, inc, nu[None, :])
        terms = amp * (nu[None, :] / cavity.nu_ref) ** expo * np.cos(2.0 * pi * nu[None, :] * L / SI.c + mu)
        total += np.sum(w * terms, axis=0)
    return total


def sphere_orbit_table(cavity: SphericalCavity, l_max: float, p_max: int = DEFAULT_P_MAX):
    """Export sphere orbits up to ``l_max`` as OrbitTerm entries (nu_ref = 1 Hz).

    Each (p, t) orbit becomes its primitive polygon repeated gcd(p, t) times,
    with polarization factor 2 (planar orbits) folded out of the amplitude.
    """
    from .geometry import OrbitTerm

    c = SI.c
    r0 = cavity.r0
    V = cavity.volume
    table = []
    for p, t in sphere_orbit_pairs(r0, l_max, p_max):
        p, t = int(p), int(t)
        phi = pi * t / p
        r = math.gcd(p, t)
        L = 2.0 * p * r0 * math.sin(phi)
        if p == 2 * t:
            # -a nu sin(x) = a nu cos(x + pi/2)
            amp = V * 2.0 * pi / c * 3.0 / (c * r0 * t * pi)
            table.append(OrbitTerm(l_p=L / r, r=r, amplitude=amp / 2.0, maslov=pi / 2,
                                   polarization_factor=2.0, reflections=p,
                                   incidence=pi / 2 - phi, nu_exponent=1.0))
        else:
            sign = 1.0 if t % 2 == 0 else -1.0
            amp = (V * 6.0 * pi / c * (2.0 * pi / c) ** 1.5 * sign * math.sin(2 * phi)
                   * math.sqrt(math.sin(phi) / (r0 * pi**3 * p)))
            # sin(a + x) = cos(x + a - pi/2)
            mu = ((2 * p + 3) % 8) * (pi / 4.0) - pi / 2
            table.append(OrbitTerm(l_p=L / r, r=r, amplitude=amp / 2.0, maslov=mu,
                                   polarization_factor=2.0, reflections=p,
                                   incidence=pi / 2 - phi, nu_exponent=1.5))
    return table


def total_density(cavity, nu, policies, *, curvature: str = DEFAULT_CURVATURE,
                  p_max: int = DEFAULT_P_MAX, half_length_phase: bool = False) -> DosBreakdown:
    """rho_V + rho_C + oscillatory sum, with series diagnostics for spheres."""
    nu = _positive_nu(nu)
    rho_v = np.asarray(weyl_density(nu, cavity.volume), dtype=float).reshape(nu.shape)
    rho_c = curvature_density(cavity, curvature)
    if isinstance(cavity, SphericalCavity):
        osc, diag = sphere_oscillatory_density(cavity, nu, policies, p_max=p_max,
                                               half_length_phase=half_length_phase, full_output=True)
    elif cavity.orbits:
        osc, diag = generic_oscillatory_density(cavity, nu, policies), None
    else:
        _validity(cavity, nu)
        osc, diag = np.zeros_like(nu), None
    return DosBreakdown(nu, rho_v, rho_c, osc, diag)


def suppress_all_orbits() -> tuple:
    """Policy list that removes every orbit (useful for smooth-only densities)."""
    return (HardLength(l_cut=np.nextafter(0.0, 1.0)),)
