"""Fluctuation estimates for chaotic (n = 0) cavities.

The orbit sum is characterised by its form factor

    K(tau) = sum_p A_p^2 delta(tau - tau_p),

normalised so that the universal (long-orbit) regime is exactly K = 2 tau
with rho in modes/Hz (seconds).  The non-universal short-time part is one
delta peak at the shortest orbit, and K saturates at the Heisenberg time
tau_H = rho_V(nu); the two smooth pieces meet at tau_H/2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import SI, _temperature, weyl_density
from .geometry import GenericCavity, OrbitTerm


class FluctuationValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FormFactorModel:
    tau_min: float
    tau_H: float
    shortest_orbit_weight: float | None = None

    def __post_init__(self):
        if not 0 < self.tau_min < self.tau_H:
            raise ValueError("need 0 < tau_min < tau_H")
        if self.shortest_orbit_weight is None:
            object.__setattr__(self, "shortest_orbit_weight", self.tau_min**2)

    @property
    def saturation_onset(self) -> float:
        return 0.5 * self.tau_H

    def smooth(self, tau):
        """Smooth part of K: 0 below tau_min, 2 tau up to tau_H/2, then tau_H."""
        tau = np.asarray(tau, dtype=float)
        out = np.where(tau < self.saturation_onset, 2.0 * tau, self.tau_H)
        out = np.where(tau < self.tau_min, 0.0, out)
        return out.item() if out.ndim == 0 else out

    def __call__(self, tau):
        return self.smooth(tau)

    def integrate(self, weight, tau_max: float | None = None) -> float:
        """int K(tau) weight(tau) dtau including the delta peak at tau_min."""
        from scipy.integrate import quad

        tau_max = 50.0 * self.tau_H if tau_max is None else tau_max
        a = self.shortest_orbit_weight * weight(self.tau_min)
        mid = min(self.saturation_onset, tau_max)
        b, _ = quad(lambda s: 2.0 * s * weight(s), self.tau_min, mid, limit=200)
        c = 0.0
        if tau_max > mid:
            c, _ = quad(lambda s: self.tau_H * weight(s), mid, tau_max, limit=200)
        return a + b + c


def heisenberg_time(cavity, nu):
    """tau_H = rho_V(nu) in seconds."""
    return weyl_density(nu, cavity.volume)


@dataclass
class ExitanceVariance:
    shortest_orbit_term: float
    universal_term: float
    tau_ratio: float
    l_esc_ok: bool | None

    @property
    def total(self) -> float:
        return self.shortest_orbit_term + self.universal_term

    @property
    def rms(self) -> float:
        return math.sqrt(self.total)


def _require_chaotic(cavity):
    if getattr(cavity, "n", None) != 0:
        raise ValueError("fluctuation estimates assume an ergodic cavity (n = 0)")


def exitance_variance(cavity: GenericCavity, state, *, l_min: float | None = None,
                      nu: float | None = None, tau_ratio: float | None = None,
                      l_esc: float | None = None) -> ExitanceVariance:
    """<R~^2> ~ hbar^2 c^4/(4 L^6 l_min^2) + (c k_B T/L^3)^2 log(tau_H/tau_min).

    ``l_min`` defaults to the cavity's shortest orbit.  Give either
    ``tau_ratio`` directly or a working frequency ``nu`` (tau_H = rho_V(nu),
    tau_min = l_min/c).  ``l_esc`` (default from the aperture) is checked
    against l_min; the result is recorded in ``l_esc_ok``.
    """
    _require_chaotic(cavity)
    T = _temperature(state)
    L = cavity.length
    l_min = cavity.shortest_orbit if l_min is None else l_min
    if l_min is None or not l_min > 0:
        raise ValueError("shortest orbit length l_min is required")
    if tau_ratio is None:
        if nu is None:
            raise ValueError("give tau_ratio or a working frequency nu")
        tau_ratio = float(heisenberg_time(cavity, nu)) / (l_min / SI.c)
    if not tau_ratio > 1:
        raise ValueError("tau_H must exceed tau_min")
    if l_esc is None and cavity.aperture_area > 0:
        l_esc = escape_length(cavity)
    ok = None
    if l_esc is not None:
        ok = l_esc >= 10.0 * l_min
        if not ok:
            warnings.warn(f"escape length {l_esc:.3g} m is not much longer than l_min {l_min:.3g} m",
                          FluctuationValidityWarning, stacklevel=2)
    first = SI.hbar**2 * SI.c**4 / (4.0 * L**6 * l_min**2)
    second = (SI.c * SI.k_B * T) ** 2 / L**6 * math.log(tau_ratio)
    return ExitanceVariance(first, second, tau_ratio, ok)


def energy_density_relative_variance(nu, l_esc):
    """<du^2>/u_V^2 = c^2/(nu^2 l_esc^2)."""
    nu = np.asarray(nu, dtype=float)
    if np.any(nu <= 0) or not l_esc > 0:
        raise ValueError("nu and l_esc must be positive")
    out = (SI.c / (nu * l_esc)) ** 2
    return out.item() if out.ndim == 0 else out


def escape_length(cavity) -> float:
    """Mean path before escape through the aperture, 2 V pi / A."""
    A = cavity.aperture_area
    if not A > 0:
        raise ValueError("closed cavity (zero aperture) has no escape length")
    return 2.0 * cavity.volume * math.pi / A


def escape_check(cavity, factor: float = 10.0) -> dict:
    """Pass/fail record for l_esc >> l_min."""
    l_esc = escape_length(cavity)
    l_min = cavity.shortest_orbit
    return {"l_esc": l_esc, "l_min": l_min, "factor": factor,
            "pass": bool(l_min is not None and l_esc >= factor * l_min)}


# --- diagonal-approximation route --------------------------------------------


def diagonal_relative_variance(nu, V: float, l_esc: float, l_min: float = 0.0):
    """Relative variance of rho_osc/rho_V with K = 2 tau and escape damping.

    Under the diagonal approximation a long-time average gives
    <rho_osc^2> = (1/2) int K(tau) exp(-2 c tau/l_esc) dtau; with K = 2 tau
    from tau_min = l_min/c upward this is (l_esc/2c)^2 (1 + a) e^(-a),
    a = 2 l_min/l_esc.
    """
    a = 2.0 * l_min / l_esc
    var = (l_esc / (2.0 * SI.c)) ** 2 * (1.0 + a) * math.exp(-a)
    return var / np.asarray(weyl_density(nu, V), dtype=float) ** 2


def synthetic_ergodic_table(tau_min: float, tau_max: float, count: int, seed: int = 0):
    """n = 0 orbit table whose form factor is 2 tau on [tau_min, tau_max].

    Periods are evenly spaced; each carries A^2 = 2 tau dtau and a random phase.
    """
    rng = np.random.default_rng(seed)
    tau = np.linspace(tau_min, tau_max, count)
    dtau = tau[1] - tau[0]
    amp = np.sqrt(2.0 * tau * dtau)
    mu = rng.uniform(0.0, 2.0 * math.pi, count)
    return tuple(OrbitTerm(l_p=SI.c * t, amplitude=a, maslov=m, polarization_factor=1.0,
                           nu_exponent=0.0) for t, a, m in zip(tau, amp, mu))
