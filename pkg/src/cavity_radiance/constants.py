"""Physical constants and the infinite-volume blackbody laws.

Frequencies are ordinary frequencies in Hz throughout the package; the
only place angular quantities appear is inside phases, where the factor
2*pi is written out explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np
from scipy import constants as _sc
from scipy.integrate import quad

# Planck tail truncation used by every frequency quadrature: h*nu/(k_B*T) = 60.
PLANCK_TAIL = 60.0

# Above this reduced frequency the Bose factor is set to zero (exp would overflow).
_OVERFLOW_X = 700.0


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants (CODATA values from scipy.constants)."""

    c: float = _sc.c
    h: float = _sc.h
    hbar: float = _sc.hbar
    k_B: float = _sc.k
    sigma: float = _sc.sigma


SI = PhysicalConstants()


@dataclass(frozen=True)
class ThermalState:
    """Cavity wall temperature in kelvin."""

    T: float

    def __post_init__(self):
        if not np.isfinite(self.T) or self.T <= 0:
            raise ValueError(f"temperature must be positive, got T={self.T!r}")


def _temperature(state) -> float:
    if isinstance(state, ThermalState):
        return state.T
    return ThermalState(float(state)).T


def _check_nu(nu) -> np.ndarray:
    nu = np.asarray(nu, dtype=float)
    if np.any(~np.isfinite(nu)) or np.any(nu < 0):
        raise ValueError("frequency must be finite and non-negative")
    return nu


def _scalar_or_array(value: np.ndarray):
    return value.item() if value.ndim == 0 else value


def mode_energy(nu, state, constants: PhysicalConstants = SI):
    """Mean thermal energy of one mode, h*nu / (exp(h*nu/k_B T) - 1).

    Returns k_B*T at nu = 0 and exactly 0 for h*nu/k_B*T > 700.
    """
    nu = _check_nu(nu)
    kT = constants.k_B * _temperature(state)
    x = constants.h * nu / kT
    out = np.empty_like(x)
    small = x == 0
    big = x > _OVERFLOW_X
    mid = ~(small | big)
    out[small] = 1.0
    out[big] = 0.0
    out[mid] = x[mid] / np.expm1(x[mid])
    return _scalar_or_array(kT * out)


def weyl_density(nu, V: float, constants: PhysicalConstants = SI):
    """Leading (volume) mode density 8*pi*V*nu**2/c**3 in modes/Hz."""
    if not V > 0:
        raise ValueError(f"volume must be positive, got V={V!r}")
    nu = _check_nu(nu)
    return _scalar_or_array(8.0 * pi * V * nu**2 / constants.c**3)


def planck_u_infinite(nu, state, constants: PhysicalConstants = SI):
    """Planck spectral energy density u_V(nu) in J*s/m^3 (i.e. J m^-3 Hz^-1)."""
    nu = _check_nu(nu)
    rho_per_volume = 8.0 * pi * nu**2 / constants.c**3
    return _scalar_or_array(rho_per_volume * np.asarray(mode_energy(nu, state, constants)))


def stefan_boltzmann_infinite(state, constants: PhysicalConstants = SI) -> float:
    """sigma*T**4 in W/m^2."""
    T = _temperature(state)
    return constants.sigma * T**4


def exitance_from_spectrum(u_integral: float, constants: PhysicalConstants = SI) -> float:
    """Convert an energy density integral (J/m^3) into exitance (W/m^2).

    Isotropic radiation crossing a plane carries c/4 of its energy density per
    unit time; with this prefactor the Planck integral reproduces sigma*T**4.
    """
    return constants.c / 4.0 * u_integral


def planck_exitance_quadrature(state, constants: PhysicalConstants = SI) -> float:
    """Stefan-Boltzmann exitance recomputed by quadrature of the Planck law."""
    T = _temperature(state)
    nu_top = PLANCK_TAIL * constants.k_B * T / constants.h
    nu_peak = 2.82 * constants.k_B * T / constants.h
    val, _ = quad(lambda v: planck_u_infinite(v, T, constants), 0.0, nu_top,
                  points=[nu_peak], epsabs=0.0, epsrel=1e-12, limit=200)
    return exitance_from_spectrum(val, constants)


def thermal_parameter(length: float, state, constants: PhysicalConstants = SI) -> float:
    """Dimensionless size-temperature parameter x = L*k_B*T/(hbar*c)."""
    return length * constants.k_B * _temperature(state) / (constants.hbar * constants.c)
