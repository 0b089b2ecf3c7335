"""Finite-cavity Planck spectrum u(nu) = rho(nu)/V * eps(nu)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import SI, mode_energy, planck_u_infinite
from .dos import DEFAULT_CURVATURE, DosBreakdown, HardLength, total_density
from .geometry import DEFAULT_P_MAX, SphericalCavity


@dataclass
class SpectrumSample:
    """Spectral energy density and its ratio to the Planck law.

    Fields are arrays over the frequency grid (0-d for a scalar query).
    ``curvature_part`` and ``oscillatory_part`` split ``ratio - 1``.
    """

    nu: np.ndarray
    u: np.ndarray
    u_infinite: np.ndarray
    curvature_part: np.ndarray
    oscillatory_part: np.ndarray
    lambda_over_L: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        return 1.0 + self.curvature_part + self.oscillatory_part

    def __len__(self):
        return np.size(self.nu)

    def rows(self):
        """Per-frequency samples, in grid order."""
        for i in range(len(self)):
            yield SpectrumSample(*(np.ravel(getattr(self, f))[i] for f in
                                   ("nu", "u", "u_infinite", "curvature_part",
                                    "oscillatory_part", "lambda_over_L")))


def _from_breakdown(cavity, state, dos: DosBreakdown) -> SpectrumSample:
    nu = dos.nu
    eps = np.asarray(mode_energy(nu, state), dtype=float)
    u = dos.total / cavity.volume * eps
    u_inf = np.asarray(planck_u_infinite(nu, state), dtype=float)
    return SpectrumSample(nu=nu, u=u, u_infinite=u_inf,
                          curvature_part=dos.rho_curvature / dos.rho_volume,
                          oscillatory_part=dos.rho_oscillatory / dos.rho_volume,
                          lambda_over_L=SI.c / (nu * cavity.length))


def modified_planck(cavity, state, nu, policies, *, curvature: str = DEFAULT_CURVATURE,
                    p_max: int = DEFAULT_P_MAX, half_length_phase: bool = False) -> SpectrumSample:
    """u(nu) for a finite cavity, with the ratio to the infinite-volume law."""
    scalar = np.ndim(nu) == 0
    dos = total_density(cavity, nu, policies, curvature=curvature, p_max=p_max,
                        half_length_phase=half_length_phase)
    s = _from_breakdown(cavity, state, dos)
    if scalar:
        s = next(s.rows())
    return s


def spectrum_sweep(cavity, state, nu_grid, policies, **kwargs) -> SpectrumSample:
    """modified_planck over a strictly increasing positive grid."""
    nu_grid = np.asarray(nu_grid, dtype=float)
    if nu_grid.ndim != 1 or nu_grid.size == 0:
        raise ValueError("frequency grid must be a non-empty 1-d array")
    if nu_grid[0] <= 0 or np.any(np.diff(nu_grid) <= 0):
        raise ValueError("frequency grid must be positive and strictly increasing")
    return modified_planck(cavity, state, nu_grid, policies, **kwargs)


# Parameters of the published spectrum figure: 2 cm sphere at 5 K, orbits
# longer than 200 wavelengths dropped (spectrometer resolution 5e-3).
FIGURE1 = dict(r0=0.02, T=5.0, nu_min=1.0e11, nu_max=6.0e11, points=2048,
               policies=(HardLength(wavelengths=2.0e2),))


def figure1_spectrum(points: int = FIGURE1["points"]) -> SpectrumSample:
    cav = SphericalCavity(FIGURE1["r0"])
    grid = np.linspace(FIGURE1["nu_min"], FIGURE1["nu_max"], points)
    return spectrum_sweep(cav, FIGURE1["T"], grid, FIGURE1["policies"])
