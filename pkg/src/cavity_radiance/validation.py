"""Side-by-side comparison of the mode oracle with the orbit sum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import SI
from .dos import CURVATURE_CONVENTIONS, DEFAULT_CURVATURE, GaussianResolution, curvature_density, total_density
from .geometry import DEFAULT_P_MAX, SphericalCavity
from .oracle import ModeList, default_nu_max, enumerate_sphere_modes, smoothed_density


@dataclass
class OracleComparison:
    nu: np.ndarray
    oracle_oscillatory: np.ndarray
    semiclassical_oscillatory: np.ndarray
    rel_rms: float
    correlation: float
    curvature_offsets: dict = field(default_factory=dict)
    lambda_over_L: float = 0.0

    @property
    def residual(self) -> np.ndarray:
        return self.oracle_oscillatory - self.semiclassical_oscillatory

    @property
    def best_curvature(self) -> str:
        return min(self.curvature_offsets, key=lambda k: abs(self.curvature_offsets[k]))

    def passed(self, rms_tol: float = 0.10, corr_tol: float = 0.95) -> bool:
        return self.rel_rms <= rms_tol and self.correlation >= corr_tol


def smoothed_weyl(nu, V, delta_nu):
    """Weyl density convolved with a Gaussian: 8 pi V (nu^2 + delta_nu^2)/c^3."""
    return 8.0 * math.pi * V * (np.asarray(nu) ** 2 + np.asarray(delta_nu) ** 2) / SI.c**3


def oracle_modes_for(cavity: SphericalCavity, nu_hi: float, rel: float) -> ModeList:
    """Mode list covering queries up to ``nu_hi`` with relative smoothing ``rel``."""
    # never below the first mode, so a window under it still has an oracle
    floor = 3.0 * SI.c / (2.0 * math.pi * cavity.r0)
    return enumerate_sphere_modes(cavity, max(default_nu_max(nu_hi, rel * nu_hi), floor))


def compare_with_oracle(cavity: SphericalCavity, nu, rel: float, *, modes: ModeList | None = None,
                        curvature: str = DEFAULT_CURVATURE, p_max: int = DEFAULT_P_MAX,
                        half_length_phase: bool = False) -> OracleComparison:
    """Smoothed oracle density minus smooth terms, against the resolution-weighted orbit sum.

    The oracle is smoothed with a Gaussian of standard deviation rel*nu and the
    orbit sum uses the matching GaussianResolution(rel) weight.
    ``rel_rms`` is rms(difference)/rms(orbit sum).
    """
    nu = np.asarray(nu, dtype=float)
    if modes is None:
        modes = oracle_modes_for(cavity, float(nu.max()), rel)
    dn = rel * nu
    rho = smoothed_density(modes, nu, dn)
    smooth = smoothed_weyl(nu, cavity.volume, dn)
    osc_oracle = rho - smooth - curvature_density(cavity, curvature)
    dos = total_density(cavity, nu, (GaussianResolution(rel),), curvature=curvature, p_max=p_max,
                        half_length_phase=half_length_phase)
    osc_sc = dos.rho_oscillatory
    scale = float(np.sqrt(np.mean(osc_sc**2)))
    rel_rms = float(np.sqrt(np.mean((osc_oracle - osc_sc) ** 2))) / scale if scale > 0 else math.inf
    corr = float(np.corrcoef(osc_oracle, osc_sc)[0, 1]) if scale > 0 and np.std(osc_oracle) > 0 else 0.0
    base = rho - smooth - osc_sc
    offsets = {name: float(np.mean(base - curvature_density(cavity, name))) for name in CURVATURE_CONVENTIONS}
    return OracleComparison(nu, osc_oracle, osc_sc, rel_rms, corr, offsets,
                            float(SI.c / (nu.min() * cavity.length)))
