"""Blackbody radiation in finite cavities: periodic-orbit corrections to the
Planck spectrum and the Stefan-Boltzmann law, checked against exact modes."""

__version__ = "0.1.0"

from .constants import (SI, PhysicalConstants, ThermalState, mode_energy, planck_exitance_quadrature,
                        planck_u_infinite, stefan_boltzmann_infinite, thermal_parameter, weyl_density)
from .geometry import (DEFAULT_P_MAX, GenericCavity, OrbitTerm, PolygonOrbit, SphericalCavity,
                       enumerate_sphere_orbits, mean_curvature, orbit_incidence_filter,
                       read_orbit_table, write_orbit_table)
from .dos import (CURVATURE_CONVENTIONS, DosBreakdown, ExponentialEscape, GaussianResolution,
                  HardLength, NoCutoff, TotalInternalReflection, UnboundedSeriesError,
                  curvature_density, generic_oscillatory_density, orbit_weight,
                  sphere_oscillatory_density, sphere_orbit_table, total_density)
from .spectrum import SpectrumSample, figure1_spectrum, modified_planck, spectrum_sweep
from .exitance import (ExitanceBreakdown, OrbitSumCoefficients, corrected_exitance, curvature_exitance,
                       generic_b_coefficients, oscillatory_exitance, rescaled_exitance,
                       sphere_b_coefficients, sphere_state_for_x)
from .fluctuations import (FormFactorModel, energy_density_relative_variance, escape_length,
                           exitance_variance, heisenberg_time)
from .oracle import (TE, TM, ModeList, counting_staircase, direct_exitance, enumerate_sphere_modes,
                     smoothed_density, weyl_residual_fit)
from .validation import OracleComparison, compare_with_oracle
