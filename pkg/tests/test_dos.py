import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_radiance.constants import SI, weyl_density
from cavity_radiance.dos import (CURVATURE_CONVENTIONS, ExponentialEscape, GaussianResolution, HardLength,
                                 NoCutoff, SemiclassicalValidityWarning, TotalInternalReflection,
                                 UnboundedSeriesError, curvature_density, generic_oscillatory_density,
                                 orbit_weight, policy_weights, sphere_oscillatory_density,
                                 sphere_orbit_table, stop_length, suppress_all_orbits, total_density)
from cavity_radiance.geometry import GenericCavity, OrbitTerm, PolygonOrbit, SphericalCavity

R0 = 0.02
CAV = SphericalCavity(R0)


def test_curvature_density_conventions():
    assert curvature_density(CAV, "positive") == pytest.approx(8 * R0 / (3 * SI.c), rel=1e-14)
    assert curvature_density(CAV, "positive") == pytest.approx(1.78e-10, rel=2e-3)
    assert curvature_density(CAV, "conductor") == pytest.approx(-16 * R0 / (3 * SI.c), rel=1e-14)
    assert curvature_density(CAV) == curvature_density(CAV, "conductor")
    g = GenericCavity(L=R0, V=CAV.volume, C=4 * math.pi * R0, n=3)
    for name in CURVATURE_CONVENTIONS:
        assert curvature_density(g, name) == curvature_density(CAV, name)
    assert curvature_density(GenericCavity(L=1, V=1, C=0, n=0)) == 0.0
    with pytest.raises(ValueError):
        curvature_density(CAV, "bogus")


def test_orbit_weight_examples():
    d = PolygonOrbit(2, 1, R0)
    assert orbit_weight(d, [], 3e11) == 1.0
    assert orbit_weight(OrbitTerm(0.5, 1.0), [ExponentialEscape(0.5)], 1e11) == pytest.approx(math.exp(-1))
    w = orbit_weight(OrbitTerm(0.2, 1.0), [GaussianResolution(5e-3)], 3e11)
    expected = math.exp(-0.5 * (2 * math.pi * 1.5e9 * 0.2 / SI.c) ** 2)
    assert w == pytest.approx(expected, rel=1e-12)
    assert w == pytest.approx(2.7e-9, rel=0.05)
    assert orbit_weight(d, [TotalInternalReflection(1.5, 1.0)], 1e11) == 0.0
    assert orbit_weight(PolygonOrbit(6, 1, R0), [TotalInternalReflection(1.5, 1.0)], 1e11) == 1.0
    assert orbit_weight(d, [HardLength(l_cut=0.079)], 1e11) == 0.0
    assert orbit_weight(d, [HardLength(wavelengths=200)], 3e11) == 1.0


def test_weights_multiply():
    o = OrbitTerm(0.3, 1.0)
    pols = [ExponentialEscape(0.5), GaussianResolution(1e-3)]
    prod = orbit_weight(o, pols[:1], 2e11) * orbit_weight(o, pols[1:], 2e11)
    assert orbit_weight(o, pols, 2e11) == pytest.approx(prod, rel=1e-15)


@pytest.mark.parametrize("bad", [lambda: HardLength(), lambda: HardLength(l_cut=1, wavelengths=2),
                                 lambda: HardLength(l_cut=-1), lambda: ExponentialEscape(0),
                                 lambda: GaussianResolution(0), lambda: GaussianResolution(1.0),
                                 lambda: TotalInternalReflection(1.0, 1.5),
                                 lambda: TotalInternalReflection(1.0, 0.0)])
def test_policy_validation(bad):
    with pytest.raises(ValueError):
        bad()


POLICIES = [NoCutoff(), HardLength(l_cut=0.3), HardLength(wavelengths=50), ExponentialEscape(0.2),
            GaussianResolution(5e-3), TotalInternalReflection(1.5, 1.0)]


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 5.0), st.floats(1e-3, 5.0), st.floats(1e9, 1e13), st.sampled_from(POLICIES))
def test_weight_non_increasing_in_length(l1, l2, nu, pol):
    lo, hi = sorted((l1, l2))
    w_lo = float(policy_weights([pol], lo, 0.5, nu))
    w_hi = float(policy_weights([pol], hi, 0.5, nu))
    assert 0.0 <= w_hi <= w_lo <= 1.0


def test_stop_length_rules():
    assert stop_length([ExponentialEscape(1.0)], 1e11) == pytest.approx(-math.log(1e-8))
    assert stop_length([HardLength(l_cut=0.3), ExponentialEscape(1.0)], 1e11) == 0.3
    g = GaussianResolution(5e-3)
    L = stop_length([g], 1e11)
    assert float(policy_weights([g], L, None, 1e11)) == pytest.approx(1e-8, rel=1e-6)
    with pytest.raises(UnboundedSeriesError):
        stop_length([], 1e11)
    with pytest.raises(UnboundedSeriesError):
        stop_length([NoCutoff(), TotalInternalReflection(1.5, 1.0)], 1e11)


def test_sphere_sum_requires_bounding_policy():
    with pytest.raises(UnboundedSeriesError):
        sphere_oscillatory_density(CAV, 3e11, [NoCutoff()])


def test_sphere_sum_zero_when_everything_suppressed():
    nu = np.linspace(1e11, 2e11, 7)
    assert np.all(sphere_oscillatory_density(CAV, nu, suppress_all_orbits()) == 0.0)
    both = [HardLength(l_cut=0.1), TotalInternalReflection(1.5, 1.0)]  # only the diameter, then removed
    assert np.all(sphere_oscillatory_density(CAV, nu, both) == 0.0)


def test_diameter_period():
    nu = np.linspace(1e11, 1e11 + 400 * SI.c / (4 * R0), 2**15, endpoint=False)
    rho = sphere_oscillatory_density(CAV, nu, [HardLength(l_cut=0.1)])
    amp = np.abs(np.fft.rfft(rho / nu))
    tau = np.fft.rfftfreq(len(nu), nu[1] - nu[0])
    peak = tau[1 + np.argmax(amp[1:])]
    assert peak == pytest.approx(4 * R0 / SI.c, rel=1e-3)
    assert 1 / peak == pytest.approx(3.748e9, rel=1e-3)


def test_diameter_term_closed_form():
    nu = np.array([1.23e11, 2.71e11])
    rho = sphere_oscillatory_density(CAV, nu, [HardLength(l_cut=0.1)])
    V = CAV.volume
    expected = -V * 2 * math.pi / SI.c * 3 * nu / (SI.c * R0 * math.pi) * np.sin(8 * math.pi * nu * R0 / SI.c)
    assert rho == pytest.approx(expected, rel=1e-10)


def test_half_length_phase_option_differs():
    nu = np.linspace(1.5e11, 2e11, 50)
    pol = [GaussianResolution(5e-3)]
    a = sphere_oscillatory_density(CAV, nu, pol)
    b = sphere_oscillatory_density(CAV, nu, pol, half_length_phase=True)
    assert not np.allclose(a, b)
    # the diameter family is unaffected
    d = [HardLength(l_cut=0.1)]
    assert np.array_equal(sphere_oscillatory_density(CAV, nu, d),
                          sphere_oscillatory_density(CAV, nu, d, half_length_phase=True))


def test_sphere_diagnostics():
    rho, diag = sphere_oscillatory_density(CAV, np.array([3e11]), [GaussianResolution(5e-3)], full_output=True)
    assert diag.n_orbits > 10
    assert 0 < diag.truncation_estimate < 1e-8 * weyl_density(3e11, CAV.volume)
    assert diag.lambda_over_L == pytest.approx(SI.c / (3e11 * R0))


def test_validity_warning():
    with pytest.warns(SemiclassicalValidityWarning):
        sphere_oscillatory_density(CAV, np.array([1e10]), [HardLength(l_cut=0.1)])


def test_generic_export_reproduces_sphere():
    nu = np.linspace(1.5e11, 3e11, 301)
    pol = [GaussianResolution(5e-3)]
    l_stop = stop_length(pol, nu.min())
    table = sphere_orbit_table(CAV, l_stop)
    g = GenericCavity(L=R0, V=CAV.volume, C=CAV.curvature, n=3, orbits=tuple(table))
    a = sphere_oscillatory_density(CAV, nu, pol)
    b = generic_oscillatory_density(g, nu, pol)
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(a))


def test_generic_single_orbit_zero_and_scaling():
    l = 0.3
    g = GenericCavity(L=0.1, V=1e-3, C=0, n=0, orbits=(OrbitTerm(l, 1.0, maslov=math.pi / 2),))
    nu = SI.c / l  # phase 2 pi
    assert abs(generic_oscillatory_density(g, [nu])[0]) < 1e-12
    h = GenericCavity(L=0.1, V=1e-3, C=0, n=0, orbits=(OrbitTerm(l, 0.7, maslov=0.4),))
    h2 = GenericCavity(L=0.2, V=8e-3, C=0, n=0, orbits=(OrbitTerm(2 * l, 0.7, maslov=0.4),))
    nu = np.linspace(1e10, 3e10, 11)
    assert generic_oscillatory_density(h, nu) == pytest.approx(generic_oscillatory_density(h2, nu / 2), rel=1e-12)
    with pytest.raises(ValueError):
        generic_oscillatory_density(GenericCavity(L=1, V=1, C=0, n=0), nu)


def test_generic_frequency_scaling():
    o = OrbitTerm(0.25, 2.0, polarization_factor=2.0)
    g = GenericCavity(L=0.1, V=1e-3, C=0, n=2, orbits=(o,), nu_ref=1e10)
    nu = SI.c / 0.25 * np.array([40.0, 80.0])  # cos = 1 at both
    rho = generic_oscillatory_density(g, nu)
    assert rho == pytest.approx(2.0 * 2.0 * nu / 1e10, rel=1e-10)


def test_total_density_bookkeeping():
    nu = np.linspace(1e11, 3e11, 21)
    b = total_density(CAV, nu, suppress_all_orbits())
    assert np.array_equal(b.total, b.rho_volume + b.rho_curvature)
    b = total_density(CAV, nu, [GaussianResolution(5e-3)])
    assert b.total == pytest.approx(b.rho_volume + b.rho_curvature + b.rho_oscillatory, rel=1e-15)
    assert np.all(b.rho_volume >= 0)
    p = total_density(CAV, np.array([3e11]), suppress_all_orbits(), curvature="positive")
    assert p.rho_volume[0] / p.rho_curvature == pytest.approx(1.58e4, rel=5e-3)


def test_total_density_linear_in_table():
    o1, o2 = OrbitTerm(0.2, 1e-3, maslov=0.1), OrbitTerm(0.37, 2e-3, maslov=1.3, r=2)
    nu = np.linspace(1e11, 2e11, 31)
    mk = lambda orbs: GenericCavity(L=0.05, V=1e-4, C=0.1, n=0, orbits=orbs)
    both = total_density(mk((o1, o2)), nu, [ExponentialEscape(0.5)]).rho_oscillatory
    s = (total_density(mk((o1,)), nu, [ExponentialEscape(0.5)]).rho_oscillatory
         + total_density(mk((o2,)), nu, [ExponentialEscape(0.5)]).rho_oscillatory)
    assert both == pytest.approx(s, rel=1e-12, abs=1e-20)


def test_relative_envelope_decays_as_inverse_sqrt_nu():
    nu = np.geomspace(5e10, 2e12, 4000)
    r = sphere_oscillatory_density(CAV, nu, [HardLength(l_cut=1.0)]) / weyl_density(nu, CAV.volume)
    edges = np.searchsorted(nu, np.geomspace(nu[0], nu[-1], 21))
    peak = [np.max(np.abs(r[a:b])) for a, b in zip(edges[:-1], edges[1:])]
    centre = [math.sqrt(nu[a] * nu[b - 1]) for a, b in zip(edges[:-1], edges[1:])]
    slope = np.polyfit(np.log(centre), np.log(peak), 1)[0]
    assert -0.6 <= slope <= -0.4
