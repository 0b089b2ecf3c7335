"""Cavity descriptors and the periodic orbits of the spherical cavity.

Sphere orbits are planar regular polygons labelled by ``(p, t)``: ``p`` even
vertices, ``t`` turns about the centre, ``p >= 2t``.  The chord of a (p, t)
orbit subtends the central angle ``2*phi`` with ``phi = pi*t/p``, so the
orbit length is ``2*p*r0*sin(phi)``.  The isosceles triangle formed by one
chord and two radii puts the ray at ``pi/2 - phi`` from the surface normal;
``p = 2t`` is the diameter traversed ``t`` times (normal incidence).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from math import gcd, pi
from pathlib import Path

import numpy as np

from .constants import SI

# Polygon families accumulate at length 2*pi*t*r0 as p grows, so any
# enumeration past that length must cap p.  Amplitudes fall off as p**-2.
DEFAULT_P_MAX = 1000

ORBIT_CSV_COLUMNS = ("l_p", "r", "amplitude", "maslov", "polarization_factor", "reflections")


class OpenCavityWarning(UserWarning):
    """Aperture too large for periodic orbits to survive."""


@dataclass(frozen=True)
class SphericalCavity:
    """Perfectly conducting sphere of radius ``r0`` with an optional aperture."""

    r0: float
    aperture_area: float = 0.0

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError(f"r0 must be positive, got {self.r0!r}")
        if not self.aperture_area >= 0:
            raise ValueError(f"aperture_area must be >= 0, got {self.aperture_area!r}")
        if not self.openness_ok:
            warnings.warn(
                f"aperture area {self.aperture_area:.3g} m^2 exceeds 10% of "
                f"(2/3)*pi^2*r0^2 = {self.aperture_bound:.3g} m^2; long orbits "
                "will not be visible", OpenCavityWarning, stacklevel=2)

    n = 3

    @property
    def volume(self) -> float:
        return 4.0 / 3.0 * pi * self.r0**3

    @property
    def curvature(self) -> float:
        return 4.0 * pi * self.r0

    @property
    def length(self) -> float:
        return self.r0

    @property
    def shortest_orbit(self) -> float:
        return 4.0 * self.r0

    @property
    def aperture_bound(self) -> float:
        return 2.0 / 3.0 * pi**2 * self.r0**2

    @property
    def openness_ok(self) -> bool:
        return self.aperture_area <= 0.1 * self.aperture_bound


@dataclass(frozen=True)
class OrbitTerm:
    """One entry of a generic periodic-orbit table.

    ``l_p`` is the primitive length and ``r`` the repetition number; the
    contribution oscillates with the total length ``r*l_p``.  ``amplitude``
    multiplies ``(nu/nu_ref)**nu_exponent``; when ``nu_exponent`` is None the
    cavity's ``n/2`` is used.  ``incidence`` (angle from the surface normal)
    is only needed by the total-internal-reflection cutoff.
    """

    l_p: float
    amplitude: float
    maslov: float = 0.0
    r: int = 1
    polarization_factor: float = 2.0
    reflections: int = 2
    incidence: float | None = None
    nu_exponent: float | None = None

    def __post_init__(self):
        if not self.l_p > 0:
            raise ValueError(f"orbit length must be positive, got {self.l_p!r}")
        if int(self.r) != self.r or self.r < 1:
            raise ValueError(f"repetition must be a positive integer, got {self.r!r}")
        if not -2.0 <= self.polarization_factor <= 2.0:
            raise ValueError("polarization_factor must lie in [-2, 2]")
        if int(self.reflections) != self.reflections or self.reflections < 2 or self.reflections % 2:
            raise ValueError("only orbits with an even, positive number of reflections contribute")

    @property
    def length(self) -> float:
        return self.r * self.l_p

    @property
    def tau_p(self) -> float:
        return self.l_p / SI.c


@dataclass(frozen=True)
class GenericCavity:
    """Cavity described by its smooth parameters and a supplied orbit table.

    ``n`` is the number of symmetry axes (0, 2 or 3).  Amplitude prefactors
    are caller-supplied; only their frequency scaling is fixed here.
    """

    L: float
    V: float
    C: float
    n: int
    orbits: tuple = ()
    aperture_area: float = 0.0
    nu_ref: float = 1.0

    def __post_init__(self):
        if self.n == 1:
            raise ValueError("cavities with one symmetry axis (n=1) are not supported: "
                             "no orbit-sum coefficients are available for that class")
        if self.n not in (0, 2, 3):
            raise ValueError(f"symmetry-axis count must be 0, 2 or 3, got {self.n!r}")
        if not (self.L > 0 and self.V > 0):
            raise ValueError("L and V must be positive")
        if not self.C >= 0:
            raise ValueError("mean curvature C must be >= 0")
        if not self.aperture_area >= 0:
            raise ValueError("aperture_area must be >= 0")
        if not self.nu_ref > 0:
            raise ValueError("nu_ref must be positive")
        orbits = tuple(sorted(self.orbits, key=lambda o: o.length))
        object.__setattr__(self, "orbits", orbits)

    @property
    def volume(self) -> float:
        return self.V

    @property
    def curvature(self) -> float:
        return self.C

    @property
    def length(self) -> float:
        return self.L

    @property
    def shortest_orbit(self) -> float | None:
        return self.orbits[0].length if self.orbits else None


@dataclass(frozen=True)
class PolygonOrbit:
    """Planar (p, t) periodic orbit of a sphere of radius ``r0``."""

    p: int
    t: int
    r0: float
    phi: float = field(init=False)
    length: float = field(init=False)
    incidence_from_normal: float = field(init=False)

    def __post_init__(self):
        if self.p < 2 or self.p % 2:
            raise ValueError(f"vertex count must be even and >= 2, got p={self.p}")
        if self.t < 1 or 2 * self.t > self.p:
            raise ValueError(f"need 1 <= t and 2t <= p, got (p, t)=({self.p}, {self.t})")
        phi = pi * self.t / self.p
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "length", 2.0 * self.p * self.r0 * math.sin(phi))
        object.__setattr__(self, "incidence_from_normal", pi / 2 - phi)

    @property
    def is_diameter(self) -> bool:
        return self.p == 2 * self.t

    @property
    def reflections(self) -> int:
        return self.p

    @property
    def repetitions(self) -> int:
        return gcd(self.p, self.t)

    @property
    def incidence(self) -> float:
        return self.incidence_from_normal


def mean_curvature(cavity) -> float:
    """Integrated mean curvature C (4*pi*r0 for a sphere)."""
    return cavity.curvature


def enumerate_sphere_orbits(cavity: SphericalCavity, l_max: float, p_max: int = DEFAULT_P_MAX,
                            require_nonempty: bool = False) -> list[PolygonOrbit]:
    """All (p, t) orbits with length <= l_max and p <= p_max, sorted by length.

    Every (p, t) pair is its own entry, so repeated traversals of a primitive
    polygon appear separately (e.g. (4, 2) is the diameter twice).
    """
    if not l_max > 0:
        raise ValueError(f"l_max must be positive, got {l_max!r}")
    r0 = cavity.r0
    if require_nonempty and l_max < 4 * r0:
        raise ValueError(f"l_max={l_max!r} is shorter than the diameter orbit 4*r0={4 * r0!r}")
    pt = sphere_orbit_pairs(r0, l_max, p_max)
    return [PolygonOrbit(int(p), int(t), r0) for p, t in pt]


def sphere_orbit_pairs(r0: float, l_max: float, p_max: int = DEFAULT_P_MAX) -> np.ndarray:
    """(p, t) pairs of sphere orbits up to ``l_max``, as an (m, 2) int array sorted by length."""
    rows = []
    lengths = []
    t = 1
    while 4.0 * r0 * t <= l_max and 2 * t <= p_max:
        p = np.arange(2 * t, p_max + 1, 2)
        L = 2.0 * p * r0 * np.sin(pi * t / p)
        keep = L <= l_max
        rows.append(np.column_stack([p[keep], np.full(keep.sum(), t)]))
        lengths.append(L[keep])
        t += 1
    if not rows:
        return np.empty((0, 2), dtype=int)
    pt = np.concatenate(rows)
    L = np.concatenate(lengths)
    order = np.lexsort((pt[:, 1], pt[:, 0], L))
    return pt[order]


def orbit_incidence_filter(orbit, theta_c: float) -> bool:
    """True if the orbit is totally internally reflected (incidence > theta_c)."""
    if not 0.0 <= theta_c <= pi / 2:
        raise ValueError(f"critical angle must lie in [0, pi/2], got {theta_c!r}")
    return orbit.incidence_from_normal > theta_c


def read_orbit_table(path) -> list[OrbitTerm]:
    """Load an orbit table from CSV (SI units, radians).

    Required columns are ``l_p,r,amplitude,maslov,polarization_factor,reflections``;
    optional ``incidence`` and ``nu_exponent`` columns are honoured.
    """
    orbits = []
    with open(Path(path), newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        missing = set(ORBIT_CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"orbit table is missing columns: {sorted(missing)}")
        for row in reader:
            orbits.append(OrbitTerm(
                l_p=float(row["l_p"]),
                r=int(row["r"]),
                amplitude=float(row["amplitude"]),
                maslov=float(row["maslov"]),
                polarization_factor=float(row["polarization_factor"]),
                reflections=int(row["reflections"]),
                incidence=float(row["incidence"]) if row.get("incidence") not in (None, "") else None,
                nu_exponent=float(row["nu_exponent"]) if row.get("nu_exponent") not in (None, "") else None,
            ))
    return orbits


def write_orbit_table(orbits, path) -> None:
    columns = ORBIT_CSV_COLUMNS + ("incidence", "nu_exponent")
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for o in orbits:
            w.writerow([repr(float(o.l_p)), o.r, repr(float(o.amplitude)), repr(float(o.maslov)),
                        repr(float(o.polarization_factor)), o.reflections,
                        "" if o.incidence is None else repr(float(o.incidence)),
                        "" if o.nu_exponent is None else repr(float(o.nu_exponent))])
