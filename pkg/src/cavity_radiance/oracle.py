"""Exact electromagnetic eigenmodes of a perfectly conducting sphere.

With ``x = 2*pi*nu*r0/c`` the resonance conditions are

    TE_l:  j_l(x) = 0
    TM_l:  d/dx [x j_l(x)] = 0

for angular index ``l >= 1`` (there is no l = 0 electromagnetic mode: a
monopole field would need a radial magnetic or electric field with no
angular dependence, which Maxwell's equations forbid), each ``2l+1``-fold
degenerate.  Neither condition has a root below ``x = sqrt(l(l+1))``: below
that point the radial equation is non-oscillatory and both x*j_l and its
derivative stay positive.  Roots are bracketed by a uniform scan from that
point and refined by bisection.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from math import pi
from pathlib import Path

import numpy as np
from scipy.special import erf, spherical_jn

from .constants import PLANCK_TAIL, SI, _temperature, exitance_from_spectrum, mode_energy

TE, TM = 0, 1
FAMILY_NAMES = {TE: "TE", TM: "TM"}
_FAMILY_CODES = {"TE": TE, "TM": TM}

SCAN_STEP = pi / 8
ROOT_RTOL = 1e-12
MODE_CSV_COLUMNS = ("family", "l", "k", "x_root", "nu_hz", "degeneracy")


class OracleRangeError(ValueError):
    """A query needs modes above the enumeration ceiling."""


class BracketingError(RuntimeError):
    """Root scan produced an inconsistent root sequence."""


def radial_condition(family: int, l, x):
    """TE: j_l(x).  TM: j_l(x) + x j_l'(x)."""
    j = spherical_jn(l, x)
    if family == TE:
        return j
    return j + x * spherical_jn(l, x, derivative=True)


@dataclass(frozen=True)
class ModeList:
    """Eigenmodes sorted by frequency, with per-mode labels."""

    nu: np.ndarray
    x_root: np.ndarray
    family: np.ndarray
    l: np.ndarray
    k: np.ndarray
    r0: float
    nu_max: float
    complete: bool = True

    @property
    def degeneracy(self) -> np.ndarray:
        return 2 * self.l + 1

    def __len__(self):
        return len(self.nu)

    @property
    def total_count(self) -> int:
        return int(self.degeneracy.sum())

    def select(self, family: int) -> "ModeList":
        m = self.family == family
        return ModeList(self.nu[m], self.x_root[m], self.family[m], self.l[m], self.k[m],
                        self.r0, self.nu_max, self.complete)

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            fh.write(f"# r0={self.r0!r} nu_max={self.nu_max!r}\n")
            w = csv.writer(fh)
            w.writerow(MODE_CSV_COLUMNS)
            for f, l, k, x, nu, d in zip(self.family, self.l, self.k, self.x_root, self.nu, self.degeneracy):
                w.writerow([FAMILY_NAMES[int(f)], int(l), int(k), f"{x:.17g}", f"{nu:.17g}", int(d)])

    @classmethod
    def from_csv(cls, path, r0: float | None = None, nu_max: float | None = None) -> "ModeList":
        """Read a file written by :meth:`to_csv`; r0 and nu_max default to its header."""
        fam, ls, ks, xs, nus = [], [], [], [], []
        with open(Path(path), newline="") as fh:
            lines = fh.read().splitlines()
        meta = dict(tok.split("=", 1) for l in lines if l.startswith("#") for tok in l[1:].split())
        r0 = float(meta["r0"]) if r0 is None else r0
        nu_max = float(meta["nu_max"]) if nu_max is None else nu_max
        for row in csv.DictReader(l for l in lines if not l.startswith("#")):
            fam.append(_FAMILY_CODES[row["family"]])
            ls.append(int(row["l"]))
            ks.append(int(row["k"]))
            xs.append(float(row["x_root"]))
            nus.append(float(row["nu_hz"]))
        return cls(np.array(nus), np.array(xs), np.array(fam), np.array(ls), np.array(ks), r0, nu_max)


def _bisect(family, l, lo, hi, rtol=ROOT_RTOL):
    flo = radial_condition(family, l, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = radial_condition(family, l, mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= rtol * hi):
            break
    return 0.5 * (lo + hi)


def family_roots(family: int, x_max: float, step: float = SCAN_STEP):
    """All roots up to ``x_max`` for one family; returns (x, l, k) arrays."""
    lo_all, hi_all, l_all = [], [], []
    l = 1
    while math.sqrt(l * (l + 1)) < x_max:
        x0 = math.sqrt(l * (l + 1))
        grid = np.arange(x0, x_max + step, step)
        v = radial_condition(family, l, grid)
        if np.any(v == 0):
            # nudge exact grid hits so every root sits strictly inside a bracket
            grid = grid + 0.5 * step * (v == 0)
            v = radial_condition(family, l, grid)
        idx = np.nonzero(v[:-1] * v[1:] < 0)[0]
        lo_all.append(grid[idx])
        hi_all.append(grid[idx + 1])
        l_all.append(np.full(len(idx), l))
        l += 1
    if not lo_all:
        return np.empty(0), np.empty(0, int), np.empty(0, int)
    lo = np.concatenate(lo_all)
    hi = np.concatenate(hi_all)
    ls = np.concatenate(l_all)
    x = _bisect(family, ls, lo, hi)
    keep = x <= x_max
    x, ls = x[keep], ls[keep]
    order = np.lexsort((x, ls))
    x, ls = x[order], ls[order]
    k = np.empty_like(ls)
    starts = np.r_[0, np.nonzero(np.diff(ls))[0] + 1]
    for s, e in zip(starts, np.r_[starts[1:], len(ls)]):
        k[s:e] = np.arange(1, e - s + 1)
    _check_interlacing(family, x, ls, x_max)
    return x, ls, k


def _check_interlacing(family, x, ls, x_max):
    """Roots of consecutive l must interlace; anything else means a missed root."""
    by_l = {}
    for l in np.unique(ls):
        by_l[int(l)] = x[ls == l]
    for l, roots in by_l.items():
        if np.any(np.diff(roots) <= 0):
            raise BracketingError(f"{FAMILY_NAMES[family]} l={l}: roots not strictly increasing")
        nxt = by_l.get(l + 1)
        if nxt is None:
            continue
        # each gap between consecutive roots of l holds exactly one root of l+1
        counts = np.histogram(nxt, bins=roots)[0] if len(roots) > 1 else []
        if len(counts) and np.any(counts != 1):
            bad = int(np.nonzero(counts != 1)[0][0])
            raise BracketingError(
                f"{FAMILY_NAMES[family]} roots of l={l + 1} do not interlace with l={l} "
                f"between x={roots[bad]:.6g} and x={roots[bad + 1]:.6g} (x_max={x_max:.6g})")
        if len(nxt) and nxt[0] <= roots[0]:
            raise BracketingError(f"{FAMILY_NAMES[family]} first root of l={l + 1} below that of l={l}")


def enumerate_sphere_modes(cavity, nu_max: float, scan_step: float = SCAN_STEP) -> ModeList:
    """Every TE and TM mode with frequency <= nu_max."""
    r0 = cavity.r0
    x_max = 2.0 * pi * nu_max * r0 / SI.c
    # lowest mode of the sphere is TM_11
    if x_max <= 2.7:
        raise OracleRangeError(f"nu_max={nu_max:.4g} Hz lies below the first TM mode")
    xs, fams, ls, ks = [], [], [], []
    for fam in (TE, TM):
        x, l, k = family_roots(fam, x_max, scan_step)
        xs.append(x)
        fams.append(np.full(len(x), fam))
        ls.append(l)
        ks.append(k)
    x = np.concatenate(xs)
    order = np.argsort(x, kind="stable")
    x = x[order]
    return ModeList(nu=x * SI.c / (2.0 * pi * r0), x_root=x, family=np.concatenate(fams)[order],
                    l=np.concatenate(ls)[order], k=np.concatenate(ks)[order], r0=r0, nu_max=nu_max)


def default_nu_max(nu_query_max: float, delta_nu: float = 0.0) -> float:
    """Enumeration ceiling: 1.3x the largest query plus ten kernel widths."""
    return 1.3 * nu_query_max + 10.0 * delta_nu


def counting_staircase(modes: ModeList, nu):
    """N(nu): degeneracy-weighted number of modes with nu_i <= nu."""
    nu = np.asarray(nu, dtype=float)
    if np.any(nu > modes.nu_max):
        raise OracleRangeError(f"staircase queried above nu_max={modes.nu_max:.6g} Hz")
    cum = np.r_[0, np.cumsum(modes.degeneracy)]
    out = cum[np.searchsorted(modes.nu, nu, side="right")]
    return out.item() if out.ndim == 0 else out


def smoothed_density(modes: ModeList, nu, delta_nu, width: float = 10.0):
    """Gaussian-smoothed mode density sum_i g_i G(nu - nu_i; delta_nu) in modes/Hz.

    ``delta_nu`` (standard deviation) may be a scalar or match ``nu``.  Modes
    further than ``width`` standard deviations away are ignored.
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    dn = np.broadcast_to(np.asarray(delta_nu, dtype=float), nu.shape)
    if np.any(dn <= 0):
        raise ValueError("smoothing width must be positive")
    if np.any(nu + 5.0 * dn > modes.nu_max):
        raise OracleRangeError("smoothing window reaches the enumeration ceiling; "
                               "raise nu_max or lower the query frequency")
    deg = modes.degeneracy.astype(float)
    lo = np.searchsorted(modes.nu, nu - width * dn)
    hi = np.searchsorted(modes.nu, nu + width * dn)
    out = np.empty_like(nu)
    norm = 1.0 / (dn * math.sqrt(2.0 * pi))
    for i in range(len(nu)):
        z = (nu[i] - modes.nu[lo[i]:hi[i]]) / dn[i]
        out[i] = norm[i] * np.dot(deg[lo[i]:hi[i]], np.exp(-0.5 * z * z))
    return out


def smoothed_staircase(modes: ModeList, nu, delta_nu):
    """Staircase convolved with a Gaussian of standard deviation delta_nu."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if np.any(nu + 8.0 * delta_nu > modes.nu_max):
        raise OracleRangeError("smoothing window reaches the enumeration ceiling")
    deg = modes.degeneracy.astype(float)
    return np.array([np.dot(deg, 0.5 * (1.0 + erf((v - modes.nu) / (delta_nu * math.sqrt(2.0)))))
                     for v in nu])


@dataclass
class DirectExitance:
    value: float
    tail_bound: float


def direct_exitance(modes: ModeList, cavity, state, full_output: bool = False):
    """Exitance from the discrete mode sum, (c/4V) sum_i g_i eps(nu_i), in W/m^2."""
    T = _temperature(state)
    need = PLANCK_TAIL * SI.k_B * T / SI.h
    eps = np.asarray(mode_energy(modes.nu, T), dtype=float)
    value = exitance_from_spectrum(np.dot(modes.degeneracy, eps) / cavity.volume)
    tail = _tail_bound(modes.nu_max, T)
    if modes.nu_max < need:
        warnings.warn(f"nu_max={modes.nu_max:.4g} Hz is below {PLANCK_TAIL:g} k_B T/h; "
                      f"tail bound {tail:.3g} W/m^2", stacklevel=2)
    if tail > 1e-3 * abs(value):
        raise OracleRangeError(f"Planck tail above nu_max is {tail / value:.2%} of the mode sum; "
                               "enumerate to a higher nu_max")
    if full_output:
        return DirectExitance(value, tail)
    return value


def _tail_bound(nu_max, T):
    from scipy.integrate import quad

    kT_h = SI.k_B * T / SI.h
    integrand = lambda v: 8 * pi * v**2 / SI.c**3 * mode_energy(v, T)
    top = max(nu_max, (PLANCK_TAIL + 40) * kT_h)
    val, _ = quad(integrand, nu_max, top, limit=200)
    return exitance_from_spectrum(val)


@dataclass
class WeylFit:
    slope: float
    intercept: float
    slope_stderr: float
    nu_lo: float
    nu_hi: float


def weyl_residual_fit(modes: ModeList, nu_lo: float | None = None, nu_hi: float | None = None,
                      points: int = 400, window: float | None = None) -> WeylFit:
    """Linear fit of the running mean of N(nu) - (8 pi V/3 c^3) nu^3.

    The running mean is a boxcar of width ``window`` (default ten diameter
    periods, 10*c/(4 r0)), which averages out the orbit oscillations; the
    cubic term is averaged over the same window exactly.  The default range
    is the upper half of the enumeration.
    """
    r0 = modes.r0
    V = 4.0 / 3.0 * pi * r0**3
    w = 10.0 * SI.c / (4.0 * r0) if window is None else window
    nu_lo = 0.5 * modes.nu_max if nu_lo is None else nu_lo
    nu_hi = modes.nu_max - 0.5 * w if nu_hi is None else nu_hi
    if nu_hi + 0.5 * w > modes.nu_max or nu_lo - 0.5 * w < 0 or nu_hi <= nu_lo:
        raise OracleRangeError("fit window does not fit inside the enumerated range")
    centres = np.linspace(nu_lo, nu_hi, points)
    cum = np.r_[0.0, np.cumsum(modes.degeneracy)]
    a, b = centres - 0.5 * w, centres + 0.5 * w
    # integral of the staircase over [a, b] = sum_i g_i (b - nu_i)^+ - (a - nu_i)^+
    nu_i = modes.nu
    first = np.r_[0.0, np.cumsum(modes.degeneracy * nu_i)]
    ia = np.searchsorted(nu_i, a, side="right")
    ib = np.searchsorted(nu_i, b, side="right")
    int_b = b * cum[ib] - first[ib]
    int_a = a * cum[ia] - first[ia]
    mean_N = (int_b - int_a) / w
    k3 = 8.0 * pi * V / (3.0 * SI.c**3)
    mean_weyl = k3 * (b**4 - a**4) / (4.0 * w)
    resid = mean_N - mean_weyl
    A = np.column_stack([centres, np.ones_like(centres)])
    coef, res, *_ = np.linalg.lstsq(A, resid, rcond=None)
    dof = max(len(centres) - 2, 1)
    s2 = float(np.sum((resid - A @ coef) ** 2)) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return WeylFit(float(coef[0]), float(coef[1]), float(math.sqrt(cov[0, 0])), float(nu_lo), float(nu_hi))
