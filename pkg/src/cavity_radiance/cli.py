"""Command-line front end: ``cavity-radiance <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 oracle range error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .constants import SI, stefan_boltzmann_infinite
from .dos import (CURVATURE_CONVENTIONS, DEFAULT_CURVATURE, ExponentialEscape, GaussianResolution,
                  HardLength, NoCutoff, TotalInternalReflection, UnboundedSeriesError, policy_weights)
from .exitance import (CURVATURE_NORMALIZATIONS, DEFAULT_NORMALIZATION, corrected_exitance,
                       oscillatory_exitance, rescaled_exitance, sphere_state_for_x)
from .export import gnuplot_stub, render
from .fluctuations import (energy_density_relative_variance, escape_length, exitance_variance,
                           heisenberg_time)
from .geometry import DEFAULT_P_MAX, GenericCavity, SphericalCavity, enumerate_sphere_orbits
from .oracle import OracleRangeError
from .spectrum import spectrum_sweep
from .validation import compare_with_oracle, oracle_modes_for

EXIT_OK, EXIT_CONFIG, EXIT_ORACLE = 0, 2, 3
SUBCOMMANDS = ("spectrum", "exitance", "oracle-compare", "fluctuations", "orbits")

PRESETS = {
    "figure1": dict(r0=0.02, temp=5.0, numin=1.0e11, numax=6.0e11, points=2048,
                    policies=["hardw:200"]),
    "inset": dict(r0=0.02, xmin=1.0, xmax=6.0, points=51),
    # spectrometer resolution of the far-infrared satellite instrument
    "firas": dict(r0=0.02, temp=5.0, numin=1.0e11, numax=6.0e11, points=2048,
                  policies=["resolution:5e-3"]),
    "sonoluminescence": dict(r0=1.0e-6, temp=1.0e4, numin=2.0e15, numax=6.0e15, points=1024,
                             policies=["tir:1.5,1.0", "resolution:2e-2"]),
}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    subcommand: str
    preset: str | None = None
    r0: float = 0.02
    temp: float = 5.0
    numin: float = 1.0e11
    numax: float = 6.0e11
    points: int = 512
    grid: str = "linear"
    policies: list = field(default_factory=list)
    out: str | None = None
    format: str = "csv"
    curvature: str = DEFAULT_CURVATURE
    normalization: str = DEFAULT_NORMALIZATION
    p_max: int = DEFAULT_P_MAX
    half_length_phase: bool = False
    gnuplot: bool = False
    # exitance
    xmin: float | None = None
    xmax: float | None = None
    with_orbits: bool = False
    # oracle-compare
    resolution: float = 5.0e-3
    rms_tol: float = 0.10
    corr_tol: float = 0.95
    # orbits
    lmax: float | None = None
    nu: float | None = None
    # fluctuations
    L: float | None = None
    volume: float | None = None
    lmin: float | None = None
    aperture: float = 0.0
    tau_ratio: float | None = None

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError("subcommand", f"must be one of {SUBCOMMANDS}")
        for name in ("r0", "temp", "numin", "numax"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(name, f"must be a positive number, got {v!r}")
        if not self.numin < self.numax:
            raise ConfigError("numin", "grid minimum must be below the maximum")
        if self.points < 2:
            raise ConfigError("points", "need at least 2 grid points")
        if self.grid not in ("linear", "log"):
            raise ConfigError("grid", "must be 'linear' or 'log'")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "must be 'csv' or 'json'")
        if self.curvature not in CURVATURE_CONVENTIONS:
            raise ConfigError("curvature", f"must be one of {sorted(CURVATURE_CONVENTIONS)}")
        if self.normalization not in CURVATURE_NORMALIZATIONS:
            raise ConfigError("normalization", f"must be one of {sorted(CURVATURE_NORMALIZATIONS)}")
        if not 0 < self.resolution < 1:
            raise ConfigError("resolution", "relative resolution must lie in (0, 1)")
        if self.aperture < 0:
            raise ConfigError("aperture", "must be >= 0")
        if (self.xmin is None) != (self.xmax is None):
            raise ConfigError("xmin", "give both xmin and xmax")
        if self.xmin is not None and not 0 < self.xmin < self.xmax:
            raise ConfigError("xmin", "need 0 < xmin < xmax")
        for text in self.policies:
            parse_policy(text)
        return self

    def frequency_grid(self) -> np.ndarray:
        if self.grid == "log":
            return np.geomspace(self.numin, self.numax, self.points)
        return np.linspace(self.numin, self.numax, self.points)


def parse_policy(text: str):
    """``hard:LCUT_M``, ``hardw:N`` (N wavelengths), ``escape:LESC_M``,
    ``resolution:REL``, ``tir:N1,N2`` or ``none``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "none":
            return NoCutoff()
        if kind == "hard":
            return HardLength(l_cut=float(arg))
        if kind == "hardw":
            return HardLength(wavelengths=float(arg))
        if kind == "escape":
            return ExponentialEscape(float(arg))
        if kind == "resolution":
            return GaussianResolution(float(arg))
        if kind == "tir":
            n1, n2 = (float(v) for v in arg.split(","))
            return TotalInternalReflection(n1, n2)
    except ValueError as exc:
        raise ConfigError("policy", f"bad policy {text!r}: {exc}") from None
    raise ConfigError("policy", f"unknown policy kind in {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cavity-radiance",
                                 description="Blackbody radiation in finite cavities.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--r0", type=float, help="sphere radius [m]")
    common.add_argument("--temp", type=float, help="temperature [K]")
    common.add_argument("--numin", type=float, help="lowest frequency [Hz]")
    common.add_argument("--numax", type=float, help="highest frequency [Hz]")
    common.add_argument("--points", type=int)
    common.add_argument("--grid", choices=("linear", "log"))
    common.add_argument("--policy", action="append", dest="policies", metavar="POLICY",
                        help="hard:M, hardw:N, escape:M, resolution:REL, tir:N1,N2, none")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--curvature", choices=sorted(CURVATURE_CONVENTIONS))
    common.add_argument("--normalization", choices=sorted(CURVATURE_NORMALIZATIONS))
    common.add_argument("--p-max", type=int, dest="p_max")
    common.add_argument("--half-length-phase", action="store_true", default=None)
    common.add_argument("--gnuplot", action="store_true", default=None,
                        help="also write a gnuplot script next to --out")

    sub.add_parser("spectrum", parents=[common], help="modified Planck spectrum u(nu)")
    p = sub.add_parser("exitance", parents=[common], help="corrected Stefan-Boltzmann law")
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--with-orbits", action="store_true", default=None,
                   help="add the integrated orbit-sum column (slow)")
    p = sub.add_parser("oracle-compare", parents=[common], help="exact modes vs orbit sum")
    p.add_argument("--resolution", type=float, help="relative Gaussian width delta_nu/nu")
    p.add_argument("--rms-tol", type=float, dest="rms_tol")
    p.add_argument("--corr-tol", type=float, dest="corr_tol")
    p = sub.add_parser("fluctuations", parents=[common], help="variance estimates (n = 0)")
    p.add_argument("--L", type=float, dest="L", help="cavity length scale [m]")
    p.add_argument("--volume", type=float)
    p.add_argument("--lmin", type=float, help="shortest orbit [m]")
    p.add_argument("--aperture", type=float, help="aperture area [m^2]")
    p.add_argument("--nu", type=float, help="working frequency [Hz]")
    p.add_argument("--tau-ratio", type=float, dest="tau_ratio")
    p = sub.add_parser("orbits", parents=[common], help="list sphere orbits and weights")
    p.add_argument("--lmax", type=float, help="longest orbit [m]")
    p.add_argument("--nu", type=float, help="frequency for frequency-dependent weights [Hz]")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if ns.preset:
        values.update(PRESETS[ns.preset])
    for k, v in vars(ns).items():
        if v is not None and k != "preset":
            values[k] = v
    values["preset"] = ns.preset
    known = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in values.items() if k in known})
    return cfg.validate()


# --- subcommands ---------------------------------------------------------------


def _policies(cfg):
    return [parse_policy(s) for s in cfg.policies]


def cmd_spectrum(cfg: RunConfig):
    cav = SphericalCavity(cfg.r0)
    s = spectrum_sweep(cav, cfg.temp, cfg.frequency_grid(), _policies(cfg), curvature=cfg.curvature,
                       p_max=cfg.p_max, half_length_phase=cfg.half_length_phase)
    cols = ("nu_hz", "u", "u_planck", "ratio", "lambda_over_L")
    rows = zip(s.nu, s.u, s.u_infinite, s.ratio, s.lambda_over_L)
    return "spectrum", cols, list(rows), {}


def cmd_exitance(cfg: RunConfig):
    cav = SphericalCavity(cfg.r0)
    if cfg.xmin is not None:
        xs = np.linspace(cfg.xmin, cfg.xmax, cfg.points)
        temps = [sphere_state_for_x(x, cfg.r0) for x in xs]
    else:
        temps = [cfg.temp]
    cols = ["x", "temp_k", "r_sca", "ratio", "total", "stefan", "curvature", "linear", "constant"]
    if cfg.with_orbits:
        cols.append("orbit_integral")
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for T in temps:
            b = corrected_exitance(cav, T, cfg.normalization)
            row = [b.x, T, rescaled_exitance(b.x), b.ratio, b.total, b.stefan_term, b.curvature_term,
                   b.linear_term, b.constant_term]
            if cfg.with_orbits:
                row.append(oscillatory_exitance(cav, T, p_max=cfg.p_max))
            rows.append(row)
    return "exitance", tuple(cols), rows, {"normalization": cfg.normalization}


def cmd_oracle_compare(cfg: RunConfig):
    cav = SphericalCavity(cfg.r0)
    nu = cfg.frequency_grid()
    modes = oracle_modes_for(cav, float(nu.max()), cfg.resolution)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cmp = compare_with_oracle(cav, nu, cfg.resolution, modes=modes, curvature=cfg.curvature,
                                  p_max=cfg.p_max, half_length_phase=cfg.half_length_phase)
    out_of_validity = cmp.lambda_over_L > 0.2 or bool(caught)
    cols = ("nu_hz", "oracle_osc", "semiclassical_osc", "residual")
    rows = list(zip(cmp.nu, cmp.oracle_oscillatory, cmp.semiclassical_oscillatory, cmp.residual))
    summary = {
        "rel_rms": cmp.rel_rms, "correlation": cmp.correlation,
        "rms_tol": cfg.rms_tol, "corr_tol": cfg.corr_tol,
        "pass": cmp.passed(cfg.rms_tol, cfg.corr_tol),
        "best_curvature": cmp.best_curvature, "curvature_offsets": cmp.curvature_offsets,
        "lambda_over_L": cmp.lambda_over_L, "out_of_validity": out_of_validity,
        "modes": int(len(modes.nu)), "nu_max": modes.nu_max,
    }
    status = "PASS" if summary["pass"] else "FAIL"
    flag = " [outside semiclassical validity]" if out_of_validity else ""
    print(f"oracle-compare {status}: rel_rms={cmp.rel_rms:.4g} (tol {cfg.rms_tol:g}) "
          f"correlation={cmp.correlation:.4f} (tol {cfg.corr_tol:g}) "
          f"curvature fit: {cmp.best_curvature}{flag}", file=sys.stderr)
    return "oracle-compare", cols, rows, summary


def cmd_fluctuations(cfg: RunConfig):
    L = cfg.L if cfg.L is not None else cfg.r0
    V = cfg.volume if cfg.volume is not None else 4.0 / 3.0 * math.pi * L**3
    lmin = cfg.lmin if cfg.lmin is not None else 4.0 * L
    if not cfg.aperture > 0:
        raise ConfigError("aperture", "zero aperture: escape length undefined for a closed cavity")
    cav = GenericCavity(L=L, V=V, C=0.0, n=0, aperture_area=cfg.aperture)
    nu = cfg.nu if cfg.nu is not None else cfg.numin
    l_esc = escape_length(cav)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        var = exitance_variance(cav, cfg.temp, l_min=lmin, nu=nu, tau_ratio=cfg.tau_ratio, l_esc=l_esc)
    tau_h = float(heisenberg_time(cav, nu))
    cols = ("L", "volume", "l_min", "l_esc", "temp_k", "nu_hz", "tau_h", "tau_min", "var_shortest",
            "var_universal", "var_total", "rms_over_sigma_t4", "rel_var_u", "escape_ok")
    row = (L, V, lmin, l_esc, cfg.temp, nu, tau_h, lmin / SI.c, var.shortest_orbit_term,
           var.universal_term, var.total, var.rms / stefan_boltzmann_infinite(cfg.temp),
           energy_density_relative_variance(nu, l_esc), bool(var.l_esc_ok))
    return "fluctuations", cols, [row], {}


def cmd_orbits(cfg: RunConfig):
    cav = SphericalCavity(cfg.r0)
    lmax = cfg.lmax if cfg.lmax is not None else 10.0 * cfg.r0
    nu = cfg.nu if cfg.nu is not None else cfg.numin
    orbits = enumerate_sphere_orbits(cav, lmax, cfg.p_max)
    pols = _policies(cfg)
    rows = []
    for o in orbits:
        w = float(policy_weights(pols, o.length, o.incidence, nu)) if pols else 1.0
        rows.append((o.p, o.t, o.length, o.incidence, w))
    return "orbits", ("p", "t", "length", "incidence", "weight"), rows, {}


COMMANDS = {"spectrum": cmd_spectrum, "exitance": cmd_exitance, "oracle-compare": cmd_oracle_compare,
            "fluctuations": cmd_fluctuations, "orbits": cmd_orbits}

_PLOT_AXES = {"spectrum": ("nu_hz", ["u", "u_planck"]), "exitance": ("x", ["r_sca", "ratio"]),
              "oracle-compare": ("nu_hz", ["oracle_osc", "semiclassical_osc"]),
              "orbits": ("length", ["weight"]), "fluctuations": ("nu_hz", ["var_total"])}


def run(cfg: RunConfig) -> int:
    kind, cols, rows, extra = COMMANDS[cfg.subcommand](cfg)
    text = render(kind, cols, rows, cfg.format)
    if cfg.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    out = Path(cfg.out)
    out.write_text(text)
    meta = {"schema": f"cavity-radiance.{kind}.meta", "package_version": __version__,
            "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "config": asdict(cfg), "rows": len(rows), **({"summary": extra} if extra else {})}
    Path(str(out) + ".meta.json").write_text(json.dumps(meta, indent=1, default=str) + "\n")
    if cfg.gnuplot and cfg.format == "csv":
        x, ys = _PLOT_AXES[kind]
        Path(str(out) + ".gp").write_text(gnuplot_stub(out.name, cols, x, ys))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except ConfigError as exc:
        print(f"cavity-radiance: configuration error in {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OracleRangeError as exc:
        print(f"cavity-radiance: oracle range error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except UnboundedSeriesError as exc:
        print(f"cavity-radiance: configuration error in policy: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"cavity-radiance: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
