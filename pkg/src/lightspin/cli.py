"""Command-line front end.

Subcommands ``run``, ``sweep``, ``region``, ``report`` and ``schema``.
Exit codes: 0 success, 2 configuration error, 3 numerical abort,
4 resonance guard.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import ellipticity_law, extract_precession_frequency, scaling_exponent
from .constants import CODATA2018
from .fields import LaserConfig
from .integrator import (DEFAULT_N_MAX, MODELS, IntegrationError, IntegratorSettings,
                         default_steps_per_cycle, normalize_scheme, propagate)
from .perturbation import (ResonanceError, closing_wavelength, omega_dirac_spin_density_form,
                           omega_pauli, pauli_components, perturbative_bounds,
                           perturbative_summary, u2_dirac, u2_pauli, u4_dirac_secular)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_RESONANCE = 0, 2, 3, 4

CONFIG_KEYS = ("model", "lambda_nm", "E_hat_Vpm", "eta_rad", "delta_T_cycles", "T_cycles",
               "n_max", "scheme", "steps_per_cycle", "sample_every_cycles")
REQUIRED_KEYS = ("model", "lambda_nm", "E_hat_Vpm", "T_cycles")

SCHEMA = """\
Config file (one `key = value` per line, `#` starts a comment):
  model                dirac | pauli-rel | pauli-nonrel            (required)
  lambda_nm            wavelength in nm                           (required)
  E_hat_Vpm            peak field of each beam in V/m             (required)
  eta_rad              ellipticity phase in rad, (-pi, pi]; `pi/2` style accepted (default pi/2)
  delta_T_cycles       ramp duration in laser cycles              (default 5)
  T_cycles             total interaction time in laser cycles     (required)
  n_max                momentum truncation, >= 4                  (default {n_max})
  scheme               interaction | direct                       (default interaction)
  steps_per_cycle      RK4 steps per laser cycle                  (default: pauli {pauli}; dirac {dirac},
                       growing as (T_cycles/30000)^(1/5) for longer runs)
  sample_every_cycles  sampling stride in whole cycles            (default 1)

Output files (CSV, `.` decimal separator, 17 significant digits):
  spin_timeseries.csv  t_cycles [cycles], s_z_over_hbar [hbar], norm [1],
                       lambda_rho_quarter [1] (Pauli models only)
  sweep.csv            E_hat [V/m], eta [rad], model, omega_fit [rad/s],
                       residual [hbar, RMS of cosine fit], error;
                       trailing `# key = value` summary lines
  region.csv           lambda [m], E_min [V/m], E_max [V/m], nonempty [0/1]
  report --format=csv  quantity, value, unit
  manifest.json        configuration echo, constants fingerprint, settings,
                       version, wall-clock seconds, outputs with SHA-256

Exit codes: 0 ok, 2 config error, 3 numerical abort, 4 resonance guard.
""".format(n_max=DEFAULT_N_MAX, dirac=default_steps_per_cycle("dirac"),
           pauli=default_steps_per_cycle("pauli-rel"))


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration file."""

    model: str
    laser: LaserConfig
    settings: IntegratorSettings

    def echo(self) -> dict:
        return {"model": self.model, "laser": asdict(self.laser),
                "settings": asdict(self.settings.resolved(self.model, self.laser.T_cycles))}


_PI_RE = re.compile(r"^\s*(?P<sign>-)?\s*(?P<num>[0-9.]+)?\s*\*?\s*pi\s*(/\s*(?P<den>[0-9.]+))?\s*$")


def _parse_angle(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        m = _PI_RE.match(text)
        if not m:
            raise
        val = float(m["num"] or 1) * math.pi / float(m["den"] or 1)
        return -val if m["sign"] else val


def parse_config_text(text: str) -> RunConfig:
    """Parse and validate a flat ``key = value`` configuration."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected `key = value`")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{key}: unknown key (allowed: {', '.join(CONFIG_KEYS)})")
        if key in raw:
            raise ConfigError(f"{key}: given more than once")
        raw[key] = value
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"{key}: required key missing")

    def num(key, default=None, conv=float):
        if key not in raw:
            return default
        try:
            v = conv(raw[key])
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {raw[key]!r}") from None
        if isinstance(v, float) and not math.isfinite(v):
            raise ConfigError(f"{key}: must be finite")
        return v

    def integer(text):
        f = float(text)
        if f != int(f):
            raise ValueError
        return int(f)

    model = raw["model"]
    if model not in MODELS:
        raise ConfigError(f"model: must be one of {', '.join(MODELS)}")
    lam = num("lambda_nm")
    E = num("E_hat_Vpm")
    eta = num("eta_rad", math.pi / 2, _parse_angle)
    ramp = num("delta_T_cycles", 5.0)
    T = num("T_cycles")
    n_max = num("n_max", DEFAULT_N_MAX, integer)
    steps = num("steps_per_cycle", None, integer)
    every = num("sample_every_cycles", 1, integer)
    if not lam > 0:
        raise ConfigError("lambda_nm: must be positive")
    if not E >= 0:
        raise ConfigError("E_hat_Vpm: must be non-negative")
    if not -math.pi < eta <= math.pi:
        raise ConfigError(f"eta_rad: {eta} outside the range (-pi, pi]")
    if not ramp >= 0:
        raise ConfigError("delta_T_cycles: must be non-negative")
    if not T > 0 or T < 2 * ramp:
        raise ConfigError("T_cycles: must be positive and at least 2*delta_T_cycles")
    if n_max < 4:
        raise ConfigError("n_max: must be at least 4")
    if steps is not None and steps < 8:
        raise ConfigError("steps_per_cycle: must be at least 8")
    if every < 1:
        raise ConfigError("sample_every_cycles: must be a positive integer")
    try:
        scheme = normalize_scheme(raw.get("scheme", "interaction"))
    except ValueError as exc:
        raise ConfigError(f"scheme: {exc}") from None
    laser = LaserConfig.from_cycles(lam / 1e9, E, eta, ramp, T)
    settings = IntegratorSettings(scheme=scheme, steps_per_cycle=steps, sample_every=every,
                                  n_max=n_max)
    return RunConfig(model, laser, settings)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    return parse_config_text(text)


def fmt(x) -> str:
    """17-significant-digit representation used in every CSV."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path: Path, header, rows, summary=None) -> None:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    for key, value in (summary or {}).items():
        buf.write(f"# {key} = {fmt(value)}\n")
    path.write_text(buf.getvalue())


def read_table(source):
    """Parse CSV written by this tool.

    Parameters
    ----------
    source : str or path
        CSV text, or a path to a CSV file.

    Returns
    -------
    rows : list of dict
        One dict per data row; numeric fields converted to float.
    summary : dict
        Trailing ``# key = value`` lines.
    """
    text = str(source)
    if "\n" not in text and Path(text).exists():
        text = Path(text).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    summary = {}
    data = []
    for ln in lines:
        if ln.startswith("#"):
            key, _, value = ln[1:].partition("=")
            summary[key.strip()] = _maybe_float(value.strip())
        else:
            data.append(ln)
    if not data:
        return [], summary
    header = data[0].split(",")
    rows = []
    for ln in data[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ValueError(f"row has {len(cells)} cells, header has {len(header)}")
        rows.append({h: _maybe_float(c) for h, c in zip(header, cells)})
    return rows, summary


def _maybe_float(s: str):
    try:
        return float(s)
    except ValueError:
        return s


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out: Path, command: str, payload: dict, outputs, started: float) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "constants": {"fingerprint": CODATA2018.fingerprint(), **asdict(CODATA2018)},
        **payload,
        "wall_clock_seconds": time.perf_counter() - started,
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


# --- commands ----------------------------------------------------------------

def cmd_run(args) -> int:
    started = time.perf_counter()
    rc = load_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    series = propagate(rc.model, rc.laser, rc.settings)
    header = ["t_cycles", "s_z_over_hbar", "norm"]
    cols = [np.rint(series.t_cycles).astype(int), series.s_z, series.norms]
    if series.density is not None:
        header.append("lambda_rho_quarter")
        cols.append(series.density)
    path = out / "spin_timeseries.csv"
    write_csv(path, header, zip(*cols))
    write_manifest(out, "run", {"config": rc.echo(), "final_norm": series.final_norm},
                   [path], started)
    print(f"wrote {path} ({len(series.times)} samples, final norm {series.final_norm:.12f})")
    return EXIT_OK


def _parse_list(text: str, conv=float) -> list:
    try:
        vals = [conv(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"grid: cannot parse {text!r}") from None
    if not vals:
        raise ConfigError("grid: empty")
    return vals


def _reference_omega(model: str, cfg: LaserConfig) -> float:
    if model == "pauli-nonrel":
        return omega_pauli(cfg)
    return abs(omega_dirac_spin_density_form(cfg))


def _sweep_point(job):
    model, cfg, settings, periods = job
    try:
        if periods:
            w = _reference_omega(model, cfg)
            if w <= 0:
                raise ValueError("no precession expected at this point; cannot size the run")
            cycles = math.ceil(periods * cfg.omega / w) + 2 * math.ceil(cfg.delta_T_cycles)
            cfg = LaserConfig.from_cycles(cfg.wavelength, cfg.E_hat, cfg.eta,
                                          cfg.delta_T_cycles, cycles)
        series = propagate(model, cfg, settings)
        fit = extract_precession_frequency(series)
        if not fit.usable:
            return cfg.E_hat, cfg.eta, model, fit.omega_fit, fit.residual_rms, "no zero crossing"
        return cfg.E_hat, cfg.eta, model, fit.omega_fit, fit.residual_rms, ""
    except (IntegrationError, ValueError, RuntimeError) as exc:
        return cfg.E_hat, cfg.eta, model, float("nan"), float("nan"), \
            f"{type(exc).__name__}: {exc}".replace(",", ";")


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    rc = load_config(args.config)
    model = args.model or rc.model
    if model not in MODELS:
        raise ConfigError(f"model: must be one of {', '.join(MODELS)}")
    base = rc.laser
    if (args.field is None) == (args.eta is None):
        raise ConfigError("grid: give exactly one of --field or --eta")
    if args.field is not None:
        grid = [LaserConfig.from_cycles(base.wavelength, E, base.eta, base.delta_T_cycles,
                                        base.T_cycles) for E in _parse_list(args.field)]
    else:
        etas = _parse_list(args.eta, _parse_angle)
        for e in etas:
            if not -math.pi < e <= math.pi:
                raise ConfigError(f"eta: {e} outside the range (-pi, pi]")
        grid = [LaserConfig.from_cycles(base.wavelength, base.E_hat, e, base.delta_T_cycles,
                                        base.T_cycles) for e in etas]
    jobs = [(model, cfg, rc.settings, args.periods) for cfg in grid]
    workers = args.jobs or min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    ok = [r for r in rows if not r[5]]
    summary = {"points_ok": len(ok), "points_failed": len(rows) - len(ok)}
    if args.field is not None and len({r[0] for r in ok}) >= 2:
        summary["scaling_exponent"] = scaling_exponent([(r[0], r[3]) for r in ok]).slope
    if args.eta is not None and any(abs(r[1] - math.pi / 2) < 1e-9 for r in ok):
        pts = [(r[1], r[3]) for r in ok if 0 < r[1] <= math.pi / 2 + 1e-9]
        summary["sin_eta_max_deviation"] = ellipticity_law(pts).max_deviation
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    write_csv(path, ["E_hat", "eta", "model", "omega_fit", "residual", "error"], rows, summary)
    write_manifest(out, "sweep", {"config": rc.echo(), "sweep_model": model,
                                  "grid": {"field": args.field, "eta": args.eta},
                                  "periods": args.periods}, [path], started)
    for k, v in summary.items():
        print(f"{k} = {fmt(v)}")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_region(args) -> int:
    started = time.perf_counter()
    lo, hi, n = args.lambda_min_nm, args.lambda_max_nm, args.points
    if not (lo > 0 and hi > lo):
        raise ConfigError("lambda range: need 0 < lambda_min_nm < lambda_max_nm")
    if n < 2:
        raise ConfigError("points: need at least 2")
    if not args.cycles >= 1:
        raise ConfigError("cycles: cycle budget N must be at least 1")
    lams = np.geomspace(lo, hi, n) * 1e-9
    rows = []
    for lam in lams:
        b = perturbative_bounds(lam, args.cycles)
        rows.append((lam, b.E_min, b.E_max, b.nonempty))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "region.csv"
    summary = {"closing_wavelength_m": closing_wavelength(args.cycles)}
    write_csv(path, ["lambda", "E_min", "E_max", "nonempty"], rows, summary)
    write_manifest(out, "region", {"lambda_nm": [lo, hi], "points": n, "cycles": args.cycles},
                   [path], started)
    print(f"wrote {path}; closing wavelength {summary['closing_wavelength_m']:.6g} m")
    return EXIT_OK


def report_rows(rc: RunConfig, n_cycles=None) -> list:
    cfg = rc.laser
    s = perturbative_summary(cfg, n_cycles)
    rows = [
        ("Omega", s.Omega, "rad/s"),
        ("Omega_phi", s.Omega_phi, "rad/s"),
        ("Omega_P", s.Omega_P, "rad/s"),
        ("Omega_spin_density_form", omega_dirac_spin_density_form(cfg), "rad/s"),
        ("omega_laser", cfg.omega, "rad/s"),
        ("xi", s.xi, "1"),
        ("secondary_ratio", s.secondary, "1"),
        ("cycle_budget", s.n_cycles, "cycles"),
        ("E_min", s.E_min, "V/m"),
        ("E_max", s.E_max, "V/m"),
        ("region_nonempty", s.nonempty, "bool"),
        ("perturbative_warning", not s.perturbative, "bool"),
    ]
    circ = LaserConfig(cfg.wavelength, cfg.E_hat, math.pi / 2)
    pc = pauli_components(u4_dirac_secular(circ))
    u2 = u2_dirac(1.0, circ)
    rows += [
        ("u4_sigma_x_over_half_Omega", pc["x"].real / (0.5 * s.Omega) if s.Omega else float("nan"), "1"),
        ("u4_identity_over_Omega_phi", pc["1"].real / s.Omega_phi if s.Omega_phi else float("nan"), "1"),
        ("u2_offdiagonal_abs", float(abs(u2[0, 1]) + abs(u2[1, 0])), "1/s"),
        ("u2_diagonal", bool(u2[0, 1] == 0 and u2[1, 0] == 0), "bool"),
        ("u2_pauli_sigma_x_over_half_Omega_P",
         pauli_components(u2_pauli(1.0, cfg))["x"].imag / (0.5 * s.Omega_P)
         if s.Omega_P else float("nan"), "1"),
    ]
    return rows


def cmd_report(args) -> int:
    rc = load_config(args.config)
    rows = report_rows(rc, args.cycles)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("quantity,value,unit\n")
        for q, v, u in rows:
            buf.write(f"{q},{fmt(v)},{u}\n")
        sys.stdout.write(buf.getvalue())
    else:
        width = max(len(r[0]) for r in rows)
        for q, v, u in rows:
            val = ("yes" if v else "no") if isinstance(v, bool) else f"{v:.6g}"
            print(f"{q:<{width}}  {val:>14}  {u}")
        if not perturbative_summary(rc.laser, args.cycles).perturbative:
            print("WARNING: xi >= 1, outside the perturbative (harmonic) regime")
    return EXIT_OK


def cmd_schema(args) -> int:
    sys.stdout.write(SCHEMA)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lightspin",
        description="Electron spin precession in standing elliptically polarized light.",
        epilog=SCHEMA, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="propagate one configuration and write spin_timeseries.csv")
    r.add_argument("config")
    r.add_argument("--out", default=".", help="output directory")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="fit precession frequencies over a field or eta grid")
    s.add_argument("config")
    s.add_argument("--field", help="comma-separated peak fields in V/m")
    s.add_argument("--eta", help="comma-separated eta values in rad (pi/6 style allowed)")
    s.add_argument("--model", choices=MODELS, help="override the config model")
    s.add_argument("--periods", type=float, default=None,
                   help="size each run to this many predicted precession periods")
    s.add_argument("--jobs", type=int, default=None, help="worker processes")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_sweep)

    g = sub.add_parser("region", help="tabulate the perturbative field window against wavelength")
    g.add_argument("--lambda-min-nm", type=float, default=0.01)
    g.add_argument("--lambda-max-nm", type=float, default=10.0)
    g.add_argument("--points", type=int, default=200)
    g.add_argument("--cycles", type=float, default=5000, help="cycle budget N")
    g.add_argument("--out", default=".")
    g.set_defaults(func=cmd_region)

    rp = sub.add_parser("report", help="print the perturbation-theory summary")
    rp.add_argument("config")
    rp.add_argument("--format", choices=("table", "csv"), default="table")
    rp.add_argument("--cycles", type=float, default=None,
                    help="cycle budget for the field bounds (default: T_cycles)")
    rp.set_defaults(func=cmd_report)

    sc = sub.add_parser("schema", help="print config keys, CSV columns and units")
    sc.set_defaults(func=cmd_schema)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResonanceError as exc:
        print(f"resonance guard: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except IntegrationError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
