"""
Command-line front end.

Every run is driven by one JSON config document::

    er3bp locate --config run.json [--out out.csv] [--format csv|json]

Subcommands: locate, critical-mass, modes, orbit, stability-sweep.
Exit codes: 0 success, 2 invalid config, 3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .equilibria import Branch, locate_newton, perturbative_point
from .errors import ER3BPError
from .integrator import propagate
from .linmotion import DisplacementIC, evaluate_series, solve_coefficients, trig_amplitudes
from .model import SystemParams
from .stability import CLASSIFY_TOL, MU_LOW, critical_mass, stability_sweep

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

_TRIAXIAL = {"type": "number", "exclusiveMinimum": -0.1, "exclusiveMaximum": 0.1}
_SHAPE_PROPERTIES = {
    "sigma1": _TRIAXIAL,
    "sigma2": _TRIAXIAL,
    "gamma1": _TRIAXIAL,
    "gamma2": _TRIAXIAL,
    "e": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
    "a": {"type": "number", "exclusiveMinimum": 0},
}
_MU = {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

_MU_GRID = {
    "oneOf": [
        {"type": "array", "items": _MU, "minItems": 1},
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["start", "stop", "step"],
            "properties": {"start": _MU, "stop": _MU, "step": _POSITIVE},
        },
    ]
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "params"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "description": {"type": "string"},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"mu": _MU, **_SHAPE_PROPERTIES},
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "semi_latus_scaling": {"type": "boolean"},
                "classify_tol": _POSITIVE,
            },
        },
        "locate": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mu_grid": _MU_GRID,
                "tol": _POSITIVE,
                "max_iter": {"type": "integer", "minimum": 1},
            },
        },
        "critical_mass": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "cases": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": _SHAPE_PROPERTIES,
                    },
                },
                "tol": _POSITIVE,
                "mu_low": _MU,
            },
        },
        "modes": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "branch": {"enum": ["L4", "L5"]},
                "ic": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["xi0", "eta0"],
                    "properties": {
                        "xi0": {"type": "number"},
                        "eta0": {"type": "number"},
                        "xidot0": {"type": "number"},
                        "etadot0": {"type": "number"},
                    },
                },
                "t_end": _POSITIVE,
                "dt": _POSITIVE,
                "nonlinear": {"type": "boolean"},
                "rel_tol": {"type": "number", "minimum": 1e-14, "maximum": 1e-6},
            },
        },
        "stability_sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mu_grid"],
            "properties": {"mu_grid": _MU_GRID},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
            },
        },
    },
}


class ConfigError(Exception):
    pass


class Report:
    """Tabular command output: header key/values, column names, records."""

    def __init__(self, command: str, params: dict, columns: list[str], header: dict | None = None):
        self.command = command
        self.params = params
        self.columns = columns
        self.header = header or {}
        self.records: list[dict] = []

    def add(self, **row):
        self.records.append({c: row.get(c) for c in self.columns})


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write(f"# command={report.command}\n")
    for key, value in report.params.items():
        buf.write(f"# {key}={_fmt(value)}\n")
    for key, value in report.header.items():
        buf.write(f"# {key}={_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for rec in report.records:
        writer.writerow([_fmt(rec[c]) for c in report.columns])
    return buf.getvalue()


def render_json(report: Report) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "params": report.params,
        "results": {
            "command": report.command,
            "header": report.header,
            "columns": report.columns,
            "records": report.records,
        },
    }
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def load_config(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    validate_config(config)
    return config


def validate_config(config) -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(config))
    if error is not None:
        where = ".".join(str(p) for p in error.absolute_path) or "<root>"
        raise ConfigError(f"config.{where}: {error.message}")


_DEFAULTS = {"sigma1": 0.0, "sigma2": 0.0, "gamma1": 0.0, "gamma2": 0.0, "e": 0.0, "a": 1.0}


def _echo(config: dict) -> dict:
    """Full parameter set for the provenance header, defaults filled in."""
    raw = config["params"]
    out = {"mu": raw["mu"]} if "mu" in raw else {}
    out.update({k: raw.get(k, v) for k, v in _DEFAULTS.items()})
    return out


def _params(config: dict, need_mu: bool = True) -> SystemParams:
    raw = dict(config["params"])
    if "mu" not in raw:
        if need_mu:
            raise ConfigError("config.params: 'mu' is required for this command")
        raw["mu"] = 0.5
    try:
        return SystemParams(**raw)
    except ValueError as exc:
        raise ConfigError(f"config.params: {exc}") from exc


def _mu_grid(grid) -> list[float]:
    if isinstance(grid, list):
        return [float(v) for v in grid]
    start, stop, step = grid["start"], grid["stop"], grid["step"]
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ConfigError("config: mu_grid stop is below start")
    return [round(start + i * step, 12) for i in range(count)]


def _options(config: dict) -> tuple[bool, float]:
    opts = config.get("options", {})
    return bool(opts.get("semi_latus_scaling", False)), float(opts.get("classify_tol", CLASSIFY_TOL))


def cmd_locate(config: dict) -> Report:
    block = config.get("locate", {})
    base = _params(config, need_mu="mu_grid" not in block)
    grid = _mu_grid(block["mu_grid"]) if "mu_grid" in block else [base.mu]
    tol = block.get("tol", 1e-12)
    max_iter = block.get("max_iter", 50)
    report = Report(
        "locate",
        _echo(config),
        ["mu", "method", "branch", "x", "y", "r_from_origin", "r1", "r2", "residual"],
    )
    for mu in grid:
        params = base.with_mu(mu)
        for branch in (Branch.L4, Branch.L5):
            points = [perturbative_point(params, branch), locate_newton(params, branch, tol, max_iter)]
            for pt in points:
                r1, r2 = pt.distances(params)
                report.add(
                    mu=mu,
                    method=pt.method.value,
                    branch=branch.value,
                    x=pt.pos.x,
                    y=pt.pos.y,
                    r_from_origin=pt.r_from_origin,
                    r1=r1,
                    r2=r2,
                    residual=pt.residual,
                )
    return report


def cmd_critical_mass(config: dict) -> Report:
    block = config.get("critical_mass", {})
    scaling, classify_tol = _options(config)
    tol = block.get("tol", 1e-9)
    mu_low = block.get("mu_low", MU_LOW)
    base = _params(config, need_mu=False)
    cases = block.get("cases") or [{}]
    report = Report(
        "critical-mass",
        _echo(config),
        ["sigma1", "sigma2", "gamma1", "gamma2", "e", "a", "mu_c", "bracket_width"],
        {"semi_latus_scaling": scaling, "tol": tol, "mu_low": mu_low},
    )
    for case in cases:
        merged = {**base.as_dict(), **case}
        try:
            params = SystemParams(**merged)
        except ValueError as exc:
            raise ConfigError(f"config.critical_mass.cases: {exc}") from exc
        res = critical_mass(params, tol, classify_tol, scaling, mu_low=mu_low)
        shape = {k: v for k, v in params.as_dict().items() if k != "mu"}
        report.add(**shape, mu_c=res.mu_c, bracket_width=res.bracket_width)
    return report


def _modes_setup(config: dict):
    block = config.get("modes", {})
    params = _params(config)
    scaling, classify_tol = _options(config)
    branch = Branch(block.get("branch", "L4"))
    raw_ic = block.get("ic", {"xi0": 1e-5, "eta0": 1e-5})
    ic = DisplacementIC(
        raw_ic["xi0"], raw_ic["eta0"], raw_ic.get("xidot0", 0.0), raw_ic.get("etadot0", 0.0)
    )
    point = locate_newton(params, branch)
    decomp = solve_coefficients(params, point, ic, classify_tol, scaling)
    header = {
        "branch": branch.value,
        "x_eq": point.pos.x,
        "y_eq": point.pos.y,
        "omega_long": decomp.omega_long,
        "omega_short": decomp.omega_short,
        "semi_latus_scaling": scaling,
    }
    header.update(trig_amplitudes(decomp))
    return block, params, point, ic, decomp, header


def cmd_modes(config: dict) -> Report:
    _, _, _, _, decomp, header = _modes_setup(config)
    report = Report(
        "modes",
        _echo(config),
        ["j", "lambda_re", "lambda_im", "alpha_re", "alpha_im", "beta_re", "beta_im"],
        header,
    )
    for j, (lam, a, b) in enumerate(zip(decomp.roots, decomp.alpha, decomp.beta), start=1):
        report.add(
            j=j,
            lambda_re=lam.real,
            lambda_im=lam.imag,
            alpha_re=a.real,
            alpha_im=a.imag,
            beta_re=b.real,
            beta_im=b.imag,
        )
    return report


def cmd_orbit(config: dict) -> Report:
    block, params, point, ic, decomp, header = _modes_setup(config)
    t_end = block.get("t_end", 2.0 * 2.0 * math.pi / decomp.omega_long)
    dt = block.get("dt", 0.01)
    nonlinear = block.get("nonlinear", True)
    rel_tol = block.get("rel_tol", 1e-12)
    report = Report(
        "orbit",
        _echo(config),
        ["t", "X_lin", "Y_lin", "X_nonlin", "Y_nonlin", "deviation"],
        header,
    )
    if nonlinear:
        start = [point.pos.x + ic.xi0, point.pos.y + ic.eta0, ic.xidot0, ic.etadot0]
        traj = propagate(params, start, t_end, rel_tol=rel_tol, dense_dt=dt)
        t = traj.t
        xn = traj.states[:, 0] - point.pos.x
        yn = traj.states[:, 1] - point.pos.y
        header["max_jacobi_drift"] = traj.stats.max_jacobi_drift
    else:
        from .integrator import sample_times

        t = sample_times(t_end, dt)
        xn = yn = np.full_like(t, math.nan)
    xl, yl = evaluate_series(decomp, t)
    dev = np.hypot(xn - xl, yn - yl)
    if nonlinear:
        header["max_deviation"] = float(np.max(dev))
    for row in zip(t, xl, yl, xn, yn, dev):
        report.add(**dict(zip(report.columns, (float(v) for v in row))))
    return report


def cmd_stability_sweep(config: dict) -> Report:
    block = config.get("stability_sweep")
    if block is None:
        raise ConfigError("config: 'stability_sweep' block is required for this command")
    template = _params(config, need_mu=False)
    scaling, _ = _options(config)
    report = Report(
        "stability-sweep",
        _echo(config),
        ["mu", "omega_long", "omega_short", "classification", "max_real_part", "error"],
        {"semi_latus_scaling": scaling},
    )

    def sink(row):
        report.add(
            mu=row.mu,
            omega_long=row.omega_long,
            omega_short=row.omega_short,
            classification=row.classification.value if row.classification else None,
            max_real_part=row.max_real_part,
            error=row.error,
        )

    stability_sweep(template, _mu_grid(block["mu_grid"]), sink, scaling)
    return report


COMMANDS = {
    "locate": cmd_locate,
    "critical-mass": cmd_critical_mass,
    "modes": cmd_modes,
    "orbit": cmd_orbit,
    "stability-sweep": cmd_stability_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="er3bp",
        description="Triangular points of the elliptic restricted three-body problem "
        "with triaxial primaries.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output file (default: config output.path or stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        report = COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"er3bp: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ER3BPError, ValueError, ArithmeticError) as exc:
        print(f"er3bp: {args.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE

    output = config.get("output", {})
    fmt = args.format or output.get("format", "csv")
    text = render_json(report) if fmt == "json" else render_csv(report)
    out_path = args.out or output.get("path")
    if out_path:
        with open(out_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
