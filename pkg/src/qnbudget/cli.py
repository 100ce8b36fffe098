"""Command-line front end: budget sweeps, validation, config template.

Exit codes: 0 success, 1 validation check failed, 2 configuration error,
3 numerical degeneracy during evaluation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import (DEFAULT_BAND_HZ, MIN_FREQUENCY_HZ, IfoConfig,
                     config_hash, config_template, coverage_check,
                     default_config, load_config)
from .constants import C_LIGHT, HBAR
from .curves import evaluate_curve, frequency_grid, parse_curve_name
from .errors import ConfigError, DegeneracyError
from .ifo import NoiseSpectrum
from .validation import run_validation

MAX_POINTS = 10**6


@dataclass(frozen=True)
class BudgetRequest:
    """Validated description of one budget sweep."""

    config: IfoConfig
    band_hz: tuple = DEFAULT_BAND_HZ
    points: int = 1000
    curves: tuple = ("sql", "loss_limit_a4")
    out_path: str | None = None
    fmt: str = "csv"
    seed: int = 42

    def __post_init__(self):
        lo, hi = (float(self.band_hz[0]), float(self.band_hz[1]))
        if not math.isfinite(lo) or lo < MIN_FREQUENCY_HZ:
            raise ConfigError(
                f"fmin: must be >= {MIN_FREQUENCY_HZ} Hz, got {lo!r}")
        if not math.isfinite(hi) or hi <= lo:
            raise ConfigError(f"fmax: must exceed fmin, got {hi!r}")
        object.__setattr__(self, "band_hz", (lo, hi))
        if not 2 <= int(self.points) <= MAX_POINTS:
            raise ConfigError(
                f"points: must be in [2, {MAX_POINTS}], got {self.points!r}")
        object.__setattr__(self, "points", int(self.points))
        curves = tuple(self.curves)
        if not curves:
            raise ConfigError("curves: select at least one curve")
        for name in curves:
            parse_curve_name(name)
        object.__setattr__(self, "curves", curves)
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format: must be csv or json, got {self.fmt!r}")
        coverage_check(self.config, lo, hi)


def _fmt(x: float) -> str:
    """12 significant digits, scientific notation."""
    return f"{x:.11e}"


def _csv_text(f_hz: np.ndarray, spectra: dict) -> str:
    lines = [",".join(["f_hz"] + list(spectra))]
    columns = [f_hz] + [spectra[name].values for name in spectra]
    for row in zip(*columns):
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _json_text(req: BudgetRequest, f_hz: np.ndarray, spectra: dict) -> str:
    doc = {
        "metadata": {
            "format": "qnbudget-budget/1",
            "version": __version__,
            "config_sha256": config_hash(req.config),
            "constants": {"c_m_per_s": C_LIGHT, "hbar_J_s": HBAR},
            "band_hz": list(req.band_hz),
            "points": req.points,
            "curves": list(req.curves),
            "seed": req.seed,
        },
        "columns": {
            "f_hz": [float(_fmt(x)) for x in f_hz],
            **{name: [float(_fmt(x)) for x in spectrum.values]
               for name, spectrum in spectra.items()},
        },
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def run_budget(req: BudgetRequest) -> dict:
    """Evaluate the requested curves; write the output file if a path is set.

    Returns the curves as {name: NoiseSpectrum}, in request order.
    """
    f_hz = frequency_grid(req.band_hz[0], req.band_hz[1], req.points)
    spectra = {}
    for name in req.curves:
        values = evaluate_curve(name, req.config, f_hz, src_band=req.band_hz)
        spectra[name] = NoiseSpectrum(frequencies=f_hz, values=values, label=name)
    if req.out_path is not None:
        text = (_csv_text(f_hz, spectra) if req.fmt == "csv"
                else _json_text(req, f_hz, spectra))
        with open(req.out_path, "w", newline="") as fh:
            fh.write(text)
    return spectra


def _load(path: str | None) -> IfoConfig:
    return default_config() if path is None else load_config(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnbudget",
        description="Quantum-noise sensitivity limits of laser "
                    "interferometers under optical loss.")
    sub = parser.add_subparsers(dest="command", required=True)

    budget = sub.add_parser(
        "budget", help="evaluate sensitivity curves over a frequency band")
    budget.add_argument("--config", help="JSON config path (default: built-in)")
    budget.add_argument("--fmin", type=float, default=DEFAULT_BAND_HZ[0],
                        help="lower band edge [Hz]")
    budget.add_argument("--fmax", type=float, default=DEFAULT_BAND_HZ[1],
                        help="upper band edge [Hz]")
    budget.add_argument("--points", type=int, default=1000,
                        help="number of log-spaced frequencies")
    budget.add_argument("--curves", default="sql,qcrb,loss_limit_a4,full_optimal",
                        help="comma-separated curve names")
    budget.add_argument("--out", help="output file path (default: stdout)")
    budget.add_argument("--format", choices=("csv", "json"), default="csv")
    budget.add_argument("--seed", type=int, default=42)

    validate = sub.add_parser(
        "validate", help="run the cross-module consistency checks")
    validate.add_argument("--config", help="JSON config path (default: built-in)")
    validate.add_argument("--seed", type=int, default=42)

    sub.add_parser("print-config-template",
                   help="print a complete JSON config template")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "print-config-template":
            print(json.dumps(config_template(), indent=2))
            return 0
        if args.command == "validate":
            report = run_validation(_load(args.config), seed=args.seed)
            print(f"config sha256: {report.config_sha256}")
            print(f"seed: {report.seed}")
            for line in report.lines():
                print(line)
            return 0 if report.passed else 1
        req = BudgetRequest(
            config=_load(args.config),
            band_hz=(args.fmin, args.fmax),
            points=args.points,
            curves=tuple(s.strip() for s in args.curves.split(",") if s.strip()),
            out_path=args.out,
            fmt=args.format,
            seed=args.seed,
        )
        spectra = run_budget(req)
        if req.out_path is None:
            f_hz = next(iter(spectra.values())).frequencies
            sys.stdout.write(_csv_text(f_hz, spectra))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return 3


def cli_entry() -> None:
    sys.exit(main())
