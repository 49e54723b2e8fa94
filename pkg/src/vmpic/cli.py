"""Command-line entry point: run a case, write the diagnostics CSV.

Exit codes: 0 on success, 1 for a malformed configuration or arguments,
2 for runtime failures.
"""

import argparse
import sys
from dataclasses import replace

from .config import PRESET_NAMES, load_toml, preset_config
from .diagnostics import fit_growth_rate, local_maxima
from .hamsplit import run_simulation

CSV_COLUMNS = ("time", "kinetic", "e1_energy", "e2_energy", "b_energy",
               "total", "total_err", "modified_err", "gauss_residual",
               "p1", "p2", "p1_ref", "p2_ref")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _bool_flag(text):
    lowered = text.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser():
    parser = _Parser(prog="vmpic", description=__doc__)
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="TOML configuration file")
    src.add_argument("--case", choices=PRESET_NAMES,
                     help="built-in experiment preset")
    parser.add_argument("--propagator")
    parser.add_argument("--dt", type=float)
    parser.add_argument("--t-end", type=float)
    parser.add_argument("--steps", type=int,
                        help="number of steps; shorthand for t_end = steps*dt")
    parser.add_argument("--cells", type=int)
    parser.add_argument("--particles", type=int)
    parser.add_argument("--degree", type=int)
    parser.add_argument("--stride", type=int)
    parser.add_argument("--seed-skip", type=int)
    parser.add_argument("--antithetic", type=_bool_flag)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--out")
    parser.add_argument("--fit-window", nargs=2, type=float, action="append",
                        metavar=("A", "B"))
    parser.add_argument("--fit-field", choices=("e1", "e2", "b"))
    parser.add_argument("--fit-peaks", type=_bool_flag)
    return parser


def _apply_overrides(config, args):
    updates = {}
    mapping = {
        "propagator": "propagator", "dt": "dt", "t_end": "t_end",
        "cells": "n_cells", "particles": "n_particles", "degree": "degree",
        "stride": "diagnostic_stride", "seed_skip": "sobol_skip",
        "antithetic": "antithetic", "alpha": "alpha", "out": "output_path",
        "fit_field": "fit_field", "fit_peaks": "fit_peaks",
    }
    for arg_name, field_name in mapping.items():
        value = getattr(args, arg_name)
        if value is not None:
            updates[field_name] = value
    if args.fit_window is not None:
        updates["fit_windows"] = tuple(tuple(w) for w in args.fit_window)
    config = replace(config, **updates) if updates else config
    if args.steps is not None:
        config = replace(config, t_end=args.steps * config.dt)
    return config


def write_csv(records, path):
    """Fixed column order, one header row, full-precision floats."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        if not records:
            return
        t0 = records[0].total_energy
        m0 = records[0].modified_energy
        for r in records:
            row = (r.time, r.kinetic_energy, r.e1_energy, r.e2_energy,
                   r.b_energy, r.total_energy, r.total_energy - t0,
                   r.modified_energy - m0, r.gauss_residual,
                   r.momentum_p1, r.momentum_p2,
                   r.momentum_ref_p1, r.momentum_ref_p2)
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def fit_from_records(records, fit_field, window, peaks):
    series = {
        "e1": [r.e1_energy for r in records],
        "e2": [r.e2_energy for r in records],
        "b": [r.b_energy for r in records],
    }[fit_field]
    times = [r.time for r in records]
    if peaks:
        times, series = local_maxima(times, series)
    return fit_growth_rate(times, series, window, energy=True)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            config = load_toml(args.config)
        else:
            config = preset_config(args.case)
        config = _apply_overrides(config, args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"vmpic: configuration error: {exc}", file=sys.stderr)
        return 1

    try:
        records = run_simulation(config)
        write_csv(records, config.output_path)
        t0 = records[0].total_energy
        max_err = max(abs(r.total_energy - t0) for r in records)
        max_gauss = max(r.gauss_residual for r in records)
        print(f"records={len(records)}")
        print(f"max_energy_error={max_err!r}")
        print(f"max_gauss_residual={max_gauss!r}")
        for i, window in enumerate(config.fit_windows, start=1):
            try:
                rate = fit_from_records(records, config.fit_field, window,
                                        config.fit_peaks)
            except ValueError as exc:
                print(f"vmpic: fit window {window} skipped: {exc}",
                      file=sys.stderr)
                continue
            print(f"growth_rate_{i}={rate!r}")
        print(f"csv={config.output_path}")
    except Exception as exc:  # noqa: BLE001 - boundary of the process
        print(f"vmpic: runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
