"""Simulation configuration: presets, TOML round-trip, validation.

Each benchmark case ships as a preset carrying the published physical and
numerical parameters; a TOML file or command-line flags override individual
entries. The serialization writes every field, so load -> dump -> load is
the identity.
"""

import sys
from dataclasses import dataclass, field, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .hamsplit import DEFAULT_ALPHA, PROPAGATORS
from .particles import InitialCase

__all__ = ["SimConfig", "preset_config", "load_toml", "dump_toml", "PRESET_NAMES"]

PRESET_NAMES = ("weibel", "streaming_weibel", "landau")


@dataclass(frozen=True)
class SimConfig:
    case: InitialCase
    propagator: str = "strang"
    degree: int = 3
    n_cells: int = 32
    n_particles: int = 100000
    dt: float = 0.05
    t_end: float = 500.0
    diagnostic_stride: int = 1
    antithetic: bool = True
    sobol_skip: int = 1
    output_path: str = "diagnostics.csv"
    fit_field: str = "b"
    fit_windows: tuple = ()
    fit_peaks: bool = False
    alpha: float = DEFAULT_ALPHA
    include_modified: bool = True

    def __post_init__(self):
        if self.propagator not in PROPAGATORS:
            raise ValueError(f"unknown propagator {self.propagator!r}")
        if self.degree < 2:
            raise ValueError("spline degree must be >= 2")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        if self.diagnostic_stride < 1:
            raise ValueError("diagnostic_stride must be >= 1")
        if self.fit_field not in ("e1", "e2", "b"):
            raise ValueError(f"unknown fit field {self.fit_field!r}")
        for w in self.fit_windows:
            if len(w) != 2 or not w[0] < w[1]:
                raise ValueError(f"malformed fit window {w}")


def preset_config(name, **overrides):
    """Configuration of one of the benchmark experiments."""
    case = InitialCase.preset(name)
    base = {
        "weibel": SimConfig(
            case=case, propagator="strang", n_cells=32, n_particles=100000,
            dt=0.05, t_end=500.0, fit_field="b",
            fit_windows=((100.0, 250.0),),
        ),
        "streaming_weibel": SimConfig(
            case=case, propagator="strang", n_cells=128, n_particles=200000,
            dt=0.01, t_end=150.0, diagnostic_stride=5, fit_field="e2",
            fit_windows=((4.0, 24.0),),
        ),
        "landau": SimConfig(
            case=case, propagator="strang", n_cells=32, n_particles=100000,
            dt=0.05, t_end=50.0, fit_field="e1", fit_peaks=True,
            fit_windows=((0.0, 12.0), (20.0, 40.0)),
        ),
    }[name]
    return replace(base, **overrides) if overrides else base


def _case_to_dict(case):
    return {
        "id": case.case_id, "sigma1": case.sigma1, "sigma2": case.sigma2,
        "k": case.k, "alpha": case.alpha, "beta": case.beta,
        "v01": case.v01, "v02": case.v02, "delta": case.delta,
    }


def _case_from_dict(data):
    data = dict(data)
    case_id = data.pop("id")
    base = InitialCase.preset(case_id)
    return replace(base, **data)


def dump_toml(config, stream):
    """Serialize a configuration; every field is written explicitly."""

    def fmt(value):
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, str):
            return f'"{value}"'
        if isinstance(value, (list, tuple)):
            return "[" + ", ".join(fmt(v) for v in value) + "]"
        return repr(float(value)) if isinstance(value, float) else repr(value)

    sections = {
        "case": _case_to_dict(config.case),
        "grid": {"degree": config.degree, "cells": config.n_cells},
        "time": {
            "propagator": config.propagator, "dt": config.dt,
            "t_end": config.t_end, "stride": config.diagnostic_stride,
            "alpha": config.alpha,
        },
        "particles": {
            "count": config.n_particles, "antithetic": config.antithetic,
            "sobol_skip": config.sobol_skip,
        },
        "output": {
            "path": config.output_path, "fit_field": config.fit_field,
            "fit_windows": [list(w) for w in config.fit_windows],
            "fit_peaks": config.fit_peaks,
            "include_modified": config.include_modified,
        },
    }
    for name, entries in sections.items():
        stream.write(f"[{name}]\n")
        for key, value in entries.items():
            stream.write(f"{key} = {fmt(value)}\n")
        stream.write("\n")


def load_toml(path):
    """Parse a configuration file written by :func:`dump_toml` (or by hand)."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    case = _case_from_dict(data["case"])
    grid = data.get("grid", {})
    time_sec = data.get("time", {})
    particles = data.get("particles", {})
    output = data.get("output", {})
    return SimConfig(
        case=case,
        propagator=time_sec.get("propagator", "strang"),
        degree=grid.get("degree", 3),
        n_cells=grid.get("cells", 32),
        n_particles=particles.get("count", 100000),
        dt=time_sec.get("dt", 0.05),
        t_end=time_sec.get("t_end", 500.0),
        diagnostic_stride=time_sec.get("stride", 1),
        antithetic=particles.get("antithetic", True),
        sobol_skip=particles.get("sobol_skip", 1),
        output_path=output.get("path", "diagnostics.csv"),
        fit_field=output.get("fit_field", "b"),
        fit_windows=tuple(tuple(w) for w in output.get("fit_windows", [])),
        fit_peaks=output.get("fit_peaks", False),
        alpha=time_sec.get("alpha", DEFAULT_ALPHA),
        include_modified=output.get("include_modified", True),
    )
