"""Structure-preserving spline FEEC particle-in-cell solver, 1d2v."""

from .feec import DeRhamComplex1d, FieldCoeffs, build_complex
from .hamsplit import SimState, compose, flow, run_simulation
from .particles import InitialCase, ParticleSet, sample_initial
from .splines import SplineSpace

__all__ = [
    "DeRhamComplex1d",
    "FieldCoeffs",
    "InitialCase",
    "ParticleSet",
    "SimState",
    "SplineSpace",
    "build_complex",
    "compose",
    "flow",
    "run_simulation",
    "sample_initial",
]

__version__ = "0.1.0"
