"""Explicit finite-difference solvers for the regularized Euler system."""

from .grid import ConservedField, Grid, pad
from .initial import initial_condition, smooth_exact
from .io import read_manifest, read_snapshot, write_manifest, write_snapshot
from .schemes import (
    euler_flux,
    lax_epsilon,
    lax_step,
    max_wave_speed,
    parabolic_step,
    primitives,
    rhs_parabolic,
    rhs_regularized,
)
from .stepping import SchemeSpec, Trajectory, advance, stable_dt

__all__ = [
    "Grid",
    "ConservedField",
    "pad",
    "initial_condition",
    "smooth_exact",
    "write_snapshot",
    "read_snapshot",
    "write_manifest",
    "read_manifest",
    "rhs_regularized",
    "rhs_parabolic",
    "parabolic_step",
    "lax_step",
    "lax_epsilon",
    "euler_flux",
    "primitives",
    "max_wave_speed",
    "SchemeSpec",
    "Trajectory",
    "advance",
    "stable_dt",
]
