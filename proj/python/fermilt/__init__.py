"""Spectral solver for pseudo-relativistic fermionic ground states.

Thin Python layer over the C++ core: periodic-box spectral grids,
orbital-frame states, energy and Lieb-Thirring quotient minimization,
constant estimation, binding checks, and threshold sweeps.
"""

from fermilt._core import (
    ConfigError,
    DivergingObjective,
    Grid,
    InsufficientRecords,
    MinimizeConfig,
    OrbitalSet,
    binding_check,
    default_init,
    density,
    energy,
    estimate_constant,
    estimate_dstar,
    minimize_energy,
    minimize_quotient,
    perturbed_init,
    quotient,
    read_checkpoint,
    sweep,
    write_checkpoint,
)

__all__ = [
    "ConfigError",
    "DivergingObjective",
    "Grid",
    "InsufficientRecords",
    "MinimizeConfig",
    "OrbitalSet",
    "binding_check",
    "default_init",
    "density",
    "energy",
    "estimate_constant",
    "estimate_dstar",
    "minimize_energy",
    "minimize_quotient",
    "perturbed_init",
    "quotient",
    "read_checkpoint",
    "sweep",
    "write_checkpoint",
]
