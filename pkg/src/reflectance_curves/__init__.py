"""Reflectance curves from sRGB triplets by slope-minimizing reconstruction."""

from .colorimetry import (GRID, N_BANDS, AssemblyError, ColorSystem, InvalidInputError,
                          SpectralGrid, SrgbTriplet, assemble_system, decode_gamma,
                          default_system, encode_gamma, reflectance_to_srgb)
from .solvers import (METHODS, SolveOutcome, SolverOptions, solve, solve_ilss, solve_illss,
                      solve_lls, solve_llss, solve_lss)

__version__ = "0.1.0"

__all__ = [
    "GRID", "N_BANDS", "METHODS", "AssemblyError", "ColorSystem", "InvalidInputError",
    "SolveOutcome", "SolverOptions", "SpectralGrid", "SrgbTriplet", "assemble_system",
    "decode_gamma", "default_system", "encode_gamma", "reflectance_to_srgb", "solve",
    "solve_ilss", "solve_illss", "solve_lls", "solve_llss", "solve_lss",
]
