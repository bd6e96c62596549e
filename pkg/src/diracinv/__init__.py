"""Inverse spectral problem for one-dimensional Dirac systems on [0, 1]."""

from .asymptotics import AsymptoticFit, fit_asymptotics, generate_aevs
from .dataset import BoundaryParams, SpectralDataset, read_spectral_file, write_spectral_file
from .estimators import AsymptoticExtender, GelfandLevitanInverter
from .forward import find_eigenvalues, norming_constants, spectral_data
from .glsolver import CoefficientField, assemble_system, solve_field, solve_point
from .potentials import PotentialSpec, make_potential
from .recovery import RecoveredPotential, recover

__all__ = [
    "AsymptoticExtender",
    "AsymptoticFit",
    "BoundaryParams",
    "CoefficientField",
    "GelfandLevitanInverter",
    "PotentialSpec",
    "RecoveredPotential",
    "SpectralDataset",
    "assemble_system",
    "find_eigenvalues",
    "fit_asymptotics",
    "generate_aevs",
    "make_potential",
    "norming_constants",
    "read_spectral_file",
    "recover",
    "solve_field",
    "solve_point",
    "spectral_data",
    "write_spectral_file",
]
