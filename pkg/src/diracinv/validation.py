"""Input checks shared by the estimators and the command line."""

import math
import numbers
from pathlib import Path

import numpy as np

from .core.grid import Mesh, uniform_mesh
from .dataset import SpectralDataset, read_spectral_file

C_ALPHA = -math.pi / 2


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_dataset(data):
    """Return a symmetric SpectralDataset from a dataset, a dict document or a file path."""
    if isinstance(data, (str, Path)):
        data = read_spectral_file(data)
    elif isinstance(data, dict):
        data = SpectralDataset.from_dict(data)
    if not isinstance(data, SpectralDataset):
        raise TypeError(f"expected spectral data, got {type(data).__name__}")
    if not data.is_symmetric():
        raise ValueError("spectral data must cover the symmetric index range -M..M without gaps")
    if not (np.all(np.isfinite(data.lam)) and np.all(np.isfinite(data.norming))):
        raise ValueError("spectral data contains non-finite values")
    if np.any(data.norming <= 0):
        raise ValueError("norming constants must be positive")
    return data


def check_mesh(mesh):
    """Accept a Mesh, a point count or an array of points in [0, 1]."""
    if isinstance(mesh, Mesh):
        return mesh
    if isinstance(mesh, numbers.Integral) and not isinstance(mesh, bool):
        return uniform_mesh(check_positive_int(mesh, "mesh", minimum=8))
    return Mesh(np.asarray(mesh, dtype=float))


def check_variant_alpha(variant, alpha):
    """The C-variant kernel belongs to the left angle ``-pi/2`` only."""
    if variant == "C" and not math.isclose(alpha, C_ALPHA, abs_tol=1e-14):
        raise ValueError(f"variant C needs alpha = -pi/2, data has alpha = {alpha!r}; use variant alpha")


def check_points(x):
    x = np.asarray(x, dtype=float)
    if x.ndim > 1:
        x = x.ravel()
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        raise ValueError("evaluation points must lie in [0, 1]")
    return x
