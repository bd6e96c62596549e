"""Meshes on [0, 1] and degree-6 spline differentiation."""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BSpline, make_interp_spline

SPLINE_DEGREE = 6
DEFAULT_MESH_SIZE = 100


@dataclass(frozen=True)
class Mesh:
    points: np.ndarray
    uniform: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("mesh needs at least two points")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValueError("mesh must start at 0 and end at 1")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("mesh points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size


def uniform_mesh(size=DEFAULT_MESH_SIZE):
    """Uniform mesh with ``size`` points including both endpoints."""
    return Mesh(np.linspace(0.0, 1.0, int(size)), uniform=True)


@dataclass(frozen=True)
class Spline6:
    """Degree-6 interpolating spline of one scalar channel."""

    knots: np.ndarray
    coefficients: np.ndarray

    @property
    def bspline(self):
        return BSpline(self.knots, self.coefficients, SPLINE_DEGREE, extrapolate=False)

    def __call__(self, x):
        return self.bspline(x)

    def derivative(self, x):
        return self.bspline.derivative()(x)

    def piecewise(self):
        """The spline as a ``scipy.interpolate.PPoly`` (per-interval polynomial coefficients)."""
        from scipy.interpolate import PPoly

        return PPoly.from_spline(self.bspline)


def spline_fit_deriv(x, y):
    """Interpolate ``y(x)`` with a degree-6 spline and differentiate it.

    Returns ``(spline, dy)`` where ``dy`` is the spline's analytic derivative
    sampled at ``x``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if np.any(np.diff(x) <= 0):
        raise ValueError("spline abscissae must be strictly increasing (no duplicates)")
    if x.size < SPLINE_DEGREE + 2:
        raise ValueError(f"need at least {SPLINE_DEGREE + 2} abscissae, got {x.size}")
    bs = make_interp_spline(x, y, k=SPLINE_DEGREE)
    spline = Spline6(bs.t, bs.c)
    dy = bs.derivative()(x)
    return spline, dy
