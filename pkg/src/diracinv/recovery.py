"""Potential readout from solved kernel coefficients."""

import math
from dataclasses import dataclass, field

import numpy as np

from .core.algebra import B, rotation
from .core.grid import spline_fit_deriv

MIN_DENOMINATOR = 1e-12


class DegenerateDenominatorError(ArithmeticError):
    pass


@dataclass
class RecoveredPotential:
    x: np.ndarray
    p: np.ndarray
    q: np.ndarray
    method: str
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return self.x.size

    def errors(self, potential, window=(0.05, 0.95)):
        """Sup and discrete L2 errors of ``p`` and ``q`` against a known potential on ``window``."""
        keep = (self.x >= window[0] - 1e-12) & (self.x <= window[1] + 1e-12)
        pt, qt = potential(self.x[keep])
        ep = np.abs(self.p[keep] - pt)
        eq = np.abs(self.q[keep] - qt)
        width = window[1] - window[0]
        return {
            "sup_p": float(ep.max()),
            "sup_q": float(eq.max()),
            "l2_p": float(math.sqrt(width * np.mean(ep**2))),
            "l2_q": float(math.sqrt(width * np.mean(eq**2))),
        }


def _extrapolate_origin(x, v):
    # the diagonal readout divides by x; fill x = 0 from the next four points
    return float(np.polyval(np.polyfit(x[1:5], v[1:5], 3), x[0]))


def recover_goursat(field):
    """``Q(x) = K(x, x) B - B K(x, x)`` with the kernel diagonal summed from all coefficients.

    On the diagonal every Legendre factor equals one, so
    ``K_C(x, x) = (2/x) sum_n K_n^C`` and
    ``K_alpha(x, x) = (2/x) sum_n K_n^alpha R_alpha^T``.
    """
    x = field.x
    total = field.coeffs.sum(axis=1)
    if field.variant == "alpha":
        total = total @ rotation(field.alpha).T
    p = np.zeros(x.size)
    q = np.zeros(x.size)
    pos = x > 0
    diag = 2.0 * total[pos] / x[pos, None, None]
    Q = diag @ B - B @ diag
    p[pos] = Q[:, 0, 0]
    q[pos] = Q[:, 0, 1]
    if not pos.all() and pos.sum() >= 4:
        p[~pos] = _extrapolate_origin(x, p)
        q[~pos] = _extrapolate_origin(x, q)
    return RecoveredPotential(x.copy(), p, q, "goursat", {"N": field.N, "variant": field.variant})


def _check_denominator(den, x):
    bad = den < MIN_DENOMINATOR
    if bad.any():
        raise DegenerateDenominatorError(f"first-coefficient denominator vanishes near x={x[bad][0]:.6g}")


def recover_first_coeff_C(field):
    """``(p, q)`` from ``(a, b)``, the first column of ``K_0^C``, and spline derivatives."""
    if field.variant != "C":
        raise ValueError("recover_first_coeff_C needs a C-variant field")
    x = field.x
    a = field.coeffs[:, 0, 0, 0]
    b = field.coeffs[:, 0, 1, 0]
    _, da = spline_fit_deriv(x, a)
    _, db = spline_fit_deriv(x, b)
    u = 1.0 + 2.0 * a
    den = 4.0 * b * b + u * u
    _check_denominator(den, x)
    p = (-2.0 * b * 2.0 * da - u * 2.0 * db) / den
    q = (u * 2.0 * da - 2.0 * b * 2.0 * db) / den
    return RecoveredPotential(x.copy(), p, q, "first-coeff-C", {"N": field.N, "variant": "C"})


def first_coeff_alpha_matrix(c, d, alpha):
    """The 2x2 map (before the ``1/den`` factor) sending ``(2c', 2d')`` to ``(p, q)``."""
    u = math.cos(alpha) + 2.0 * d
    v = math.sin(alpha) - 2.0 * c
    return np.array([[-u, v], [-v, -u]]), u * u + v * v


def recover_first_coeff_alpha(field, alpha=None):
    """``(p, q)`` from ``(c, d)``, the second column of ``K_0^alpha``."""
    if field.variant != "alpha":
        raise ValueError("recover_first_coeff_alpha needs an alpha-variant field")
    alpha = field.alpha if alpha is None else alpha
    x = field.x
    c = field.coeffs[:, 0, 0, 1]
    d = field.coeffs[:, 0, 1, 1]
    _, dc = spline_fit_deriv(x, c)
    _, dd = spline_fit_deriv(x, d)
    u = math.cos(alpha) + 2.0 * d
    v = math.sin(alpha) - 2.0 * c
    den = u * u + v * v
    _check_denominator(den, x)
    p = (-u * 2.0 * dc + v * 2.0 * dd) / den
    q = (-v * 2.0 * dc - u * 2.0 * dd) / den
    return RecoveredPotential(x.copy(), p, q, "first-coeff-alpha", {"N": field.N, "variant": "alpha"})


ROUTES = ("first", "goursat")


def recover(field, route="first"):
    if route == "goursat":
        return recover_goursat(field)
    if route != "first":
        raise ValueError(f"unknown recovery route {route!r}")
    if field.variant == "C":
        return recover_first_coeff_C(field)
    return recover_first_coeff_alpha(field)
