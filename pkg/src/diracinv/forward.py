"""Direct problem: eigenvalues, norming constants and solutions of ``L(p, q, alpha, beta)``.

The system ``B Y' + Q Y = lam Y`` is integrated with the fourth-order
two-point Gauss Magnus scheme.  Each step applies the exact exponential of a
traceless 2x2 matrix, so the free oscillation ``exp(-B lam h)`` is
reproduced to rounding and the step error does not grow with ``lam``.
"""

import math

import numpy as np
from numba import njit

from .core.special import sph_bessel_table
from .dataset import SpectralDataset
from .potentials import make_potential

_GAUSS_OFFSET = math.sqrt(3.0) / 6.0
_MAGNUS_COEF = math.sqrt(3.0) / 6.0
# closed 6-point Newton-Cotes weights over five panels, times 5h/288
_NC6 = np.array([19.0, 75.0, 50.0, 50.0, 75.0, 19.0])
_MIN_STEPS = 10000
_STEP_PHASE = 0.3


class BracketError(RuntimeError):
    """No sign change around the expected position of an eigenvalue."""

    def __init__(self, indices):
        self.indices = list(indices)
        super().__init__(f"could not bracket eigenvalues for m = {self.indices}")


def default_steps(lam_max):
    """Uniform step count for the sweep, a multiple of 5, with ``lam h <= 0.3``."""
    n = max(_MIN_STEPS, int(math.ceil(abs(lam_max) / _STEP_PHASE)))
    return 5 * int(math.ceil(n / 5))


def _substeps(potential, n_steps):
    """Magnus sub-steps over a uniform grid of ``n_steps`` cells.

    Cells containing a breakpoint of the potential are split there so each
    sub-step sees a smooth integrand.  Returns step lengths, the potential at
    the two Gauss nodes of each sub-step, and a flag marking sub-steps that end
    on a grid node.
    """
    h = 1.0 / n_steps
    grid = np.arange(n_steps + 1) * h
    grid[-1] = 1.0
    kinks = np.asarray(getattr(potential, "breakpoints", ()), dtype=float)
    kinks = kinks[(kinks > 0) & (kinks < 1)]
    # breakpoints too close to a node add nothing but round-off
    near = np.abs(kinks * n_steps - np.round(kinks * n_steps)) < 1e-9
    kinks = kinks[~near]
    edges = np.union1d(grid, kinks)
    on_node = np.isin(edges[1:], grid)
    left, right = edges[:-1], edges[1:]
    width = right - left
    mid = 0.5 * (left + right)
    x1 = mid - _GAUSS_OFFSET * width
    x2 = mid + _GAUSS_OFFSET * width
    p1, q1 = potential(x1)
    p2, q2 = potential(x2)

    def full(v):
        return np.ascontiguousarray(np.broadcast_to(np.asarray(v, dtype=float), x1.shape))

    return width, full(p1), full(q1), full(p2), full(q2), on_node


@njit(cache=True, fastmath=False)
def _magnus_exp(lam, h, p1, q1, p2, q2):
    pm = 0.5 * (p1 + p2)
    qm = 0.5 * (q1 + q2)
    k = _MAGNUS_COEF * h * h
    gam = p2 * q1 - p1 * q2
    w11 = h * qm + k * lam * (p1 - p2)
    off = k * lam * (q1 - q2)
    w12 = -h * lam - h * pm + off + k * gam
    w21 = h * lam - h * pm + off - k * gam
    d = w11 * w11 + w12 * w21
    r = math.sqrt(abs(d))
    if d <= 0.0:
        c = math.cos(r)
        s = math.sin(r) / r if r > 1e-8 else 1.0 - r * r / 6.0
    else:
        c = math.cosh(r)
        s = math.sinh(r) / r if r > 1e-8 else 1.0 + r * r / 6.0
    return c + s * w11, s * w12, s * w21, c - s * w11


@njit(cache=True)
def _sweep_kernel(lam, y0, h, widths, p1, q1, p2, q2, on_node, record_every, n_records):
    n_lam = lam.size
    n_sub = widths.size
    y_end = np.empty((n_lam, 2))
    theta = np.empty(n_lam)
    norm2 = np.empty(n_lam)
    traj = np.empty((n_records, n_lam, 2))
    for j in range(n_lam):
        y1 = y0[0]
        y2 = y0[1]
        raw = math.atan2(y1, -y2)
        # whole turns are counted exactly; summing increments would accumulate rounding
        turns = 0
        acc = _NC6[0] * (y1 * y1 + y2 * y2)
        comp = 0.0  # Kahan compensation for the long quadrature sum
        if n_records > 0:
            traj[0, j, 0] = y1
            traj[0, j, 1] = y2
        node = 0
        for i in range(n_sub):
            e11, e12, e21, e22 = _magnus_exp(lam[j], widths[i], p1[i], q1[i], p2[i], q2[i])
            y1, y2 = e11 * y1 + e12 * y2, e21 * y1 + e22 * y2
            new_raw = math.atan2(y1, -y2)
            dth = new_raw - raw
            if dth > math.pi:
                turns -= 1
            elif dth < -math.pi:
                turns += 1
            raw = new_raw
            if not on_node[i]:
                continue
            node += 1
            r = node % 5
            if r == 0:
                wgt = _NC6[0] + _NC6[5] if i + 1 < n_sub else _NC6[5]
            else:
                wgt = _NC6[r]
            term = wgt * (y1 * y1 + y2 * y2) - comp
            tmp = acc + term
            comp = (tmp - acc) - term
            acc = tmp
            if n_records > 0 and node % record_every == 0:
                traj[node // record_every, j, 0] = y1
                traj[node // record_every, j, 1] = y2
        y_end[j, 0] = y1
        y_end[j, 1] = y2
        theta[j] = raw + 2.0 * math.pi * turns
        norm2[j] = acc * 5.0 * h / 288.0
    return y_end, theta, norm2, traj


def _sweep(potential, lam, y0, n_steps, record_every=0):
    """Integrate from 0 to 1 for every ``lam`` at once.

    Returns a dict with the end state ``y`` (shape ``lam.shape + (2,)``), the
    unwrapped Pruefer angle ``theta`` at ``x = 1`` and ``norm2``, the
    Newton-Cotes integral of ``|Y|^2`` (only meaningful when ``n_steps`` is a
    multiple of 5); with ``record_every`` the states every that many steps.
    """
    lam = np.asarray(lam, dtype=float)
    widths, p1, q1, p2, q2, on_node = _substeps(potential, n_steps)
    n_records = n_steps // record_every + 1 if record_every else 0
    y, theta, norm2, traj = _sweep_kernel(
        np.ascontiguousarray(lam.ravel()), np.asarray(y0, dtype=float), 1.0 / n_steps,
        widths, p1, q1, p2, q2, on_node, max(int(record_every), 1), n_records,
    )
    out = {
        "y": y.reshape(lam.shape + (2,)),
        "theta": theta.reshape(lam.shape),
        "norm2": norm2.reshape(lam.shape),
    }
    if record_every:
        out["trajectory"] = traj.reshape((n_records,) + lam.shape + (2,))
    return out


def boundary_vector(alpha):
    """Initial vector ``(sin alpha, -cos alpha)`` satisfying the left condition."""
    return np.array([math.sin(alpha), -math.cos(alpha)])


def integrate_dirac(potential, lam, init, mesh, substeps=10):
    """Solve ``B Y' + Q Y = lam Y`` with ``Y(0) = init``, sampled on ``mesh``.

    The mesh must be uniform; each cell is split into ``substeps`` Magnus
    steps.  Returns shape ``(len(mesh), 2)`` for scalar ``lam`` and
    ``(len(mesh),) + lam.shape + (2,)`` otherwise.
    """
    potential = make_potential(potential)
    init = np.asarray(init, dtype=float)
    if not np.any(init):
        raise ValueError("initial vector must be nonzero")
    pts = np.asarray(getattr(mesh, "points", mesh), dtype=float)
    cells = pts.size - 1
    if cells < 1 or not np.allclose(np.diff(pts), 1.0 / cells, rtol=1e-9, atol=1e-12):
        raise ValueError("integrate_dirac expects a uniform mesh on [0, 1]")
    res = _sweep(potential, lam, init, cells * substeps, record_every=substeps)
    return res["trajectory"]


def char_value(potential, alpha, beta, lam, n_steps=None):
    """``y1(1) cos beta + y2(1) sin beta`` for the solution leaving the alpha-boundary vector."""
    potential = make_potential(potential)
    lam = np.asarray(lam, dtype=float)
    n_steps = n_steps or default_steps(np.max(np.abs(lam)))
    y = _sweep(potential, lam, boundary_vector(alpha), n_steps)["y"]
    val = y[..., 0] * math.cos(beta) + y[..., 1] * math.sin(beta)
    return val[()] if val.ndim == 0 else val


def pruefer_angle(potential, alpha, lam, n_steps=None):
    """Continuous polar angle ``theta(lam, 1)`` with ``Y = r (sin theta, -cos theta)``, ``theta(lam, 0) = alpha``.

    ``theta(., 1)`` is increasing and ``lam_m`` solves ``theta = beta + m pi``.
    """
    potential = make_potential(potential)
    lam = np.asarray(lam, dtype=float)
    n_steps = n_steps or default_steps(np.max(np.abs(lam)))
    return _sweep(potential, lam, boundary_vector(alpha), n_steps)["theta"]


def find_eigenvalues(potential, alpha, beta, M, n_steps=None, tol=1e-13, max_iter=60):
    """Eigenvalues ``lam_m``, ``m = -M .. M``, of ``L(p, q, alpha, beta)``.

    The root for index ``m`` solves ``theta(lam, 1) = beta + m pi`` where
    ``theta`` is the Pruefer angle, so the index is exact.  It is bracketed
    around ``m pi + beta - alpha`` (half-width pi/2, widened once to 0.95 pi)
    and then located by Newton's method with bisection fallback, using
    ``d theta / d lam = integral |phi|^2 / r(1)^2``.  The iteration is
    vectorised over all ``m``.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    potential = make_potential(potential)
    m = np.arange(-M, M + 1)
    guess = m * math.pi + (beta - alpha)
    n_steps = n_steps or default_steps(np.max(np.abs(guess)) + math.pi)
    n_steps = 5 * int(math.ceil(n_steps / 5))
    target = beta + m * math.pi
    y0 = boundary_vector(alpha)

    def g(lam):
        res = _sweep(potential, lam, y0, n_steps)
        r2 = np.sum(res["y"] ** 2, axis=-1)
        return res["theta"] - target, res["norm2"] / r2

    lo, hi = guess - math.pi / 2, guess + math.pi / 2
    glo, _ = g(lo)
    ghi, _ = g(hi)
    bad = ~((glo <= 0) & (ghi >= 0))
    if bad.any():
        lo = np.where(bad, guess - 0.95 * math.pi, lo)
        hi = np.where(bad, guess + 0.95 * math.pi, hi)
        glo, _ = g(lo)
        ghi, _ = g(hi)
        bad = ~((glo <= 0) & (ghi >= 0))
        if bad.any():
            raise BracketError(m[bad])

    lam = np.clip(guess, lo, hi)
    for _ in range(max_iter):
        val, slope = g(lam)
        lo = np.where(val < 0, lam, lo)
        hi = np.where(val > 0, lam, hi)
        step = val / slope
        new = lam - step
        outside = (new <= lo) | (new >= hi) | ~np.isfinite(new)
        new = np.where(outside, 0.5 * (lo + hi), new)
        converged = np.abs(new - lam) <= tol * np.maximum(1.0, np.abs(lam))
        lam = new
        if converged.all():
            break
    else:
        raise RuntimeError("eigenvalue iteration did not converge")
    if np.any(np.diff(lam) <= 0):
        raise RuntimeError("eigenvalues are not strictly increasing")
    return lam


def norming_constants(potential, alpha, lam, n_steps=None):
    """``alpha_m = integral_0^1 |phi_alpha(lam_m, x)|^2 dx`` by composite 6-point Newton-Cotes."""
    potential = make_potential(potential)
    lam = np.asarray(lam, dtype=float)
    n_steps = n_steps or default_steps(np.max(np.abs(lam)))
    n_steps = 5 * int(math.ceil(n_steps / 5))
    return _sweep(potential, lam, boundary_vector(alpha), n_steps)["norm2"]


def spectral_data(potential, alpha, beta, M, n_steps=None):
    """Exact spectral data ``-M .. M`` packed as a :class:`SpectralDataset`."""
    potential = make_potential(potential)
    lam = find_eigenvalues(potential, alpha, beta, M, n_steps=n_steps)
    nc = norming_constants(potential, alpha, lam, n_steps=n_steps)
    return SpectralDataset(alpha, beta, np.arange(-M, M + 1), lam, nc)


def nsbf_eval_C(coeffs, lam, x):
    """Truncated Neumann series for ``C(lam, x)`` from the coefficients ``K_n^C(x)``.

    ``coeffs`` has shape ``(N + 1, 2, 2)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    n_terms = coeffs.shape[0]
    j = sph_bessel_table(2 * n_terms - 1, np.asarray(lam * x))
    out = np.array([math.cos(lam * x), math.sin(lam * x)])
    for n in range(n_terms):
        out = out + 2.0 * (-1) ** n * coeffs[n] @ j[2 * n:2 * n + 2]
    return out
