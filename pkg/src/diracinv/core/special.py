"""Legendre polynomials and spherical Bessel functions of the first kind."""

import numpy as np

_SERIES_CUTOFF = 0.1
_SERIES_TERMS = 12
_DOMAIN_SLACK = 1e-12


def legendre_eval(n, t):
    """Evaluate the Legendre polynomial ``P_n`` by the three-term recurrence.

    ``t`` may be a scalar or an array; values outside ``[-1, 1]`` (up to a
    rounding slack) raise ``ValueError``.
    """
    if n < 0:
        raise ValueError(f"Legendre degree must be nonnegative, got {n}")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + _DOMAIN_SLACK):
        raise ValueError("Legendre argument outside [-1, 1]")
    p_prev = np.ones_like(t)
    if n == 0:
        return p_prev[()]
    p = t.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * t * p - k * p_prev) / (k + 1)
    return p[()]


def sph_bessel_seq(n_max, z):
    """Return ``[j_0(z), ..., j_{n_max}(z)]`` for a single real ``z``."""
    return sph_bessel_table(n_max, np.asarray(float(z)))


def sph_bessel_table(n_max, z):
    """Spherical Bessel functions ``j_0 .. j_{n_max}`` at every entry of ``z``.

    Returns an array of shape ``z.shape + (n_max + 1,)``.  Three regimes are
    used on ``a = |z|``:

    * ``a < 0.1``: ascending power series;
    * ``a > n_max``: upward recurrence from the closed forms of ``j_0, j_1``
      (stable while the order stays below the argument);
    * otherwise: Miller's downward recurrence, normalised against whichever of
      ``j_0``, ``j_1`` is larger in magnitude.

    Odd orders pick up the sign of ``z``; ``z = 0`` gives the exact limits.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    z = np.asarray(z, dtype=float)
    a = np.abs(z).ravel()
    out = np.zeros((a.size, n_max + 1))

    small = a < _SERIES_CUTOFF
    up = a > max(n_max, _SERIES_CUTOFF)
    miller = ~small & ~up
    if small.any():
        out[small] = _series(n_max, a[small])
    if up.any():
        out[up] = _upward(n_max, a[up])
    if miller.any():
        out[miller] = _miller(n_max, a[miller])

    neg = z.ravel() < 0
    if neg.any() and n_max >= 1:
        out[neg, 1::2] *= -1.0
    return out.reshape(z.shape + (n_max + 1,))


def _series(n_max, a):
    out = np.empty((a.size, n_max + 1))
    half_sq = -0.5 * a * a
    lead = np.ones_like(a)
    for n in range(n_max + 1):
        if n > 0:
            lead = lead * a / (2 * n + 1)
        term = np.ones_like(a)
        total = term.copy()
        for k in range(1, _SERIES_TERMS):
            term = term * half_sq / (k * (2 * n + 2 * k + 1))
            total += term
        out[:, n] = lead * total
    return out


def _upward(n_max, a):
    out = np.empty((a.size, n_max + 1))
    s, c = np.sin(a), np.cos(a)
    out[:, 0] = s / a
    if n_max >= 1:
        out[:, 1] = (out[:, 0] - c) / a
    for n in range(1, n_max):
        out[:, n + 1] = (2 * n + 1) / a * out[:, n] - out[:, n - 1]
    return out


def _miller(n_max, a):
    top = max(n_max, int(np.ceil(a.max())))
    start = top + int(np.sqrt(40.0 * top)) + 15
    out = np.zeros((a.size, n_max + 1))
    f_hi = np.zeros_like(a)
    f = np.full_like(a, 1e-300)
    for n in range(start, 0, -1):
        f_lo = (2 * n + 1) / a * f - f_hi
        f_hi, f = f, f_lo
        # f now holds the unnormalised j_{n-1}, f_hi holds j_n
        if n - 1 <= n_max:
            out[:, n - 1] = f
        if n <= n_max:
            out[:, n] = f_hi
        big = np.abs(f) > 1e250
        if big.any():
            f[big] *= 1e-250
            f_hi[big] *= 1e-250
            out[big] *= 1e-250
    s, c = np.sin(a), np.cos(a)
    j0 = s / a
    j1 = (j0 - c) / a
    f1 = out[:, 1] if n_max >= 1 else f_hi
    use_j0 = np.abs(j0) >= np.abs(j1)
    # normalise against whichever of j0, j1 is further from a zero
    num = np.where(use_j0, j0, j1)
    den = np.where(use_j0, out[:, 0], f1)
    scale = num / den
    return out * scale[:, None]
