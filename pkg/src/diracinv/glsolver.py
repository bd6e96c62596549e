"""Truncated Gelfand-Levitan systems for the Fourier-Legendre coefficients of the kernel.

Two variants are supported:

``"C"``
    kernel of the solution ``C(lam, x)`` (left boundary angle ``-pi/2``);
    unknowns ``K_n^C``, diagonal ``diag(1/(4k+1), 1/(4k+3))``.
``"alpha"``
    kernel of ``phi_alpha`` for an arbitrary left angle; unknowns
    ``K_n^alpha``, diagonal ``diag(1/(4k+3), 1/(4k+1))`` and an extra
    ``R_alpha`` on the right-hand side.

The 2x2 blocks are flattened so that block ``(n, k)`` occupies rows
``2n:2n+2`` and columns ``2k:2k+2``.  With that ordering the scalar column
``2n + i`` of the C-variant is just the spherical Bessel function of order
``2n + i`` times ``(-1)^n``, and the whole block matrix is a Gram matrix.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .core.algebra import rotation
from .core.special import sph_bessel_table

VARIANTS = ("C", "alpha")
DEFAULT_N = 10
MAX_CONDITION = 1e10


class IllConditionedError(RuntimeError):
    """The normalised truncated system is singular or nearly so."""

    def __init__(self, x, cond):
        self.x = x
        self.cond = cond
        super().__init__(f"truncated system at x={x:.6g} has condition number {cond:.3e}")


def check_variant(variant):
    v = str(variant)
    if v.lower() == "c":
        return "C"
    if v.lower() in ("alpha", "a"):
        return "alpha"
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


@dataclass(frozen=True)
class SystemBlocks:
    """Assembled truncated system at one point ``x``.

    ``W`` is the ``2(N+1)`` square block matrix, ``rhs`` the ``2 x 2(N+1)``
    row of right-hand-side blocks ``-1/2 f_k(x, x)^T`` (left-multiplied by
    ``R_alpha`` for the alpha variant), ``f`` the blocks ``f_k(x, x)``
    themselves and ``diag`` the diagonal entries of ``D_k`` flattened.
    """

    variant: str
    x: float
    N: int
    W: np.ndarray
    f: np.ndarray
    rhs: np.ndarray
    diag: np.ndarray
    alpha: float = -math.pi / 2

    def W_block(self, n, k):
        return self.W[2 * n:2 * n + 2, 2 * k:2 * k + 2]

    @property
    def D(self):
        return np.stack([np.diag(self.diag[2 * k:2 * k + 2]) for k in range(self.N + 1)])


def diag_entries(N, variant):
    k = np.arange(N + 1)
    first, second = 1.0 / (4 * k + 1), 1.0 / (4 * k + 3)
    if variant == "alpha":
        first, second = second, first
    return np.column_stack([first, second]).ravel()


def _bessel_columns(z, N, variant):
    """Scalar columns of the Bessel block vectors for every argument in ``z``."""
    j = sph_bessel_table(2 * N + 1, z)
    sign = np.repeat((-1.0) ** np.arange(N + 1), 2)
    if variant == "C":
        return j * sign
    cols = np.empty_like(j)
    cols[:, 0::2] = j[:, 1::2]
    cols[:, 1::2] = -j[:, 0::2]
    return cols * sign


def _trig_columns(lam, x, variant):
    c, s = np.cos(lam * x), np.sin(lam * x)
    if variant == "C":
        return np.column_stack([c, s])
    return np.column_stack([s, -c])


def _gram(lam, weight, x, N, variant):
    J = _bessel_columns(lam * x, N, variant)
    T = _trig_columns(lam, x, variant)
    wJ = J * weight[:, None]
    return J.T @ wJ, wJ.T @ T


@lru_cache(maxsize=4096)
def _null_terms(x, N, variant, M, shift):
    lam0 = np.arange(-M, M + 1) * math.pi + shift
    G, F = _gram(lam0, np.ones(lam0.size), x, N, variant)
    G.flags.writeable = False
    F.flags.writeable = False
    return G, F


def _check_symmetric(data):
    if not data.is_symmetric():
        raise ValueError("spectral data must cover the symmetric index range -M..M without gaps")


def assemble_system(data, x, N=DEFAULT_N, variant="C", beta=None):
    """Assemble ``W_nk(x)`` and ``f_k(x, x)`` from spectral data.

    ``beta`` overrides ``data.beta`` (needed when it was recovered).
    The zero-potential reference uses ``lam_m^0 = m pi + beta - alpha``.
    """
    variant = check_variant(variant)
    x = float(x)
    if not x > 0.0:
        raise ValueError("the system is only defined for x > 0")
    if N < 0:
        raise ValueError("N must be nonnegative")
    _check_symmetric(data)
    b = data.beta if beta is None else beta
    if b is None:
        raise ValueError("beta is unknown; recover it first or pass it explicitly")
    G, F = _gram(data.lam, 1.0 / data.norming, x, N, variant)
    G0, F0 = _null_terms(x, int(N), variant, data.M, float(b - data.alpha))
    W = x * (G - G0)
    # f_k[i, r] lives at row 2k+i of F; (-1)^k is already in the Bessel columns
    Fd = x * (F - F0)
    f = Fd.reshape(N + 1, 2, 2)
    rhs = -0.5 * Fd.T
    if variant == "alpha":
        rhs = rotation(data.alpha) @ rhs
    return SystemBlocks(variant, x, int(N), W, f, rhs, diag_entries(N, variant), float(data.alpha))


def solve_point(blocks):
    """Solve the normalised truncated system at one point.

    Returns ``(K, cond)``: ``K`` has shape ``(N + 1, 2, 2)`` and ``cond`` is
    the 2-norm condition number of ``I + A`` with
    ``A_nk = D_n^{-1/2} W_nk D_k^{-1/2}``.
    """
    x = blocks.x
    d = np.sqrt(blocks.diag)
    A = blocks.W / np.outer(d, d)
    mat = np.eye(d.size) + A
    b = blocks.rhs / d[None, :] / math.sqrt(x)
    cond = float(np.linalg.cond(mat))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedError(x, cond)
    # unknown blocks multiply from the left: xi @ mat = b  <=>  mat^T xi^T = b^T
    xi = lu_solve(lu_factor(mat.T), b.T).T
    K = xi * math.sqrt(x) / d[None, :]
    return K.reshape(2, blocks.N + 1, 2).transpose(1, 0, 2), cond


@dataclass
class CoefficientField:
    """Solved coefficients ``K_n(x_i)`` on a mesh; ``coeffs`` has shape ``(P, N + 1, 2, 2)``."""

    variant: str
    x: np.ndarray
    coeffs: np.ndarray
    cond: np.ndarray
    alpha: float = -math.pi / 2
    info: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.coeffs.shape[1] - 1

    def first(self):
        return self.coeffs[:, 0]


def default_workers():
    env = os.environ.get("DIRACINV_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def solve_field(data, mesh, N=DEFAULT_N, variant="C", beta=None, n_jobs=None):
    """Solve the truncated system at every mesh point; ``x = 0`` gets zero coefficients.

    Points are independent and are processed by ``n_jobs`` threads; results
    are stored by index so the output does not depend on scheduling.
    """
    variant = check_variant(variant)
    xs = np.asarray(getattr(mesh, "points", mesh), dtype=float)
    coeffs = np.zeros((xs.size, N + 1, 2, 2))
    cond = np.ones(xs.size)

    def work(i):
        try:
            K, c = solve_point(assemble_system(data, xs[i], N, variant, beta))
        except IllConditionedError:
            raise
        except Exception as exc:
            raise RuntimeError(f"solving at x={xs[i]:.6g} failed: {exc}") from exc
        coeffs[i] = K
        cond[i] = c

    idx = [i for i in range(xs.size) if xs[i] > 0]
    workers = n_jobs or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, idx))
    else:
        for i in idx:
            work(i)
    return CoefficientField(variant, xs, coeffs, cond, float(data.alpha), {"N": int(N), "n_data": len(data)})
