"""2x2 matrix algebra used throughout the package.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)`` (or ``(..., 2, 2)``
for stacks); there is no wrapper class.
"""

import numpy as np

I2 = np.eye(2)
B = np.array([[0.0, 1.0], [-1.0, 0.0]])
SIGMA2 = np.array([[1.0, 0.0], [0.0, -1.0]])
SIGMA3 = np.array([[0.0, 1.0], [1.0, 0.0]])


def rotation(alpha):
    """Rotation matrix by the angle ``alpha`` (radians)."""
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s], [s, c]])


def c_alpha(alpha):
    """Reflection ``SIGMA2 cos 2a + SIGMA3 sin 2a`` tied to the left boundary condition."""
    return SIGMA2 * np.cos(2 * alpha) + SIGMA3 * np.sin(2 * alpha)


def conj_b(a):
    """Conjugation ``B A B^T``; acts entrywise as ``[[a22, -a21], [-a12, a11]]``."""
    a = np.asarray(a)
    out = np.empty_like(a)
    out[..., 0, 0] = a[..., 1, 1]
    out[..., 0, 1] = -a[..., 1, 0]
    out[..., 1, 0] = -a[..., 0, 1]
    out[..., 1, 1] = a[..., 0, 0]
    return out


def commutator_b(a):
    """``A B - B A``, the Goursat readout of a kernel value on the diagonal."""
    a = np.asarray(a)
    return a @ B - B @ a


def potential_matrix(p, q):
    """``Q = [[p, q], [q, -p]]`` for scalar or array ``p``, ``q``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = np.empty(np.broadcast(p, q).shape + (2, 2))
    out[..., 0, 0] = p
    out[..., 0, 1] = q
    out[..., 1, 0] = q
    out[..., 1, 1] = -p
    return out


def op_norm(a):
    """Operator norm (largest singular value) of a 2x2 matrix or a stack."""
    return np.linalg.norm(np.asarray(a, dtype=float), ord=2, axis=(-2, -1))
