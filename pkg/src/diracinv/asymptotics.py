"""Large-index asymptotics of spectral data: fitting, order selection and extension.

Eigenvalues and norming constants behave like

    lam_m   = m pi + (beta - alpha) + c_1/m + ... + c_K/m^K
    alpha_m = 1 + a_1/m + ... + a_K/m^K

for a potential with ``K`` square-integrable derivatives.  The constants are
fitted by linear least squares on the outer half of the known indices; when
``beta`` is unknown it enters the eigenvalue fit as a constant term.
"""

import math
from dataclasses import dataclass, field
import numpy as np

from .dataset import SpectralDataset

DEFAULT_K_MAX = 12
IMPROVEMENT = 0.5
MAX_CONDITION = 1e12


class IllConditionedFit(RuntimeError):
    pass


@dataclass
class AsymptoticFit:
    K: int
    c: np.ndarray
    a: np.ndarray
    alpha: float
    beta: float
    beta_recovered: bool
    residuals: dict = field(default_factory=dict)
    band: np.ndarray = None
    conditions: dict = field(default_factory=dict)

    @property
    def shift(self):
        return self.beta - self.alpha

    def eigenvalues(self, m):
        m = np.asarray(m, dtype=float)
        return m * math.pi + self.shift + _series(self.c, m)

    def norming(self, m):
        return 1.0 + _series(self.a, np.asarray(m, dtype=float))


def _series(coef, m):
    out = np.zeros_like(m, dtype=float)
    # Horner in 1/m, highest power first
    for cj in coef[::-1]:
        out = (out + cj) / m
    return out


def fitting_band(data):
    """Indices ``|m| >= ceil(M / 2)`` of a symmetric dataset."""
    lo = max(1, math.ceil(data.M / 2))
    return data.m[np.abs(data.m) >= lo]


def _design(m, K, with_constant):
    cols = [1.0 / m**j for j in range(1, K + 1)]
    if with_constant:
        cols = [np.ones_like(m)] + cols
    if not cols:
        return np.zeros((m.size, 0))
    return np.column_stack(cols)


def _lstsq(V, r):
    if V.shape[1] == 0:
        return np.zeros(0), float(np.linalg.norm(r)), 1.0
    cond = float(np.linalg.cond(V))
    # column scaling only for the solve; the reported condition is of V itself
    scale = np.linalg.norm(V, axis=0)
    coef, *_ = np.linalg.lstsq(V / scale, r, rcond=None)
    coef = coef / scale
    return coef, float(np.linalg.norm(V @ coef - r)), cond


def _ratio(new, old):
    # an exact fit cannot improve further
    return new / old if old > 0 else 1.0


def fit_asymptotics(data, beta=None, k_max=DEFAULT_K_MAX, improvement=IMPROVEMENT):
    """Fit the expansions for every ``K <= k_max`` and select ``K``.

    ``beta`` overrides ``data.beta``; when both are ``None`` the right
    boundary angle is fitted.  The selected ``K`` is the largest order at
    which both the eigenvalue and the norming-constant residuals are at most
    ``improvement`` times their values for ``K - 1`` (``K = 1`` when no order
    qualifies).  Orders whose design matrix has condition number above 1e12,
    or that would leave no redundancy in the band, are not tried.
    """
    if not data.is_symmetric():
        raise ValueError("asymptotic fit needs symmetric spectral data")
    b = data.beta if beta is None else beta
    recover_beta = b is None
    band = fitting_band(data)
    sel = np.isin(data.m, band)
    m = band.astype(float)
    lam = data.lam[sel]
    nc = data.norming[sel]
    r_nc = nc - 1.0
    if recover_beta:
        r_lam = lam - (m * math.pi - data.alpha)
    else:
        r_lam = lam - (m * math.pi + (b - data.alpha))

    extra = 1 if recover_beta else 0
    k_cap = min(k_max, m.size - extra - 1)
    if k_cap < 1:
        raise ValueError("not enough spectral data in the fitting band")

    fits = {}
    residuals = {}
    conditions = {}
    for K in range(0, k_cap + 1):
        V = _design(m, K, recover_beta)
        cl, rl, cond_l = _lstsq(V, r_lam)
        ca, ra, cond_a = _lstsq(_design(m, K, False), r_nc)
        cond = max(cond_l, cond_a)
        if cond > MAX_CONDITION:
            if K == 0:
                raise IllConditionedFit("asymptotic fit is ill-conditioned")
            break
        fits[K] = (cl, ca)
        residuals[K] = {"lam": rl, "norming": ra}
        conditions[K] = cond

    if max(residuals) < 1:
        raise ValueError("not enough spectral data in the fitting band")
    residuals[0]["ratio"] = 1.0
    for K in range(1, max(residuals) + 1):
        residuals[K]["ratio"] = max(_ratio(residuals[K][key], residuals[K - 1][key]) for key in ("lam", "norming"))
    K_sel = 1
    for K in range(2, max(residuals) + 1):
        if residuals[K]["ratio"] <= improvement:
            K_sel = K

    cl, ca = fits[K_sel]
    if recover_beta:
        beta_fit = float(cl[0])
        c = cl[1:]
    else:
        beta_fit = float(b)
        c = cl
    return AsymptoticFit(
        K=K_sel,
        c=np.asarray(c, dtype=float),
        a=np.asarray(ca, dtype=float),
        alpha=float(data.alpha),
        beta=beta_fit,
        beta_recovered=recover_beta,
        residuals=residuals,
        band=band,
        conditions=conditions,
    )


def generate_aevs(fit, data, m_total):
    """Extend ``data`` to indices ``-m_total .. m_total`` with asymptotic values.

    Known entries are copied unchanged; the result carries the fitted (or
    given) ``beta``.
    """
    if not data.is_symmetric():
        raise ValueError("data must be symmetric")
    if m_total < data.M:
        raise ValueError("m_total must not be smaller than the data range")
    m = np.arange(-m_total, m_total + 1)
    lam = np.empty(m.size)
    nc = np.empty(m.size)
    known = np.abs(m) <= data.M
    new = ~known
    lam[known] = data.lam
    nc[known] = data.norming
    lam[new] = fit.eigenvalues(m[new])
    nc[new] = fit.norming(m[new])
    return SpectralDataset(data.alpha, fit.beta, m, lam, nc)
