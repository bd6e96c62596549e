"""Estimator-style front end: spectral data in, potential out.

``AsymptoticExtender`` fits the large-index expansions and extends a short
dataset; ``GelfandLevitanInverter`` runs the whole reconstruction and
predicts ``(p, q)`` at arbitrary points.  Both follow the scikit-learn
parameter conventions so they can be cloned and inspected with
``get_params``.
"""

import math
import time

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import asymptotics, glsolver, recovery
from .validation import (
    check_dataset,
    check_mesh,
    check_points,
    check_positive_int,
    check_variant_alpha,
)


class StageError(RuntimeError):
    """A pipeline failure tagged with the stage it happened in."""

    def __init__(self, stage, exc):
        self.stage = stage
        self.cause = exc
        super().__init__(f"[{stage}] {exc}")


class AsymptoticExtender(TransformerMixin, BaseEstimator):
    """Fit ``lam_m`` and ``alpha_m`` expansions and append asymptotic pairs.

    ``beta`` overrides the dataset's right angle; leave both unset to fit it.
    ``m_total=None`` keeps the index range unchanged.
    """

    def __init__(self, k_max=asymptotics.DEFAULT_K_MAX, improvement=asymptotics.IMPROVEMENT,
                 m_total=None, beta=None):
        self.k_max = k_max
        self.improvement = improvement
        self.m_total = m_total
        self.beta = beta

    def fit(self, X, y=None):
        data = check_dataset(X)
        k_max = check_positive_int(self.k_max, "k_max")
        if not 0.0 < self.improvement < 1.0:
            raise ValueError("improvement must lie in (0, 1)")
        self.fit_ = asymptotics.fit_asymptotics(data, beta=self.beta, k_max=k_max,
                                                improvement=self.improvement)
        self.K_ = self.fit_.K
        self.beta_ = self.fit_.beta
        return self

    def transform(self, X):
        check_is_fitted(self, "fit_")
        data = check_dataset(X)
        if self.m_total is None or self.m_total <= data.M:
            return data if data.beta is not None else data.with_beta(self.beta_)
        return asymptotics.generate_aevs(self.fit_, data, check_positive_int(self.m_total, "m_total"))


class GelfandLevitanInverter(BaseEstimator):
    """Recover ``Q = [[p, q], [q, -p]]`` from eigenvalues and norming constants.

    After ``fit`` the estimator holds ``extender_``, ``field_`` (solved
    coefficients), ``potential_`` (values on the mesh), ``timings_`` and
    ``report_``.
    """

    def __init__(self, N=glsolver.DEFAULT_N, mesh=100, variant="C", route="first",
                 m_total=None, k_max=asymptotics.DEFAULT_K_MAX, beta=None, n_jobs=None):
        self.N = N
        self.mesh = mesh
        self.variant = variant
        self.route = route
        self.m_total = m_total
        self.k_max = k_max
        self.beta = beta
        self.n_jobs = n_jobs

    def _validated(self, X):
        data = check_dataset(X)
        variant = glsolver.check_variant(self.variant)
        check_variant_alpha(variant, data.alpha)
        if self.route not in recovery.ROUTES:
            raise ValueError(f"route must be one of {recovery.ROUTES}, got {self.route!r}")
        check_positive_int(self.N, "N", minimum=0)
        return data, variant, check_mesh(self.mesh)

    def fit(self, X, y=None):
        data, variant, mesh = self._validated(X)
        timings = {}

        def stage(name, fn):
            t0 = time.perf_counter()
            try:
                out = fn()
            except Exception as exc:
                raise StageError(name, exc) from exc
            timings[name] = time.perf_counter() - t0
            return out

        ext = AsymptoticExtender(k_max=self.k_max, m_total=self.m_total, beta=self.beta)
        stage("fit", lambda: ext.fit(data))
        full = stage("extend", lambda: ext.transform(data))
        field = stage("solve", lambda: glsolver.solve_field(full, mesh, self.N, variant,
                                                            beta=ext.beta_, n_jobs=self.n_jobs))
        pot = stage("recover", lambda: recovery.recover(field, self.route))

        self.extender_ = ext
        self.data_ = full
        self.field_ = field
        self.potential_ = pot
        self.timings_ = timings
        self.report_ = self._report(data, full, ext.fit_, field, pot, timings)
        return self

    @staticmethod
    def _report(data, full, fit, field, pot, timings):
        res = {str(k): v for k, v in fit.residuals.items()}
        return {
            "n_exact": len(data),
            "n_total": len(full),
            "alpha": data.alpha,
            "beta": fit.beta,
            "beta_recovered": fit.beta if fit.beta_recovered else None,
            "K": fit.K,
            "residuals": res,
            "c": fit.c.tolist(),
            "a": fit.a.tolist(),
            # the a_1 ~ -p(0)/pi relation is a diagnostic only
            "a1_diagnostic": {
                "a1": float(fit.a[0]) if fit.a.size else 0.0,
                "minus_p0_over_pi": float(-pot.p[0] / math.pi),
            },
            "variant": field.variant,
            "N": field.N,
            "route": pot.method,
            "mesh_size": int(field.x.size),
            "condition_max": float(field.cond.max()),
            "timings": dict(timings),
        }

    def predict(self, X):
        """``(p, q)`` at points ``X`` in [0, 1], linear between mesh values; shape ``(n, 2)``."""
        check_is_fitted(self, "potential_")
        x = check_points(X)
        pot = self.potential_
        return np.column_stack([np.interp(x, pot.x, pot.p), np.interp(x, pot.x, pot.q)])

    def score(self, X, y):
        """Negative sup error of ``predict(X)`` against reference values ``y`` of shape ``(n, 2)``."""
        return -float(np.max(np.abs(self.predict(X) - np.asarray(y, dtype=float))))
