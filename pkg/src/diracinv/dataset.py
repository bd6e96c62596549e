"""Spectral data containers and their on-disk JSON form."""

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class BoundaryParams:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (-math.pi / 2 <= v < math.pi / 2):
                raise ValueError(f"{name}={v} outside [-pi/2, pi/2)")


@dataclass(frozen=True)
class SpectralDataset:
    """Eigenvalues ``lam`` and norming constants ``norming`` indexed by ``m``.

    ``m`` must be the contiguous symmetric range ``-M .. M``.  ``beta`` is
    ``None`` when the right boundary condition is unknown.
    """

    alpha: float
    beta: Optional[float]
    m: np.ndarray
    lam: np.ndarray
    norming: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.int64)
        lam = np.asarray(self.lam, dtype=float)
        nc = np.asarray(self.norming, dtype=float)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "norming", nc)
        if not (m.shape == lam.shape == nc.shape) or m.ndim != 1:
            raise ValueError("m, lam and norming must be 1-D arrays of equal length")
        if m.size == 0:
            raise ValueError("empty spectral dataset")

    @property
    def M(self):
        return int(self.m[-1])

    def __len__(self):
        return int(self.m.size)

    def is_symmetric(self):
        M = int(self.m[-1])
        return self.m.size == 2 * M + 1 and np.array_equal(self.m, np.arange(-M, M + 1))

    def null_eigenvalues(self, beta=None):
        """Eigenvalues ``m pi + (beta - alpha)`` of the zero potential."""
        b = self.beta if beta is None else beta
        if b is None:
            raise ValueError("beta unknown; pass it explicitly")
        return self.m * math.pi + (b - self.alpha)

    def restrict(self, M):
        """Sub-dataset with indices ``-M .. M``."""
        keep = np.abs(self.m) <= M
        return SpectralDataset(self.alpha, self.beta, self.m[keep], self.lam[keep], self.norming[keep])

    def with_beta(self, beta):
        return SpectralDataset(self.alpha, beta, self.m, self.lam, self.norming)

    @classmethod
    def null(cls, alpha, beta, M):
        """Exact data of the zero potential: ``lam_m = m pi + beta - alpha``, norming 1."""
        m = np.arange(-M, M + 1)
        return cls(alpha, beta, m, m * math.pi + (beta - alpha), np.ones(m.size))

    def to_dict(self):
        return {
            "alpha": float(self.alpha),
            "beta": None if self.beta is None else float(self.beta),
            "data": [[int(k), float(l), float(a)] for k, l, a in zip(self.m, self.lam, self.norming)],
        }

    @classmethod
    def from_dict(cls, doc):
        rows = doc["data"]
        m = np.array([int(r[0]) for r in rows], dtype=np.int64)
        lam = np.array([float(r[1]) for r in rows])
        nc = np.array([float(r[2]) for r in rows])
        beta = doc.get("beta")
        return cls(float(doc["alpha"]), None if beta is None else float(beta), m, lam, nc)


def dumps_spectral(data):
    """Serialise to the spectral-file text; floats use shortest round-trip repr."""
    doc = data.to_dict()
    lines = ["{", f'  "alpha": {json.dumps(doc["alpha"])},', f'  "beta": {json.dumps(doc["beta"])},', '  "data": [']
    rows = [f"    [{k}, {json.dumps(l)}, {json.dumps(a)}]" for k, l, a in doc["data"]]
    lines.append(",\n".join(rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_spectral(text):
    return SpectralDataset.from_dict(json.loads(text))


def write_spectral_file(path, data):
    with open(path, "w") as fh:
        fh.write(dumps_spectral(data))


def read_spectral_file(path):
    with open(path) as fh:
        return loads_spectral(fh.read())
