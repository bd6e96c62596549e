"""Potential definitions ``Q = [[p, q], [q, -p]]`` on [0, 1].

Built-in names accepted by :func:`make_potential`::

    zero
    constant(p0,q0)
    example1 .. example4
    <path to a CSV table with columns x,p,q>
"""

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class PotentialSpec:
    name: str
    p: Callable[[np.ndarray], np.ndarray]
    q: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    # interior points where p or q lose smoothness; the integrator steps onto them
    breakpoints: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.p(x), self.q(x)

    @property
    def is_zero(self):
        return self.name == "zero"


def zero():
    return PotentialSpec("zero", np.zeros_like, np.zeros_like)


def constant(p0=0.0, q0=0.0):
    p0, q0 = float(p0), float(q0)
    return PotentialSpec(
        "constant",
        lambda x: np.full_like(x, p0, dtype=float),
        lambda x: np.full_like(x, q0, dtype=float),
        {"p0": p0, "q0": q0},
    )


def example1():
    def p(x):
        return -0.5 * (x + 1) * np.cos(0.5 * x * (x - 2))

    def q(x):
        return 0.5 * (x + 1) * np.sin(0.5 * x * (x - 2))

    return PotentialSpec("example1", p, q)


def _example2_p(x):
    return np.abs(3.0 - np.abs(9.0 * x * x - 3.0))


_EXAMPLE2_P_KINKS = (1.0 / math.sqrt(3.0), math.sqrt(2.0 / 3.0))


def example2():
    return PotentialSpec(
        "example2", _example2_p, lambda x: -np.abs(x - 0.5),
        breakpoints=tuple(sorted(_EXAMPLE2_P_KINKS + (0.5,))),
    )


def sawtooth_breakpoints():
    """Sign changes of ``sin(10 pi x / (4 - pi x))`` inside (0, 1)."""
    pts = []
    k = 1
    while True:
        xk = 4.0 * k / (10.0 + k * math.pi)
        if xk >= 1.0:
            break
        pts.append(xk)
        k += 1
    return np.array(pts)


def _sawtooth(x):
    # -10 * integral_0^x sign(sin(10 pi s / (4 - pi s))) ds, integrated piecewise exactly
    knots = np.concatenate([[0.0], sawtooth_breakpoints()])
    signs = np.where(np.arange(knots.size) % 2 == 0, 1.0, -1.0)
    base = np.concatenate([[0.0], np.cumsum(signs[:-1] * np.diff(knots))])
    idx = np.clip(np.searchsorted(knots, x, side="right") - 1, 0, knots.size - 1)
    return -10.0 * (base[idx] + signs[idx] * (x - knots[idx]))


def example3():
    kinks = sorted(_EXAMPLE2_P_KINKS + tuple(float(v) for v in sawtooth_breakpoints()))
    return PotentialSpec("example3", _example2_p, _sawtooth, breakpoints=tuple(kinks))


def example4():
    return PotentialSpec("example4", lambda x: np.sin(6 * x), lambda x: np.cos(8 * x))


def sampled(xs, ps, qs, name="sampled"):
    """Potential given by samples, linearly interpolated."""
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    qs = np.asarray(qs, dtype=float)
    if xs.ndim != 1 or xs.size < 2 or ps.shape != xs.shape or qs.shape != xs.shape:
        raise ValueError("sampled potential needs matching 1-D arrays x, p, q")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")
    if xs[0] > 0.0 or xs[-1] < 1.0:
        raise ValueError("sample table must cover [0, 1]")
    if not (np.all(np.isfinite(ps)) and np.all(np.isfinite(qs))):
        raise ValueError("sample table contains non-finite values")
    return PotentialSpec(
        name,
        lambda x: np.interp(x, xs, ps),
        lambda x: np.interp(x, xs, qs),
        {"n_samples": int(xs.size)},
        breakpoints=tuple(float(v) for v in xs[(xs > 0) & (xs < 1)]),
    )


def read_potential_table(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    data = np.array([[float(v) for v in r[:3]] for r in rows])
    return sampled(data[:, 0], data[:, 1], data[:, 2], name=f"sampled({Path(path).name})")


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


BUILTINS = {
    "zero": zero,
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "example4": example4,
}

_CONSTANT_RE = re.compile(r"^constant\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)$")


def make_potential(spec):
    """Resolve a builtin name, ``constant(p0,q0)`` or a CSV path into a PotentialSpec."""
    if isinstance(spec, PotentialSpec):
        return spec
    text = str(spec).strip()
    if text in BUILTINS:
        return BUILTINS[text]()
    m = _CONSTANT_RE.match(text)
    if m:
        return constant(float(m.group(1)), float(m.group(2)))
    if text.startswith("sampled(") and text.endswith(")"):
        text = text[len("sampled("):-1]
    if Path(text).is_file():
        return read_potential_table(text)
    raise ValueError(f"unknown potential {spec!r}")
