import math
import time

import pytest

from diracinv import GelfandLevitanInverter, forward
from diracinv.potentials import make_potential, zero

C_ALPHA = -math.pi / 2

# (potential, alpha, beta, M); the largest M needed per potential, restricted on use
_DATASETS = {
    "zero": ("zero", C_ALPHA, 0.0, 100),
    "example1": ("example1", C_ALPHA, 0.0, 1000),
    "example2": ("example2", C_ALPHA, 0.0, 100),
    "example2_a0": ("example2", 0.0, 0.0, 100),
    "example3": ("example3", C_ALPHA, 0.0, 20),
    "example3_b": ("example3", C_ALPHA, math.pi / 4, 20),
    "example4": ("example4", C_ALPHA, 0.0, 20),
    "constant": ("constant(0.3,0)", C_ALPHA, 0.0, 500),
}


class DataCache:
    def __init__(self):
        self._store = {}

    def __call__(self, key, M=None):
        if key not in self._store:
            name, alpha, beta, m_max = _DATASETS[key]
            self._store[key] = forward.spectral_data(make_potential(name), alpha, beta, m_max)
        data = self._store[key]
        return data if M is None else data.restrict(M)


@pytest.fixture(scope="session")
def spectra():
    """Lazily generated exact spectral data shared across the session."""
    return DataCache()


def _invert(data, **params):
    t0 = time.perf_counter()
    inv = GelfandLevitanInverter(**params).fit(data)
    return inv, time.perf_counter() - t0


@pytest.fixture(scope="session")
def warm_jit():
    # compile the integrator kernel once so timings measure the algorithm
    forward.spectral_data(zero(), C_ALPHA, 0.0, 1)


@pytest.fixture(scope="session")
def runs(spectra, warm_jit):
    """Every inversion performed for the criteria, keyed by label."""
    out = {}
    t0 = time.perf_counter()
    data = forward.spectral_data(zero(), C_ALPHA, 0.0, 100)
    inv, _ = _invert(data)
    out["null"] = (inv, time.perf_counter() - t0)
    for M in (100, 1000):
        out[f"ex1_exact_{2 * M + 1}"] = _invert(spectra("example1", M))
    for M in (5, 25):
        out[f"ex1_aev_{2 * M + 1}"] = _invert(spectra("example1", M), m_total=5000)
    out["ex2_aev_21"] = _invert(spectra("example2", 10), m_total=2500)
    out["ex3_aev_41"] = _invert(spectra("example3", 20), m_total=5000)
    out["ex3_hidden_beta_41"] = _invert(spectra("example3_b", 20).with_beta(None), m_total=5000)
    out["ex4_aev_41"] = _invert(spectra("example4", 20), m_total=5000)
    return out


ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def acceptance_log():
    """``record(number, passed, detail)`` stores the one-line verdict for a criterion."""

    def record(number, title, passed, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
