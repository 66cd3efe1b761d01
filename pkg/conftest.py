"""
Shared fixtures for the banach-qm test suite
"""

import numpy as np
import pytest

from banach_qm import config
from banach_qm.models import PSpace


@pytest.fixture(autouse=True)
def default_settings(monkeypatch):
    """Every test starts from default settings, unaffected by the caller's environment"""
    for env_var in config.ENV_VARS.values():
        monkeypatch.delenv(env_var, raising=False)
    config.configure()
    yield
    config.configure()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def _complex_normal(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def random_vector(rng):
    def make(n):
        return _complex_normal(rng, n)

    return make


@pytest.fixture
def random_unit(rng):
    """Unit vector in the p-norm"""
    def make(space: PSpace):
        x = _complex_normal(rng, space.dim)
        return x / np.sum(np.abs(x) ** space.p) ** (1.0 / space.p)

    return make


@pytest.fixture
def random_scalar_type(rng):
    """
    Well-conditioned non-normal V D V^-1 with separated eigenvalues.

    Returns (matrix, eigenvector matrix V, eigenvalues). Eigenvalues are real
    unless complex=True; `repeat` duplicates the first eigenvalue that many
    extra times.
    """
    def make(n, complex_spectrum=False, repeat=0, spread=1.0):
        base = np.arange(n, dtype=float) - (n - 1) / 2.0
        eigenvalues = spread * (base + rng.uniform(-0.2, 0.2, n))
        if complex_spectrum:
            eigenvalues = eigenvalues + 1j * rng.uniform(-1, 1, n)
        for k in range(1, repeat + 1):
            eigenvalues[k] = eigenvalues[0]
        v = np.eye(n) + 0.3 * _complex_normal(rng, n, n) / np.sqrt(n)
        matrix = v @ np.diag(eigenvalues) @ np.linalg.inv(v)
        return matrix, v, eigenvalues

    return make


@pytest.fixture
def random_hermitian(rng):
    def make(n):
        a = _complex_normal(rng, n, n)
        return (a + a.conj().T) / 2.0

    return make
