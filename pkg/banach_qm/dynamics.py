"""
Evolution postulate: U(t) = exp(-itH) through the spectral calculus

States are never renormalized along a trajectory; for p != 2 or non-normal H
the p-norm of x(t) = U(t) x0 drifts. Units have hbar = 1.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from . import config
from .errors import ZeroVector
from .measurement import transition_probabilities
from .models import CMatrix, CVector, EigenBasis, PSpace, SpectralDecomposition, as_matrix, as_vector
from .sip_space import normalize, p_norm
from .spectral import func_calc, reconstruct
from .states import require_real_spectrum

logger = logging.getLogger(__name__)


class Propagator:
    """One-parameter group U(t) = sum_k exp(-it lambda_k) E_k for a real-spectrum H"""

    def __init__(self, hamiltonian: SpectralDecomposition, tol: Optional[float] = None, cache_size: int = 256):
        require_real_spectrum(hamiltonian, tol)
        self.hamiltonian = hamiltonian
        self.generator = reconstruct(hamiltonian)
        self._unitary = lru_cache(maxsize=cache_size)(self._compute)

    def _compute(self, t: float) -> CMatrix:
        return func_calc(self.hamiltonian, lambda lam: np.exp(-1j * t * lam))

    def at(self, t: float) -> CMatrix:
        """U(t); the most recent cache_size time points are kept"""
        return self._unitary(float(t))

    def cache_info(self):
        return self._unitary.cache_info()

    def apply(self, x0, t: float) -> CVector:
        x0 = as_vector(x0, self.hamiltonian.dim)
        if not np.any(x0):
            raise ZeroVector("initial state must be non-zero")
        return as_vector(self.at(t) @ x0)

    def group_defect(self, s: float, t: float) -> float:
        """||U(s)U(t) - U(s+t)||_2"""
        return float(np.linalg.norm(self.at(s) @ self.at(t) - self.at(s + t), 2))

    def inverse_defect(self, t: float) -> float:
        """||U(t)U(-t) - I||_2"""
        return float(np.linalg.norm(self.at(t) @ self.at(-t) - np.eye(self.hamiltonian.dim), 2))

    def generator_error(self, delta: float) -> float:
        """||(U(delta) - I)/delta + iH||_2, which shrinks like O(delta)"""
        eye = np.eye(self.hamiltonian.dim)
        return float(np.linalg.norm((self.at(delta) - eye) / delta + 1j * self.generator, 2))

    def operator_residual(self, t: float, delta: float = 1e-5) -> float:
        """||i dU/dt - H U(t)||_2 with a central difference of step delta"""
        derivative = (self.at(t + delta) - self.at(t - delta)) / (2.0 * delta)
        return float(np.linalg.norm(1j * derivative - self.generator @ self.at(t), 2))

    def state_residual(self, x0, t: float, delta: Optional[float] = None) -> float:
        """
        ||i dx/dt - H x(t)||_2.

        With delta None the derivative is the exact -iH U(t) x0; otherwise a
        central difference of step delta.
        """
        x = self.apply(x0, t)
        if delta is None:
            derivative = -1j * (self.generator @ x)
        else:
            derivative = (self.apply(x0, t + delta) - self.apply(x0, t - delta)) / (2.0 * delta)
        return float(np.linalg.norm(1j * derivative - self.generator @ x))


def propagator_at(h: SpectralDecomposition, t: float) -> CMatrix:
    """
    U(t) = exp(-itH).

    Raises:
        ComplexSpectrum: if H has a non-real eigenvalue
    """
    return Propagator(h).at(t)


def evolve_state(h: SpectralDecomposition, x0, t: float) -> CVector:
    """
    x(t) = U(t) x0, solving i dx/dt = H x with x(0) = x0. No renormalization.

    Raises:
        ComplexSpectrum: if H has a non-real eigenvalue
        ZeroVector: if x0 = 0
    """
    return Propagator(h).apply(x0, t)


def evolve_ode_oracle(h_matrix, x0, t: float, steps: int) -> CVector:
    """
    Fixed-step classic RK4 for x' = -iHx, an independent check of evolve_state.

    For linear systems:
        k1 = A x
        k2 = A (x + dt/2 k1)
        k3 = A (x + dt/2 k2)
        k4 = A (x + dt k3)
        x_next = x + dt/6 (k1 + 2 k2 + 2 k3 + k4)
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    a = -1j * as_matrix(h_matrix)
    x = np.array(as_vector(x0, a.shape[0]))
    dt = float(t) / steps
    for _ in range(steps):
        k1 = a @ x
        k2 = a @ (x + 0.5 * dt * k1)
        k3 = a @ (x + 0.5 * dt * k2)
        k4 = a @ (x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return as_vector(x)


def trajectory(
    space: PSpace,
    h: SpectralDecomposition,
    x0,
    times: Sequence[float],
    basis: Optional[EigenBasis] = None,
    ode_steps: Optional[int] = None,
) -> List[dict]:
    """
    Sample x(t) on a time grid.

    Each row carries t, the state, its p-norm and the drift from the initial
    norm. With a basis, outcome statistics are taken at the renormalized state
    x(t)/||x(t)||_p. With ode_steps, the RK4 oracle is run from t = 0 to each t
    and its distance to the spectral solution is recorded.
    """
    propagator = Propagator(h)
    x0 = space.vector(x0)
    norm0 = p_norm(space, x0)
    rows = []
    for t in times:
        x = propagator.apply(x0, t)
        norm = p_norm(space, x)
        row = {"t": float(t), "state": x, "p_norm": norm, "norm_drift": norm - norm0}
        if basis is not None:
            row["report"] = transition_probabilities(space, basis, normalize(space, x))
        if ode_steps is not None:
            oracle = evolve_ode_oracle(propagator.generator, x0, t, ode_steps)
            row["ode_residual"] = float(np.linalg.norm(oracle - x))
        rows.append(row)

    drift = max(abs(row["norm_drift"]) for row in rows) if rows else 0.0
    logger.debug("trajectory over %d points, max |norm drift| %.3e", len(rows), drift)
    return rows
