"""
Data models for banach-qm

Coordinate vectors and operators are plain numpy complex arrays
(CVector: shape (n,), CMatrix: shape (n, n)); everything built on top of
them is an immutable pydantic model.
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import DimensionMismatch

CVector = npt.NDArray[np.complex128]
CMatrix = npt.NDArray[np.complex128]


def as_vector(x, dim: Optional[int] = None) -> CVector:
    """Coerce array-like input to a read-only complex vector, checking its length"""
    arr = np.array(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got array of shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"vector has {arr.shape[0]} coordinates, space has dim {dim}")
    arr.setflags(write=False)
    return arr


def as_matrix(m, dim: Optional[int] = None) -> CMatrix:
    """Coerce array-like input to a read-only square complex matrix"""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got array of shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"matrix is {arr.shape[0]}x{arr.shape[1]}, space has dim {dim}")
    arr.setflags(write=False)
    return arr


class PSpace(BaseModel):
    """The space C^n with the p-norm, 1 <= p < inf"""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(ge=1)
    p: float = Field(ge=1.0, allow_inf_nan=False)

    @property
    def q(self) -> float:
        """Conjugate exponent p/(p-1); inf when p == 1"""
        return math.inf if self.p == 1.0 else self.p / (self.p - 1.0)

    @property
    def is_hilbert(self) -> bool:
        return self.p == 2.0

    def vector(self, x) -> CVector:
        return as_vector(x, self.dim)

    def matrix(self, m) -> CMatrix:
        return as_matrix(m, self.dim)

    def basis_vector(self, k: int) -> CVector:
        e = np.zeros(self.dim, dtype=np.complex128)
        e[k] = 1.0
        return as_vector(e)


class _ArrayModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class SpectralDecomposition(_ArrayModel):
    """
    Finite spectral resolution T = sum_k lambda_k E_k.

    Eigenvalues are complex (real spectra have exactly zero imaginary part
    after decomposition); projections are n x n idempotents. Algebraic
    invariants are enforced by spectral.make_decomposition and
    spectral.decompose, the model itself only checks shapes.
    """

    eigenvalues: Tuple[complex, ...]
    projections: Tuple[np.ndarray, ...]
    dim: int = Field(ge=1)

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _coerce_eigenvalues(cls, value):
        return tuple(complex(lam) for lam in value)

    @field_validator("projections", mode="before")
    @classmethod
    def _coerce_projections(cls, value):
        return tuple(as_matrix(m) for m in value)

    @model_validator(mode="after")
    def _check_shapes(self):
        if len(self.eigenvalues) != len(self.projections):
            raise DimensionMismatch("eigenvalue and projection counts differ")
        if not self.eigenvalues:
            raise DimensionMismatch("decomposition needs at least one atom")
        for m in self.projections:
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"projection of shape {m.shape} in a dim-{self.dim} decomposition")
        return self

    @property
    def pairs(self) -> List[Tuple[complex, CMatrix]]:
        return list(zip(self.eigenvalues, self.projections))

    @property
    def size(self) -> int:
        """Number of atoms (distinct eigenvalues)"""
        return len(self.eigenvalues)

    def max_imag(self) -> float:
        return max(abs(complex(lam).imag) for lam in self.eigenvalues)

    def real_eigenvalues(self) -> Tuple[float, ...]:
        return tuple(complex(lam).real for lam in self.eigenvalues)


class StateFunctional(_ArrayModel):
    """
    Convex combination sum_j w_j omega_{x_j} of point states omega_x(T) = [Tx, x].

    renormalized records that at least one vector was rescaled to unit p-norm
    when the state was built.
    """

    space: PSpace
    terms: Tuple[Tuple[float, np.ndarray], ...]
    renormalized: bool = False

    @field_validator("terms", mode="before")
    @classmethod
    def _coerce_terms(cls, value):
        return tuple((float(w), as_vector(x)) for w, x in value)

    @model_validator(mode="after")
    def _check_terms(self):
        if not self.terms:
            raise ValueError("a state needs at least one term")
        for w, x in self.terms:
            if w < 0:
                raise ValueError(f"negative weight {w}")
            if x.shape[0] != self.space.dim:
                raise DimensionMismatch(f"state vector has {x.shape[0]} coordinates, space has dim {self.space.dim}")
        return self

    @property
    def is_point_state(self) -> bool:
        return len(self.terms) == 1

    @property
    def vector(self) -> CVector:
        """The vector of a point state"""
        if not self.is_point_state:
            raise ValueError("mixed state has no single vector")
        return self.terms[0][1]


class EventValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    value: complex


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    value: complex
    reason: str  # non_real, negative, exceeds_one, non_finite


class PhysicalityVerdict(BaseModel):
    """Outcome of an event or quantity check at a state"""

    model_config = ConfigDict(frozen=True)

    is_physical: bool
    violations: Tuple[Violation, ...] = ()
    evaluations: Tuple[EventValue, ...] = ()
    exhaustive: bool = True

    @model_validator(mode="after")
    def _consistent(self):
        if self.is_physical != (len(self.violations) == 0):
            raise ValueError("is_physical must be true exactly when there are no violations")
        return self


class EigenBasis(_ArrayModel):
    """
    Eigenvector basis e_n (columns of vectors) with dual functionals e*_n
    (rows of duals) such that duals @ vectors = I.

    atoms[n] is the index of the spectral atom e_n belongs to.
    """

    space: PSpace
    vectors: np.ndarray
    duals: np.ndarray
    eigenvalues: Tuple[float, ...]
    atoms: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def vector(self, n: int) -> CVector:
        return as_vector(self.vectors[:, n])

    def dual(self, n: int) -> CVector:
        return as_vector(self.duals[n, :])


class Outcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    eigenvalue: float
    raw_value: complex
    probability: Optional[float] = None
    atom: int = 0


class MeasurementReport(_ArrayModel):
    """
    Born-rule statistics of an eigenbasis at a unit state.

    outcomes are per basis vector; eigenvalue_outcomes aggregate basis
    vectors of the same eigenvalue (identical for simple spectra).
    physical is decided on the aggregated values, which do not depend on the
    basis chosen inside a degenerate eigenspace.
    """

    outcomes: Tuple[Outcome, ...]
    eigenvalue_outcomes: Tuple[Outcome, ...]
    expectation: complex
    conserved: bool
    conservation_residual: float
    physical: bool
    state: np.ndarray
    input_norm: float
    renormalized: bool = False

    def probabilities(self) -> np.ndarray:
        """Aggregated outcome probabilities; only meaningful when physical"""
        return np.array([o.raw_value.real for o in self.eigenvalue_outcomes])


class QubitScenario(_ArrayModel):
    """
    Worked two-level example: operator, its decomposition and a closed-form
    physicality predicate on unit (u, v).

    event_values(u, v) returns the closed-form omega_z(E) of each atom and
    condition_values(u, v) the pair of expressions whose sign decides
    physicality.
    """

    name: str
    space: PSpace
    matrix: np.ndarray
    hamiltonian: SpectralDecomposition
    event_labels: Tuple[str, ...]
    event_values: Callable[[complex, complex], Tuple[complex, ...]]
    condition_values: Callable[[complex, complex], Tuple[complex, complex]]
    closed_form: Callable[[complex, complex], bool]
