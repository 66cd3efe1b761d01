"""
Lumer states and the state-dependent physical-event / physical-quantity predicates

A point state is omega_x(T) = [Tx, x]_p for a unit vector x; mixed states are
finite convex combinations of point states. A projection P is a physical
event at omega when 0 <= omega(P) <= 1 (in particular omega(P) must be real).
A real-spectrum scalar-type operator is a physical quantity at omega when
every spectral projection E(A) is a physical event there.
"""

import cmath
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import ComplexSpectrum, DimensionMismatch, ZeroVector
from .models import (
    CMatrix,
    EventValue,
    PhysicalityVerdict,
    PSpace,
    SpectralDecomposition,
    StateFunctional,
    Violation,
)
from .sip_space import normalize, p_norm, sip
from .spectral import atom_label, atom_subsets, complement, require_projection

logger = logging.getLogger(__name__)


def _unit(space: PSpace, x, tol: float) -> Tuple[np.ndarray, bool]:
    x = space.vector(x)
    norm = p_norm(space, x)
    if norm == 0.0:
        raise ZeroVector("a state needs a non-zero vector")
    if abs(norm - 1.0) <= tol:
        return x, False
    logger.debug("state vector with p-norm %.6g renormalized", norm)
    return normalize(space, x), True


def point_state(space: PSpace, x, tol: Optional[float] = None) -> StateFunctional:
    """
    omega_x(T) = [Tx, x]_p.

    A non-unit x is normalized and the state is flagged renormalized.

    Raises:
        ZeroVector: if x = 0
    """
    x, renormalized = _unit(space, x, config.resolve_tol(tol))
    return StateFunctional(space=space, terms=[(1.0, x)], renormalized=renormalized)


def mixed_state(space: PSpace, terms: Sequence[Tuple[float, object]], tol: Optional[float] = None) -> StateFunctional:
    """
    sum_j w_j omega_{x_j} with w_j >= 0 summing to 1.

    Raises:
        ValueError: if a weight is negative or the weights do not sum to 1
        ZeroVector: if any x_j = 0
    """
    tol = config.resolve_tol(tol)
    weights = [float(w) for w, _ in terms]
    if any(w < 0 for w in weights):
        raise ValueError("state weights must be non-negative")
    if abs(sum(weights) - 1.0) > tol:
        raise ValueError(f"state weights sum to {sum(weights):.12g}, expected 1")

    built, renormalized = [], False
    for w, x in terms:
        unit, flagged = _unit(space, x, tol)
        built.append((w, unit))
        renormalized = renormalized or flagged
    return StateFunctional(space=space, terms=built, renormalized=renormalized)


def evaluate(s: StateFunctional, t) -> complex:
    """omega(T) = sum_j w_j [T x_j, x_j]_p"""
    t = s.space.matrix(t)
    return complex(sum(w * sip(s.space, t @ x, x) for w, x in s.terms))


def _event_violations(label: str, value: complex, tol: float) -> List[Violation]:
    if not cmath.isfinite(value):
        return [Violation(label=label, value=value, reason="non_finite")]
    violations = []
    if abs(value.imag) > tol:
        violations.append(Violation(label=label, value=value, reason="non_real"))
    if value.real < -tol:
        violations.append(Violation(label=label, value=value, reason="negative"))
    elif value.real > 1.0 + tol:
        violations.append(Violation(label=label, value=value, reason="exceeds_one"))
    return violations


def is_physical_event(s: StateFunctional, pmat, label: str = "P", tol: Optional[float] = None) -> PhysicalityVerdict:
    """
    Decide 0 <= omega(P) <= 1 with |Im omega(P)| <= tol.

    Boundary values 0 and 1 count as physical.

    Raises:
        NotAProjection: if P is not idempotent within tolerance
    """
    tol = config.resolve_tol(tol)
    pmat = require_projection(s.space.matrix(pmat), label, tol)
    value = evaluate(s, pmat)
    violations = _event_violations(label, value, tol)
    return PhysicalityVerdict(
        is_physical=not violations,
        violations=violations,
        evaluations=[EventValue(label=label, value=value)],
    )


def require_real_spectrum(d: SpectralDecomposition, tol: Optional[float] = None) -> None:
    tol = config.resolve_tol(tol)
    worst = d.max_imag()
    if worst > tol:
        raise ComplexSpectrum(f"operator has an eigenvalue with imaginary part {worst:.3e}")


def is_physical_quantity(s: StateFunctional, d: SpectralDecomposition, tol: Optional[float] = None) -> PhysicalityVerdict:
    """
    Check that every spectral projection E(A) is a physical event at s.

    E(A) ranges over sums of atoms; by linearity omega(E(A)) is the sum of the
    atom values. All 2^k subsets are checked up to the configured atom limit,
    beyond it atoms and their complements only (verdict.exhaustive is False).

    Raises:
        ComplexSpectrum: if some eigenvalue is not real within tolerance
    """
    tol = config.resolve_tol(tol)
    require_real_spectrum(d, tol)
    if d.dim != s.space.dim:
        raise DimensionMismatch(f"operator has dim {d.dim}, state lives in dim {s.space.dim}")

    atom_values = [evaluate(s, e) for e in d.projections]
    evaluations = [
        EventValue(label=atom_label(d, (k,)), value=value)
        for k, value in enumerate(atom_values)
    ]

    subsets, exhaustive = atom_subsets(d.size)
    violations: List[Violation] = []
    for subset in subsets:
        value = complex(sum(atom_values[k] for k in subset))
        violations.extend(_event_violations(atom_label(d, subset), value, tol))

    return PhysicalityVerdict(
        is_physical=not violations,
        violations=violations,
        evaluations=evaluations,
        exhaustive=exhaustive,
    )


def complement_event(pmat, tol: Optional[float] = None) -> CMatrix:
    """
    I - P.

    Raises:
        NotAProjection: if P is not idempotent within tolerance
    """
    return complement(pmat, tol)
