"""
Measurement postulate: eigenbases with dual bases, transition probabilities
p(x|e_n) = e*_n(x) [e_n, x]_p, expectations and sampled collapse.

sum_n e*_n(x) [e_n, x]_p = [x, x]_p = 1 for every unit x, even when single
terms are complex or negative; such reports are kept as diagnostics but
refuse sampling.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from . import config
from .errors import DegenerateBasis, DimensionMismatch, NotNormalized, NotPhysical, ZeroVector
from .models import CVector, EigenBasis, MeasurementReport, Outcome, PSpace, SpectralDecomposition, as_vector
from .sip_space import dual_functional, normalize, p_norm
from .states import require_real_spectrum

logger = logging.getLogger(__name__)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate v so its first largest-modulus coordinate is real positive"""
    mod = np.abs(v)
    i = int(np.argmax(mod >= mod.max() * (1.0 - 1e-9)))
    return v * (np.conj(v[i]) / mod[i])


def eigen_basis(space: PSpace, d: SpectralDecomposition, tol: Optional[float] = None) -> EigenBasis:
    """
    Biorthogonal eigenbasis of a real-spectrum decomposition.

    Each atom E_k contributes rank(E_k) vectors spanning its range (one for a
    simple eigenvalue), normalized to unit p-norm. The dual functionals are
    the rows of the inverse eigenvector matrix, so e*_n(e_m) = delta_nm.

    Raises:
        ComplexSpectrum: if an eigenvalue is not real
        DegenerateBasis: if the atoms do not yield a well-conditioned basis
    """
    tol = config.resolve_tol(tol)
    require_real_spectrum(d, tol)
    if d.dim != space.dim:
        raise DimensionMismatch(f"operator has dim {d.dim}, space has dim {space.dim}")

    columns: List[np.ndarray] = []
    eigenvalues: List[float] = []
    atoms: List[int] = []
    for k, e in enumerate(d.projections):
        rank = int(round(np.trace(e).real))
        if rank < 1:
            raise DegenerateBasis(f"atom {k} has rank {rank}")
        u, _, _ = np.linalg.svd(e)
        for r in range(rank):
            columns.append(normalize(space, _fix_phase(u[:, r])))
            eigenvalues.append(d.eigenvalues[k].real)
            atoms.append(k)

    if len(columns) != space.dim:
        raise DegenerateBasis(f"atoms supply {len(columns)} vectors for a dim-{space.dim} space")
    vectors = np.column_stack(columns)
    cond = float(np.linalg.cond(vectors))
    if not np.isfinite(cond) or cond > config.settings.cond_limit:
        raise DegenerateBasis(f"eigenvector matrix has condition number {cond:.3e}")
    duals = np.linalg.inv(vectors)

    vectors.setflags(write=False)
    duals.setflags(write=False)
    return EigenBasis(space=space, vectors=vectors, duals=duals, eigenvalues=eigenvalues, atoms=atoms)


def _probability(raw: complex, tol: float) -> Optional[float]:
    if abs(raw.imag) <= tol and -tol <= raw.real <= 1.0 + tol:
        return min(max(raw.real, 0.0), 1.0)
    return None


def transition_probabilities(space: PSpace, basis: EigenBasis, x, tol: Optional[float] = None) -> MeasurementReport:
    """
    raw_n = e*_n(x) [e_n, x]_p for every basis vector.

    A non-unit x is normalized first when auto_normalize is on (the report is
    flagged and keeps the input norm).

    Returns:
        MeasurementReport with per-vector and per-eigenvalue outcomes,
        expectation sum_n lambda_n raw_n, the conservation residual
        |sum_n raw_n - 1| and the physical flag (every aggregated raw value
        real and in [0, 1])

    Raises:
        DimensionMismatch: if x or the basis does not live in space
        NotNormalized: if x is not a unit vector and auto_normalize is off
        ZeroVector: if x = 0
    """
    tol = config.resolve_tol(tol)
    if basis.space != space:
        raise DimensionMismatch(f"basis lives in {basis.space}, measurement requested in {space}")
    x = space.vector(x)
    input_norm = p_norm(space, x)
    if input_norm == 0.0:
        raise ZeroVector("cannot measure the zero vector")

    renormalized = False
    if abs(input_norm - 1.0) > tol:
        if not config.settings.auto_normalize:
            raise NotNormalized(f"state has p-norm {input_norm:.12g}")
        logger.info("renormalizing state with p-norm %.6g before measurement", input_norm)
        x = normalize(space, x)
        renormalized = True

    coefficients = basis.duals @ x
    pairings = basis.vectors.T @ dual_functional(space, x)  # [e_n, x]_p
    raws = coefficients * pairings

    outcomes = tuple(
        Outcome(
            index=n,
            eigenvalue=basis.eigenvalues[n],
            raw_value=complex(raws[n]),
            probability=_probability(complex(raws[n]), tol),
            atom=basis.atoms[n],
        )
        for n in range(basis.size)
    )

    eigenvalue_outcomes = []
    for k in sorted(set(basis.atoms)):
        members = [n for n in range(basis.size) if basis.atoms[n] == k]
        raw = complex(sum(raws[n] for n in members))
        eigenvalue_outcomes.append(
            Outcome(index=k, eigenvalue=basis.eigenvalues[members[0]], raw_value=raw,
                    probability=_probability(raw, tol), atom=k)
        )

    residual = float(abs(complex(np.sum(raws)) - 1.0))
    expectation = complex(np.dot(np.array(basis.eigenvalues), raws))

    return MeasurementReport(
        outcomes=outcomes,
        eigenvalue_outcomes=tuple(eigenvalue_outcomes),
        expectation=expectation,
        conserved=residual <= tol,
        conservation_residual=residual,
        physical=all(o.probability is not None for o in eigenvalue_outcomes),
        state=x,
        input_norm=input_norm,
        renormalized=renormalized,
    )


def expectation(space: PSpace, basis: EigenBasis, x, tol: Optional[float] = None) -> complex:
    """<A>_x = sum_n lambda_n e*_n(x) [e_n, x]_p"""
    return transition_probabilities(space, basis, x, tol).expectation


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(config.settings.bit_generator(seed))


def _outcome_distribution(report: MeasurementReport) -> np.ndarray:
    if not report.physical:
        bad = [o for o in report.eigenvalue_outcomes if o.probability is None]
        raise NotPhysical(
            "sampling undefined: outcome probabilities outside [0, 1] for eigenvalue(s) "
            + ", ".join(f"{o.eigenvalue:.6g} (raw {o.raw_value:.6g})" for o in bad)
        )
    probs = np.array([o.probability for o in report.eigenvalue_outcomes], dtype=float)
    return probs / probs.sum()


def post_measurement_state(report: MeasurementReport, basis: EigenBasis, atom: int) -> CVector:
    """
    State after observing the eigenvalue of the given atom.

    A simple eigenvalue collapses to its eigenvector e_n; a degenerate one to
    the normalized component E_k x of the measured state.
    """
    members = [n for n in range(basis.size) if basis.atoms[n] == atom]
    if len(members) == 1:
        return basis.vector(members[0])
    component = basis.vectors[:, members] @ (basis.duals[members, :] @ report.state)
    return normalize(basis.space, component)


def sample_outcomes(report: MeasurementReport, seed: int, shots: int) -> np.ndarray:
    """
    Atom indices of `shots` independent draws, reproducible for a given seed.

    Raises:
        NotPhysical: if the report is not physical
    """
    probs = _outcome_distribution(report)
    return _generator(seed).choice(len(probs), size=shots, p=probs)


def sample_collapse(report: MeasurementReport, basis: EigenBasis, seed: int) -> Tuple[float, CVector]:
    """
    Draw one outcome with probability p(x|e_n) and return (eigenvalue, post-state).

    Raises:
        NotPhysical: if the report is not physical
    """
    atom = int(sample_outcomes(report, seed, 1)[0])
    outcome = report.eigenvalue_outcomes[[o.atom for o in report.eigenvalue_outcomes].index(atom)]
    return outcome.eigenvalue, as_vector(post_measurement_state(report, basis, atom))
