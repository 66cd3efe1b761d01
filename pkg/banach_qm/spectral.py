"""
Scalar-type operators in finite dimension

A diagonalizable matrix T has the finite spectral resolution
T = sum_k lambda_k E_k with idempotent, mutually annihilating atoms E_k
summing to the identity. The atoms are generally oblique (not self-adjoint).
The spectral measure of a Borel set A is E(A) = sum{E_k : lambda_k in A}
and the functional calculus is f(T) = sum_k f(lambda_k) E_k.

Regularity of the spectral measure holds trivially here (finite sums), so
no code checks it.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from . import config
from .errors import InvalidDecomposition, NonDiagonalizable, NotAProjection, UndefinedFunction
from .models import CMatrix, SpectralDecomposition, as_matrix

logger = logging.getLogger(__name__)


# Borel sets of the real line

class BorelSet:
    """Finite Boolean combination of real intervals and points"""

    def contains(self, value: float, tol: float = 0.0) -> bool:
        """tol widens point sets only; interval endpoints stay exact"""
        raise NotImplementedError

    def __contains__(self, value: float) -> bool:
        return self.contains(value)

    def __or__(self, other: "BorelSet") -> "BorelSet":
        return Union((self, other))

    def __and__(self, other: "BorelSet") -> "BorelSet":
        return Intersection((self, other))

    def __invert__(self) -> "BorelSet":
        return Complement(self)

    def __sub__(self, other: "BorelSet") -> "BorelSet":
        return Intersection((self, Complement(other)))


@dataclass(frozen=True)
class Interval(BorelSet):
    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, value: float, tol: float = 0.0) -> bool:
        above = value >= self.lo if self.lo_closed else value > self.lo
        below = value <= self.hi if self.hi_closed else value < self.hi
        return above and below


@dataclass(frozen=True)
class Points(BorelSet):
    values: Tuple[float, ...]
    # None: match within tol * (1 + |v|) of each point
    atol: Optional[float] = None

    def contains(self, value: float, tol: float = 0.0) -> bool:
        for v in self.values:
            width = self.atol if self.atol is not None else tol * (1.0 + abs(v))
            if abs(value - v) <= width:
                return True
        return False


@dataclass(frozen=True)
class Union(BorelSet):
    parts: Tuple[BorelSet, ...]

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return any(part.contains(value, tol) for part in self.parts)


@dataclass(frozen=True)
class Intersection(BorelSet):
    parts: Tuple[BorelSet, ...]

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return all(part.contains(value, tol) for part in self.parts)


@dataclass(frozen=True)
class Complement(BorelSet):
    inner: BorelSet

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return not self.inner.contains(value, tol)


REALS: BorelSet = Interval()
EMPTY: BorelSet = Points(())


def interval(lo: float, hi: float, closed: str = "both") -> Interval:
    """interval(0, 2) is [0, 2]; closed may be 'both', 'left', 'right' or 'neither'"""
    return Interval(lo, hi, closed in ("both", "left"), closed in ("both", "right"))


def points(*values: float, atol: Optional[float] = None) -> Points:
    return Points(tuple(float(v) for v in values), atol)


# Projection lattice

def idempotence_defect(m) -> float:
    m = as_matrix(m)
    return float(np.linalg.norm(m @ m - m, 2))


def is_projection(m, tol: Optional[float] = None) -> bool:
    m = as_matrix(m)
    return idempotence_defect(m) <= config.resolve_tol(tol) * max(1.0, float(np.linalg.norm(m, 2)))


def require_projection(m, label: str = "P", tol: Optional[float] = None) -> CMatrix:
    m = as_matrix(m)
    if not is_projection(m, tol):
        raise NotAProjection(f"{label} is not idempotent: ||P^2 - P|| = {idempotence_defect(m):.3e}")
    return m


def commutes(a, b, tol: Optional[float] = None) -> bool:
    a, b = as_matrix(a), as_matrix(b)
    return float(np.linalg.norm(a @ b - b @ a, 2)) <= config.resolve_tol(tol) * max(1.0, float(np.linalg.norm(a, 2) * np.linalg.norm(b, 2)))


def _commuting_pair(p, q, tol: Optional[float]) -> Tuple[CMatrix, CMatrix]:
    p = require_projection(p, "P", tol)
    q = require_projection(q, "Q", tol)
    if p.shape != q.shape:
        raise NotAProjection(f"projections of different sizes {p.shape} and {q.shape}")
    if not commutes(p, q, tol):
        raise NotAProjection("lattice operations need commuting projections")
    return p, q


def meet(p, q, tol: Optional[float] = None) -> CMatrix:
    """P ^ Q = PQ, the projection onto the intersection of the ranges"""
    p, q = _commuting_pair(p, q, tol)
    return as_matrix(p @ q)


def join(p, q, tol: Optional[float] = None) -> CMatrix:
    """P v Q = P + Q - PQ, the projection onto the span of both ranges"""
    p, q = _commuting_pair(p, q, tol)
    return as_matrix(p + q - p @ q)


def complement(p, tol: Optional[float] = None) -> CMatrix:
    """P^perp = I - P"""
    p = require_projection(p, "P", tol)
    return as_matrix(np.eye(p.shape[0]) - p)


def precedes(p, q, tol: Optional[float] = None) -> bool:
    """P <= Q, i.e. range(P) is contained in range(Q)"""
    p, q = _commuting_pair(p, q, tol)
    return float(np.linalg.norm(q @ p - p, 2)) <= config.resolve_tol(tol) * max(1.0, float(np.linalg.norm(p, 2)))


# Decomposition

def _group_eigenvalues(eigvals: np.ndarray, group_tol: float) -> List[List[int]]:
    """Cluster eigenvalues closer than group_tol * (spectral diameter + 1)"""
    k = len(eigvals)
    diameter = float(np.max(np.abs(eigvals[:, None] - eigvals[None, :]))) if k > 1 else 0.0
    threshold = group_tol * (diameter + 1.0)

    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(k), 2):
        if abs(eigvals[i] - eigvals[j]) <= threshold:
            parent[find(i)] = find(j)

    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    merged = [g for g in groups.values() if len(g) > 1]
    if merged:
        logger.debug("merged %d eigenvalue cluster(s) within %.3e", len(merged), threshold)
    return list(groups.values())


def _clean_eigenvalue(lam: complex, tol: float) -> complex:
    lam = complex(lam)
    if abs(lam.imag) <= tol * (1.0 + abs(lam.real)):
        return complex(lam.real, 0.0)
    return lam


def _order(eigenvalues: Sequence[complex]) -> List[int]:
    # descending real part, then descending imaginary part
    return sorted(range(len(eigenvalues)), key=lambda i: (-eigenvalues[i].real, -eigenvalues[i].imag))


def decompose(m, tol: Optional[float] = None) -> SpectralDecomposition:
    """
    Spectral resolution of a diagonalizable matrix.

    Eigenvalues within the grouping tolerance are merged and their atoms
    summed. Atoms are built from eigenvectors (columns of V) and dual
    eigenvectors (rows of V^-1): E_k = V[:, g] V^-1[g, :].

    Args:
        m: square complex matrix
        tol: absolute tolerance used to drop round-off imaginary parts

    Returns:
        SpectralDecomposition ordered by descending eigenvalue

    Raises:
        NonDiagonalizable: if the eigenvector matrix is singular or its
            condition number exceeds the configured limit

    Example:
        decompose([[1, 0], [0, -1]]) -> pairs (1, diag(1, 0)), (-1, diag(0, 1))
    """
    settings = config.settings
    tol = config.resolve_tol(tol)
    m = as_matrix(m)
    n = m.shape[0]

    if not np.all(np.isfinite(m)):
        raise NonDiagonalizable("matrix has non-finite entries")

    eigvals, vectors = linalg.eig(m)
    cond = float(np.linalg.cond(vectors))
    if not np.isfinite(cond) or cond > settings.cond_limit:
        raise NonDiagonalizable(
            f"eigenvector matrix has condition number {cond:.3e} > {settings.cond_limit:.1e}; operator is not of scalar type"
        )
    duals = np.linalg.inv(vectors)

    pairs = []
    for group in _group_eigenvalues(eigvals, settings.group_tol):
        lam = _clean_eigenvalue(np.mean(eigvals[group]), tol)
        projection = vectors[:, group] @ duals[group, :]
        pairs.append((lam, projection))

    order = _order([lam for lam, _ in pairs])
    decomposition = SpectralDecomposition(
        eigenvalues=[pairs[i][0] for i in order],
        projections=[pairs[i][1] for i in order],
        dim=n,
    )

    scale = max(1.0, float(np.linalg.norm(m, 2)))
    residual = float(np.linalg.norm(reconstruct(decomposition) - m, 2))
    if residual > 1e-8 * scale:
        logger.warning("decomposition reconstructs the operator only to %.3e (scale %.3e)", residual, scale)
    return decomposition


def decomposition_defects(d: SpectralDecomposition) -> dict:
    """Largest violations of idempotence, mutual annihilation and resolution of identity"""
    projections = d.projections
    idempotence = max(idempotence_defect(e) for e in projections)
    annihilation = 0.0
    for j, k in itertools.permutations(range(d.size), 2):
        annihilation = max(annihilation, float(np.linalg.norm(projections[j] @ projections[k], 2)))
    identity = float(np.linalg.norm(sum(projections) - np.eye(d.dim), 2))
    return {"idempotence": idempotence, "annihilation": annihilation, "identity": identity}


def make_decomposition(pairs: Sequence[Tuple[complex, object]], tol: Optional[float] = None) -> SpectralDecomposition:
    """
    Build a decomposition from explicit (eigenvalue, projection) pairs.

    Raises:
        InvalidDecomposition: if the atoms are not idempotent, do not annihilate
            each other, do not sum to I, or eigenvalues repeat
    """
    tol = config.resolve_tol(tol)
    if not pairs:
        raise InvalidDecomposition("decomposition needs at least one atom")
    projections = [as_matrix(e) for _, e in pairs]
    eigenvalues = [complex(lam) for lam, _ in pairs]
    d = SpectralDecomposition(eigenvalues=eigenvalues, projections=projections, dim=projections[0].shape[0])

    for i, j in itertools.combinations(range(d.size), 2):
        if abs(eigenvalues[i] - eigenvalues[j]) <= tol:
            raise InvalidDecomposition(f"eigenvalue {eigenvalues[i]} appears twice")

    scale = max(1.0, max(float(np.linalg.norm(e, 2)) for e in projections))
    for name, defect in decomposition_defects(d).items():
        if defect > tol * scale * scale:
            raise InvalidDecomposition(f"{name} defect {defect:.3e} exceeds tolerance {tol:.1e}")
    return d


def reconstruct(d: SpectralDecomposition) -> CMatrix:
    """sum_k lambda_k E_k"""
    total = np.zeros((d.dim, d.dim), dtype=np.complex128)
    for lam, e in d.pairs:
        total += lam * e
    return as_matrix(total)


def member_atoms(d: SpectralDecomposition, borel: BorelSet, tol: Optional[float] = None) -> List[int]:
    """Indices of atoms whose eigenvalue lies in the (real) Borel set"""
    tol = config.resolve_tol(tol)
    return [
        k for k, lam in enumerate(d.eigenvalues)
        if abs(lam.imag) <= tol and borel.contains(lam.real, tol)
    ]


def spectral_measure(d: SpectralDecomposition, borel: BorelSet, tol: Optional[float] = None) -> CMatrix:
    """
    E(A) = sum{E_k : lambda_k in A}.

    A is a subset of the real line; non-real eigenvalues never belong to it.
    The empty selection gives the zero matrix.
    """
    total = np.zeros((d.dim, d.dim), dtype=np.complex128)
    for k in member_atoms(d, borel, tol):
        total += d.projections[k]
    return as_matrix(total)


def _evaluate(d: SpectralDecomposition, f: Callable) -> List[complex]:
    values = []
    for lam in d.eigenvalues:
        arg = lam.real if lam.imag == 0.0 else lam
        try:
            value = complex(f(arg))
        except (ArithmeticError, ValueError, TypeError) as e:
            raise UndefinedFunction(f"f is undefined at eigenvalue {lam}: {e}") from e
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise UndefinedFunction(f"f({lam}) = {value} is not finite")
        values.append(value)
    return values


def func_calc(d: SpectralDecomposition, f: Callable) -> CMatrix:
    """
    f(T) = sum_k f(lambda_k) E_k.

    Real eigenvalues are passed to f as floats, others as complex.

    Raises:
        UndefinedFunction: if f raises or returns a non-finite value at an eigenvalue
    """
    total = np.zeros((d.dim, d.dim), dtype=np.complex128)
    for value, e in zip(_evaluate(d, f), d.projections):
        total += value * e
    return as_matrix(total)


def map_spectrum(d: SpectralDecomposition, f: Callable) -> SpectralDecomposition:
    """
    Spectral resolution of f(T): E_f(B) = E(f^-1(B)).

    Atoms whose images under f coincide are merged.
    """
    values = np.array(_evaluate(d, f), dtype=np.complex128)
    pairs = []
    for group in _group_eigenvalues(values, config.settings.group_tol):
        lam = _clean_eigenvalue(np.mean(values[group]), config.settings.tol)
        pairs.append((lam, sum(d.projections[k] for k in group)))
    order = _order([lam for lam, _ in pairs])
    return SpectralDecomposition(
        eigenvalues=[pairs[i][0] for i in order],
        projections=[pairs[i][1] for i in order],
        dim=d.dim,
    )


def atom_label(d: SpectralDecomposition, indices: Sequence[int]) -> str:
    def fmt(lam: complex) -> str:
        return f"{lam.real:.6g}" if lam.imag == 0.0 else f"{lam.real:.6g}{lam.imag:+.6g}i"

    return "E({" + ", ".join(fmt(d.eigenvalues[k]) for k in indices) + "})"


def atom_subsets(k: int, max_exact: Optional[int] = None) -> Tuple[Iterator[Tuple[int, ...]], bool]:
    """
    Non-empty subsets of range(k) indexing E(A) over the Boolean algebra of atoms.

    Returns (iterator, exhaustive). Above max_exact atoms only singletons and
    their complements are produced and exhaustive is False.
    """
    max_exact = config.settings.max_exact_atoms if max_exact is None else max_exact
    if k <= max_exact:
        subsets = (
            combo
            for size in range(1, k + 1)
            for combo in itertools.combinations(range(k), size)
        )
        return subsets, True

    logger.warning("%d atoms exceed the exact limit %d; checking atoms and their complements only", k, max_exact)

    def partial() -> Iterator[Tuple[int, ...]]:
        for i in range(k):
            yield (i,)
        for i in range(k):
            yield tuple(j for j in range(k) if j != i)

    return partial(), False


def spectral_bound(d: SpectralDecomposition) -> float:
    """
    max ||E(A)||_2 over the atom subsets (the constant bounding
    ||integral f dE|| by sup |f| up to a factor)
    """
    subsets, _ = atom_subsets(d.size)
    return max(float(np.linalg.norm(sum(d.projections[k] for k in subset), 2)) for subset in subsets)
