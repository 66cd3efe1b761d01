"""
Worked qubit examples on (C^2, ||.||_p)

* pauli(space, i): sigma_1, sigma_2, sigma_3 with their explicit eigenprojections
  and the closed-form conditions for physicality at a unit state u|0> + v|1>.
* oblique_qubit(space, x, y, l1, l2): H = l1 E_x + l2 E_y built from two
  independent unit vectors, with the generally oblique projections
  E_x(z) = (du - cv)/(ad - cb) x and E_y(z) = (-bu + av)/(ad - cb) y.

Closed forms use the same tolerance discipline as the generic predicate:
each omega(E) must be real within tol and lie in [-tol, 1 + tol].
"""

from typing import Callable, Optional, Tuple

import numpy as np

from . import config
from .errors import DimensionMismatch, SingularPair
from .models import PSpace, QubitScenario, as_matrix
from .sip_space import normalize, sip
from .spectral import make_decomposition

SIGMA = {
    1: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    2: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    3: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# (E_x, E_y) with sigma_i = E_x - E_y
PAULI_PROJECTIONS = {
    1: (0.5 * np.array([[1, 1], [1, 1]]), 0.5 * np.array([[1, -1], [-1, 1]])),
    2: (0.5 * np.array([[1, -1j], [1j, 1]]), 0.5 * np.array([[1, 1j], [-1j, 1]])),
    3: (np.array([[1, 0], [0, 0]]), np.array([[0, 0], [0, 1]])),
}

SCENARIO_NAMES = ("pauli1", "pauli2", "pauli3", "oblique")


def _within(value: complex, tol: float) -> bool:
    return abs(value.imag) <= tol and -tol <= value.real <= 1.0 + tol


def _weighted_ratio(u: complex, v: complex, p: float) -> complex:
    """v/u |u|^p written as v conj(u) |u|^(p-2), zero when u = 0"""
    if u == 0:
        return 0j
    return v * np.conj(u) * abs(u) ** (p - 2.0)


def _pauli_term(index: int, u: complex, v: complex, p: float) -> complex:
    """The bracket c with omega(E_x), omega(E_y) = (1 + c)/2, (1 - c)/2"""
    if index == 1:
        return complex(_weighted_ratio(u, v, p) + _weighted_ratio(v, u, p))
    # sigma_2: omega(E_x) = (1 - i(v/u|u|^p - u/v|v|^p))/2
    return complex(-1j * (_weighted_ratio(u, v, p) - _weighted_ratio(v, u, p)))


def _closed_form(values: Callable, tol: Optional[float]) -> Callable[[complex, complex], bool]:
    def predicate(u: complex, v: complex) -> bool:
        t = config.resolve_tol(tol)
        return all(_within(complex(value), t) for value in values(u, v))

    return predicate


def pauli(space: PSpace, index: int, tol: Optional[float] = None) -> QubitScenario:
    """
    Pauli matrix sigma_index as a scenario.

    Closed forms at unit z = u|0> + v|1>:
        sigma_1: physical iff u = 0 or v = 0 or 1 +- (v/u |u|^p + u/v |v|^p) >= 0
        sigma_2: physical iff u = 0 or v = 0 or 1 +- i(v/u |u|^p - u/v |v|^p) >= 0
        sigma_3: always physical; omega(E_x) = |u|^p, omega(E_y) = |v|^p
    """
    if space.dim != 2:
        raise DimensionMismatch("Pauli scenarios need dim 2")
    if index not in SIGMA:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index}")
    p = space.p
    e_x, e_y = PAULI_PROJECTIONS[index]
    decomposition = make_decomposition([(1.0, e_x), (-1.0, e_y)], tol)

    if index == 3:
        def event_values(u: complex, v: complex) -> Tuple[complex, complex]:
            return complex(abs(u) ** p), complex(abs(v) ** p)

        def condition_values(u: complex, v: complex) -> Tuple[complex, complex]:
            return event_values(u, v)
    else:
        def event_values(u: complex, v: complex) -> Tuple[complex, complex]:
            c = _pauli_term(index, u, v, p)
            return 0.5 * (1.0 + c), 0.5 * (1.0 - c)

        def condition_values(u: complex, v: complex) -> Tuple[complex, complex]:
            # written as 1 + (...) and 1 - (...) with the bracket of the docstring
            c = _pauli_term(index, u, v, p)
            if index == 2:
                c = -c
            return 1.0 + c, 1.0 - c

    return QubitScenario(
        name=f"pauli{index}",
        space=space,
        matrix=as_matrix(SIGMA[index]),
        hamiltonian=decomposition,
        event_labels=("E_x", "E_y"),
        event_values=event_values,
        condition_values=condition_values,
        closed_form=_closed_form(event_values, tol),
    )


def oblique_projections(space: PSpace, x, y, tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    E_x(z) = (du - cv)/(ad - cb) x and E_y(z) = (-bu + av)/(ad - cb) y
    for x = a|0> + b|1>, y = c|0> + d|1>.

    Raises:
        SingularPair: if |ad - cb| is below tolerance
    """
    if space.dim != 2:
        raise DimensionMismatch("oblique qubit needs dim 2")
    x = normalize(space, x)
    y = normalize(space, y)
    a, b = x
    c, d = y
    det = a * d - c * b
    if abs(det) <= config.resolve_tol(tol):
        raise SingularPair(f"|ad - cb| = {abs(det):.3e}; x and y are linearly dependent")
    e_x = np.outer(x, [d, -c]) / det
    e_y = np.outer(y, [-b, a]) / det
    return as_matrix(e_x), as_matrix(e_y)


def oblique_qubit(space: PSpace, x, y, lambda1: float, lambda2: float, tol: Optional[float] = None) -> QubitScenario:
    """
    H = lambda1 E_x + lambda2 E_y with E_x + E_y = I.

    H is physical at z iff [E_x z, z]_p and [E_y z, z]_p lie in [0, 1]; at
    |x> and |y> it always is. With lambda1 == lambda2, H is a multiple of I
    and the closed form is constantly true.
    """
    e_x, e_y = oblique_projections(space, x, y, tol)
    lambda1, lambda2 = float(lambda1), float(lambda2)
    if lambda1 == lambda2:
        decomposition = make_decomposition([(lambda1, np.eye(2))], tol)
    else:
        decomposition = make_decomposition([(lambda1, e_x), (lambda2, e_y)], tol)

    def event_values(u: complex, v: complex) -> Tuple[complex, complex]:
        z = np.array([u, v], dtype=np.complex128)
        return sip(space, e_x @ z, z), sip(space, e_y @ z, z)

    if lambda1 == lambda2:
        def closed_form(u: complex, v: complex) -> bool:
            return True
    else:
        closed_form = _closed_form(event_values, tol)

    return QubitScenario(
        name="oblique",
        space=space,
        matrix=as_matrix(lambda1 * e_x + lambda2 * e_y),
        hamiltonian=decomposition,
        event_labels=("E_x", "E_y"),
        event_values=event_values,
        condition_values=event_values,
        closed_form=closed_form,
    )


DEFAULT_OBLIQUE = {
    "x": [1.0, 0.0],
    "y": [1.0, 1.0],
    "lambda1": 1.0,
    "lambda2": -1.0,
}


def build_scenario(name: str, space: PSpace, tol: Optional[float] = None, **params) -> QubitScenario:
    """Look up a scenario by CLI name (pauli1, pauli2, pauli3, oblique)"""
    if name.startswith("pauli") and name in SCENARIO_NAMES:
        return pauli(space, int(name[-1]), tol)
    if name == "oblique":
        merged = {**DEFAULT_OBLIQUE, **{k: v for k, v in params.items() if v is not None}}
        return oblique_qubit(space, merged["x"], merged["y"], merged["lambda1"], merged["lambda2"], tol)
    raise ValueError(f"unknown scenario '{name}', expected one of {', '.join(SCENARIO_NAMES)}")
