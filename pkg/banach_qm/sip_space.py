"""
The spaces l_p^n = (C^n, ||.||_p) and their canonical semi-inner product

For y = (y_1, ..., y_n) the duality map is

    w_i = ||y||_p^(2-p) * sign(conj(y_i)) * |y_i|^(p-1),   sign(0) = 0

and the semi-inner product is [x, y]_p = sum_i x_i w_i. For n = 2 this is
the closed form [x,y]_p = ||y||^(2-p) (a sign(c*)|c|^(p-1) + b sign(d*)|d|^(p-1));
at p = 2 it is the usual inner product sum_i x_i conj(y_i).
"""

import math

import numpy as np

from .errors import ZeroVector
from .models import CVector, PSpace, as_vector


def _sign(z: np.ndarray) -> np.ndarray:
    """Complex sign u/|u|, with sign(0) = 0"""
    mod = np.abs(z)
    out = np.zeros_like(z, dtype=np.complex128)
    nonzero = mod > 0
    out[nonzero] = z[nonzero] / mod[nonzero]
    return out


def lp_norm(values: np.ndarray, p: float) -> float:
    """Scaled evaluation of (sum |v_i|^p)^(1/p); p may be inf"""
    mod = np.abs(values)
    if mod.size == 0:
        return 0.0
    top = float(mod.max())
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    return top * float(np.sum((mod / top) ** p)) ** (1.0 / p)


def p_norm(space: PSpace, x) -> float:
    """
    ||x||_p = (sum_i |x_i|^p)^(1/p).

    Raises:
        DimensionMismatch: if x does not live in space
    """
    return lp_norm(space.vector(x), space.p)


def dual_functional(space: PSpace, y) -> CVector:
    """
    Coefficients w of the norming functional f_y, so that [x, y]_p = sum_i x_i w_i.

    f_y(y) = ||y||_p^2 and the l_q norm of w equals ||y||_p. The zero vector
    maps to the zero functional.

    Example:
        dual_functional(PSpace(dim=2, p=1), [0.5, -0.5]) -> [1, -1]
    """
    y = space.vector(y)
    norm = p_norm(space, y)
    if norm == 0.0:
        return as_vector(np.zeros(space.dim, dtype=np.complex128))
    # ||y||^(2-p) |y_i|^(p-1) == ||y|| |y_i / ||y|| |^(p-1)
    w = norm * _sign(np.conj(y)) * (np.abs(y) / norm) ** (space.p - 1.0)
    return as_vector(w)


def dual_norm(space: PSpace, w) -> float:
    """Operator norm of the functional x -> sum_i x_i w_i on l_p^n (the l_q norm of w)"""
    return lp_norm(space.vector(w), space.q)


def sip(space: PSpace, x, y) -> complex:
    """
    Semi-inner product [x, y]_p.

    Linear in x, [x, x]_p = ||x||_p^2 and |[x, y]_p|^2 <= [x, x]_p [y, y]_p.
    [x, 0]_p = 0.
    """
    x = space.vector(x)
    return complex(np.dot(x, dual_functional(space, y)))


def normalize(space: PSpace, x) -> CVector:
    """
    x / ||x||_p.

    Raises:
        ZeroVector: if x = 0
    """
    x = space.vector(x)
    norm = p_norm(space, x)
    if norm == 0.0:
        raise ZeroVector("cannot normalize the zero vector")
    return as_vector(x / norm)


def is_unit(space: PSpace, x, tol: float) -> bool:
    return abs(p_norm(space, x) - 1.0) <= tol
