"""
Tests for the l_p^n semi-inner product
"""

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import settings as hyp_settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from banach_qm.errors import DimensionMismatch, ZeroVector
from banach_qm.models import PSpace
from banach_qm.sip_space import dual_functional, dual_norm, is_unit, normalize, p_norm, sip

P_VALUES = [1.0, 1.5, 2.0, 3.0, 4.0]
DIMS = [2, 3, 5, 8]
TOL = 1e-9

coordinates = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False, allow_subnormal=False)


def complex_arrays(n):
    return st.tuples(arrays(np.float64, (n,), elements=coordinates),
                     arrays(np.float64, (n,), elements=coordinates)).map(lambda parts: parts[0] + 1j * parts[1])


# Examples

def test_orthogonal_basis_vectors_at_p2():
    space = PSpace(dim=2, p=2)
    assert sip(space, [1, 0], [0, 1]) == 0


def test_unit_vector_pairs_to_one():
    space = PSpace(dim=2, p=3)
    x = normalize(space, [1, 1])
    assert abs(sip(space, x, x) - 1.0) < 1e-12


def test_p4_example_matches_two_dimensional_formula():
    space = PSpace(dim=2, p=4)
    a, b = 1.0, 1j
    c, d = 2.0, -1.0
    norm = (abs(c) ** 4 + abs(d) ** 4) ** 0.25
    expected = norm ** (2 - 4) * (a * np.sign(c) * abs(c) ** 3 + b * np.sign(d) * abs(d) ** 3)
    assert abs(sip(space, [a, b], [c, d]) - expected) < 1e-12


def test_basis_vector_paired_with_unit_diagonal():
    space = PSpace(dim=2, p=4)
    c = 2 ** -0.25
    assert abs(sip(space, [1, 0], [c, c]) - 2 ** -0.75) < 1e-12


def test_normalize_examples():
    np.testing.assert_allclose(normalize(PSpace(dim=2, p=1), [1, 1]), [0.5, 0.5])
    np.testing.assert_allclose(normalize(PSpace(dim=2, p=1), [3, 4]), [3 / 7, 4 / 7])
    np.testing.assert_allclose(normalize(PSpace(dim=2, p=2), [3, 4]), [0.6, 0.8])
    np.testing.assert_allclose(normalize(PSpace(dim=2, p=3), [1, 1]), [2 ** (-1 / 3)] * 2)


def test_dual_functional_is_conjugation_at_p2():
    w = dual_functional(PSpace(dim=2, p=2), [1 + 2j, -3j])
    np.testing.assert_allclose(w, [1 - 2j, 3j])


@pytest.mark.parametrize("p", P_VALUES)
def test_dual_functional_of_basis_vector(p):
    space = PSpace(dim=3, p=p)
    np.testing.assert_allclose(dual_functional(space, space.basis_vector(1)), [0, 1, 0])


def test_normalize_zero_vector_fails():
    with pytest.raises(ZeroVector):
        normalize(PSpace(dim=3, p=2), [0, 0, 0])


def test_dual_functional_at_p1():
    w = dual_functional(PSpace(dim=2, p=1), [0.5, -0.5])
    np.testing.assert_allclose(w, [1, -1])


def test_zero_second_argument_gives_zero():
    space = PSpace(dim=3, p=3)
    assert sip(space, [1, 2j, 3], [0, 0, 0]) == 0
    np.testing.assert_array_equal(dual_functional(space, [0, 0, 0]), np.zeros(3))


def test_zero_coordinates_have_zero_sign():
    space = PSpace(dim=3, p=1.5)
    w = dual_functional(space, [0, 2, -1j])
    assert w[0] == 0


def test_dimension_mismatch():
    space = PSpace(dim=2, p=2)
    with pytest.raises(DimensionMismatch):
        sip(space, [1, 0, 0], [1, 0])
    with pytest.raises(DimensionMismatch):
        p_norm(space, [1, 2, 3])


def test_p_norm_examples():
    assert p_norm(PSpace(dim=2, p=1), [3, -4j]) == pytest.approx(7.0)
    assert p_norm(PSpace(dim=2, p=2), [3, 4]) == pytest.approx(5.0)
    assert p_norm(PSpace(dim=2, p=4), [1, 1]) == pytest.approx(2 ** 0.25)
    assert is_unit(PSpace(dim=2, p=3), normalize(PSpace(dim=2, p=3), [2, 1j]), TOL)


def test_space_rejects_p_below_one():
    with pytest.raises(ValueError):
        PSpace(dim=2, p=0.5)


def test_conjugate_exponent():
    assert PSpace(dim=2, p=4).q == pytest.approx(4 / 3)
    assert PSpace(dim=2, p=1).q == np.inf


# Axioms over random vectors

def _check_axioms(space, samples, random_vector, rng):
    n = space.dim
    for _ in range(samples):
        x, y, z = random_vector(n), random_vector(n), random_vector(n)
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        nx, ny, nz = p_norm(space, x), p_norm(space, y), p_norm(space, z)

        # linearity in the first slot
        lhs = sip(space, a * x + b * y, z)
        rhs = a * sip(space, x, z) + b * sip(space, y, z)
        scale = (abs(a) * nx + abs(b) * ny) * nz + 1.0
        assert abs(lhs - rhs) <= TOL * scale

        # [x, x] = ||x||^2
        xx = sip(space, x, x)
        assert abs(xx - nx ** 2) <= TOL * (nx ** 2 + 1.0)

        # Cauchy-Schwarz
        assert abs(sip(space, x, y)) ** 2 <= xx.real * sip(space, y, y).real + TOL * (nx * ny) ** 2


@pytest.mark.parametrize("p", P_VALUES)
@pytest.mark.parametrize("n", DIMS)
def test_axioms_on_random_vectors(p, n, random_vector, rng):
    _check_axioms(PSpace(dim=n, p=p), 400, random_vector, rng)


@pytest.mark.slow
@pytest.mark.parametrize("p", P_VALUES)
@pytest.mark.parametrize("n", DIMS)
def test_axioms_at_full_sample_count(p, n, random_vector, rng):
    _check_axioms(PSpace(dim=n, p=p), 10_000, random_vector, rng)


@pytest.mark.parametrize("n", DIMS)
def test_hilbert_reduction(n, random_vector):
    space = PSpace(dim=n, p=2)
    for _ in range(200):
        x, y = random_vector(n), random_vector(n)
        expected = np.sum(x * np.conj(y))
        assert abs(sip(space, x, y) - expected) <= 1e-12 * max(1.0, p_norm(space, x) * p_norm(space, y))


@pytest.mark.slow
@pytest.mark.parametrize("n", DIMS)
def test_hilbert_reduction_at_full_sample_count(n, random_vector):
    space = PSpace(dim=n, p=2)
    for _ in range(10_000):
        x, y = random_vector(n), random_vector(n)
        expected = np.sum(x * np.conj(y))
        assert abs(sip(space, x, y) - expected) <= 1e-12 * max(1.0, p_norm(space, x) * p_norm(space, y))


@pytest.mark.parametrize("p", P_VALUES)
def test_two_dimensional_formula(p, random_vector):
    space = PSpace(dim=2, p=p)
    for _ in range(200):
        (a, b), (c, d) = random_vector(2), random_vector(2)
        norm = (abs(c) ** p + abs(d) ** p) ** (1 / p)
        expected = norm ** (2 - p) * (
            a * np.conj(c) / abs(c) * abs(c) ** (p - 1) + b * np.conj(d) / abs(d) * abs(d) ** (p - 1)
        )
        assert abs(sip(space, [a, b], [c, d]) - expected) <= 1e-9 * (abs(expected) + 1.0)


@seed(7)
@hyp_settings(max_examples=200, deadline=None)
@given(y=complex_arrays(4), p=st.sampled_from(P_VALUES))
def test_dual_functional_norms_its_vector(y, p):
    space = PSpace(dim=4, p=p)
    norm = p_norm(space, y)
    w = dual_functional(space, y)
    assert abs(np.dot(y, w) - norm ** 2) <= 1e-9 * (norm ** 2 + 1.0)
    assert abs(dual_norm(space, w) - norm) <= 1e-9 * (norm + 1.0)


@seed(11)
@hyp_settings(max_examples=200, deadline=None)
@given(x=complex_arrays(3), p=st.sampled_from(P_VALUES))
def test_normalize_gives_unit_vector(x, p):
    space = PSpace(dim=3, p=p)
    if p_norm(space, x) == 0.0:
        with pytest.raises(ZeroVector):
            normalize(space, x)
    else:
        assert is_unit(space, normalize(space, x), 1e-12)
