"""
Tests for scalar-type operators: decomposition, spectral measure, functional calculus
"""

import math

import numpy as np
import pytest

from banach_qm import config
from banach_qm.errors import InvalidDecomposition, NonDiagonalizable, NotAProjection, UndefinedFunction
from banach_qm.scenarios import SIGMA
from banach_qm.spectral import (
    EMPTY,
    REALS,
    atom_subsets,
    commutes,
    complement,
    decompose,
    decomposition_defects,
    func_calc,
    interval,
    is_projection,
    join,
    make_decomposition,
    map_spectrum,
    meet,
    points,
    precedes,
    reconstruct,
    spectral_bound,
    spectral_measure,
)

E1_X = 0.5 * np.array([[1, 1], [1, 1]])
E1_Y = 0.5 * np.array([[1, -1], [-1, 1]])


def _pairs_by_eigenvalue(d):
    return {round(lam.real, 9): e for lam, e in d.pairs}


# Examples

def test_decompose_sigma3():
    d = decompose(SIGMA[3])
    assert d.eigenvalues == (1, -1)
    np.testing.assert_allclose(d.projections[0], np.diag([1, 0]), atol=1e-12)
    np.testing.assert_allclose(d.projections[1], np.diag([0, 1]), atol=1e-12)


def test_decompose_sigma1():
    d = decompose(SIGMA[1])
    assert [lam.real for lam in d.eigenvalues] == pytest.approx([1, -1])
    assert all(lam.imag == 0.0 for lam in d.eigenvalues)
    np.testing.assert_allclose(d.projections[0], E1_X, atol=1e-12)
    np.testing.assert_allclose(d.projections[1], E1_Y, atol=1e-12)


def test_decompose_identity_is_single_atom():
    d = decompose(np.eye(3))
    assert d.size == 1
    assert d.eigenvalues[0] == pytest.approx(1)
    np.testing.assert_allclose(d.projections[0], np.eye(3), atol=1e-12)


def test_eigenvalues_descending():
    d = decompose(np.diag([-1.0, 2.0, 0.5]))
    assert [lam.real for lam in d.eigenvalues] == pytest.approx([2.0, 0.5, -1.0])


def test_close_eigenvalues_are_merged():
    d = decompose(np.diag([1.0, 1.0 + 1e-12, 2.0]))
    assert d.size == 2
    np.testing.assert_allclose(d.projections[1], np.diag([1, 1, 0]), atol=1e-9)


def test_jordan_block_is_not_diagonalizable():
    with pytest.raises(NonDiagonalizable):
        decompose([[1, 1], [0, 1]])


def test_condition_limit_is_configurable():
    m = np.array([[1.0, 1e4], [0.0, 1.0 + 1e-4]])
    decompose(m)
    config.configure(cond_limit=10.0)
    with pytest.raises(NonDiagonalizable):
        decompose(m)


def test_reconstruct_examples():
    np.testing.assert_allclose(reconstruct(decompose(SIGMA[2])), SIGMA[2], atol=1e-10)
    np.testing.assert_allclose(reconstruct(make_decomposition([(5, np.eye(2))])), 5 * np.eye(2))
    d = make_decomposition([(1, E1_X), (-1, np.eye(2) - E1_X)])
    np.testing.assert_allclose(reconstruct(d), 2 * E1_X - np.eye(2))


def test_make_decomposition_rejects_bad_atoms():
    with pytest.raises(InvalidDecomposition):
        make_decomposition([(1, E1_X), (2, E1_X)])
    with pytest.raises(InvalidDecomposition):
        make_decomposition([(1, 2 * np.eye(2))])
    with pytest.raises(InvalidDecomposition):
        make_decomposition([(1, E1_X), (1, E1_Y)])
    with pytest.raises(InvalidDecomposition):
        make_decomposition([])


def test_spectral_measure_examples():
    d3 = decompose(SIGMA[3])
    np.testing.assert_allclose(spectral_measure(d3, points(1)), np.diag([1, 0]), atol=1e-12)
    np.testing.assert_allclose(spectral_measure(d3, REALS), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(spectral_measure(d3, EMPTY), np.zeros((2, 2)))
    d1 = decompose(SIGMA[1])
    np.testing.assert_allclose(spectral_measure(d1, interval(0, 2)), E1_X, atol=1e-12)


def test_interval_endpoints():
    d = decompose(SIGMA[3])
    np.testing.assert_allclose(spectral_measure(d, interval(-1, 1, closed="left")), np.diag([0, 1]), atol=1e-12)
    np.testing.assert_allclose(spectral_measure(d, interval(-1, 1, closed="neither")), np.zeros((2, 2)))


def test_point_sets_match_computed_eigenvalues(rng):
    v = np.eye(3) + 0.3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    v_inv = np.linalg.inv(v)
    d = decompose(v @ np.diag([0.5, 1.7, -0.3]) @ v_inv)
    expected = np.outer(v[:, 0], v_inv[0, :])
    np.testing.assert_allclose(spectral_measure(d, points(0.5)), expected, atol=1e-9)
    np.testing.assert_allclose(spectral_measure(d, ~points(0.5)), np.eye(3) - expected, atol=1e-9)
    np.testing.assert_allclose(spectral_measure(d, points(0.5 + 1e-6)), np.zeros((3, 3)))
    np.testing.assert_allclose(spectral_measure(d, points(0.5 + 1e-6, atol=1e-5)), expected, atol=1e-9)


def test_complex_eigenvalues_are_outside_real_sets():
    d = decompose([[0, -1], [1, 0]])
    assert d.max_imag() == pytest.approx(1.0)
    np.testing.assert_allclose(spectral_measure(d, REALS), np.zeros((2, 2)))


def test_func_calc_examples():
    d3 = decompose(SIGMA[3])
    np.testing.assert_allclose(func_calc(d3, lambda lam: lam), reconstruct(d3))
    np.testing.assert_allclose(func_calc(d3, lambda lam: np.exp(-1j * math.pi * lam)), -np.eye(2), atol=1e-12)
    np.testing.assert_allclose(func_calc(decompose(SIGMA[1]), lambda lam: lam ** 2), np.eye(2), atol=1e-12)


def test_func_calc_undefined_function():
    d = decompose(np.diag([0.0, 1.0]))
    with pytest.raises(UndefinedFunction):
        func_calc(d, lambda lam: 1 / lam)
    with pytest.raises(UndefinedFunction):
        func_calc(d, math.log)


def test_map_spectrum_merges_atoms():
    squared = map_spectrum(decompose(SIGMA[1]), lambda lam: lam ** 2)
    assert squared.size == 1
    assert squared.eigenvalues[0] == pytest.approx(1)
    np.testing.assert_allclose(squared.projections[0], np.eye(2), atol=1e-12)

    doubled = map_spectrum(decompose(SIGMA[3]), lambda lam: 2 * lam)
    assert [lam.real for lam in doubled.eigenvalues] == pytest.approx([2, -2])


def test_lattice_operations():
    p = np.diag([1, 1, 0])
    q = np.diag([0, 1, 1])
    np.testing.assert_allclose(meet(p, q), np.diag([0, 1, 0]))
    np.testing.assert_allclose(join(p, q), np.eye(3))
    np.testing.assert_allclose(complement(p), np.diag([0, 0, 1]))
    assert precedes(np.diag([0, 1, 0]), p)
    assert not precedes(p, np.diag([0, 1, 0]))


def test_lattice_needs_commuting_projections():
    assert not commutes(E1_X, np.diag([1, 0]))
    with pytest.raises(NotAProjection):
        meet(E1_X, np.diag([1, 0]))
    with pytest.raises(NotAProjection):
        complement(2 * np.eye(2))


def test_atom_subsets():
    subsets, exhaustive = atom_subsets(3)
    assert exhaustive
    assert len(list(subsets)) == 7

    subsets, exhaustive = atom_subsets(15, max_exact=12)
    assert not exhaustive
    subsets = list(subsets)
    assert len(subsets) == 30
    assert (0,) in subsets
    assert tuple(range(1, 15)) in subsets


def test_spectral_bound():
    assert spectral_bound(decompose(SIGMA[1])) == pytest.approx(1.0)
    oblique = decompose([[1, 2], [0, -1]])
    assert spectral_bound(oblique) > 1.0


# Properties over random scalar-type operators

@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_projection_algebra(n, random_scalar_type):
    for _ in range(20):
        m, _, _ = random_scalar_type(n, complex_spectrum=n % 2 == 1)
        d = decompose(m)
        scale = max(np.linalg.norm(e, 2) for e in d.projections) ** 2
        for name, defect in decomposition_defects(d).items():
            assert defect <= 1e-9 * scale, name
        for e in d.projections:
            assert is_projection(e)
            assert np.linalg.norm(m @ e - e @ m, 2) <= 1e-9 * np.linalg.norm(m, 2) * np.linalg.norm(e, 2)


@pytest.mark.parametrize("complex_spectrum", [False, True])
def test_decompose_reconstruct_round_trip(complex_spectrum, random_scalar_type):
    for n in range(2, 9):
        for _ in range(30):
            m, _, _ = random_scalar_type(n, complex_spectrum=complex_spectrum, spread=2.0)
            assert np.linalg.norm(reconstruct(decompose(m)) - m, 2) <= 1e-8 * np.linalg.norm(m, 2)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_decompose_recovers_similarity_oracle(n, random_scalar_type):
    for _ in range(20):
        m, v, eigenvalues = random_scalar_type(n)
        d = decompose(m)
        assert sorted(lam.real for lam in d.eigenvalues) == pytest.approx(sorted(eigenvalues), abs=1e-9)
        v_inv = np.linalg.inv(v)
        atoms = _pairs_by_eigenvalue(d)
        for k, lam in enumerate(eigenvalues):
            expected = np.outer(v[:, k], v_inv[k, :])
            match = min(atoms, key=lambda key: abs(key - lam))
            np.testing.assert_allclose(atoms[match], expected, atol=1e-8)


def test_repeated_eigenvalue_gives_rank_two_atom(random_scalar_type):
    m, v, eigenvalues = random_scalar_type(4, repeat=1)
    d = decompose(m)
    assert d.size == 3
    ranks = sorted(int(round(np.trace(e).real)) for e in d.projections)
    assert ranks == [1, 1, 2]


def test_boolean_algebra_of_spectral_measure(random_scalar_type, rng):
    m, _, _ = random_scalar_type(6, spread=1.0)
    d = decompose(m)
    eye = np.eye(6)
    for _ in range(50):
        lo1, hi1 = sorted(rng.uniform(-4, 4, 2))
        lo2, hi2 = sorted(rng.uniform(-4, 4, 2))
        a, b = interval(lo1, hi1), interval(lo2, hi2)
        ea, eb = spectral_measure(d, a), spectral_measure(d, b)
        np.testing.assert_allclose(spectral_measure(d, a & b), ea @ eb, atol=1e-9)
        np.testing.assert_allclose(spectral_measure(d, ~a), eye - ea, atol=1e-9)
        np.testing.assert_allclose(spectral_measure(d, a | b), ea + eb - ea @ eb, atol=1e-9)
        # finite additivity on disjoint sets
        np.testing.assert_allclose(spectral_measure(d, a | (b - a)), ea + spectral_measure(d, b - a), atol=1e-9)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_func_calc_is_a_homomorphism_on_polynomials(n, random_scalar_type, rng):
    for _ in range(20):
        m, _, _ = random_scalar_type(n)
        d = decompose(m)
        coefficients = rng.standard_normal(4)
        direct = sum(c * np.linalg.matrix_power(m, j) for j, c in enumerate(coefficients))
        via_spectrum = func_calc(d, lambda lam: sum(c * lam ** j for j, c in enumerate(coefficients)))
        assert np.linalg.norm(via_spectrum - direct, 2) <= 1e-8 * (np.linalg.norm(direct, 2) + 1.0)

        f = func_calc(d, np.cos)
        g = func_calc(d, np.sin)
        np.testing.assert_allclose(f @ g, func_calc(d, lambda lam: np.cos(lam) * np.sin(lam)), atol=1e-8)
