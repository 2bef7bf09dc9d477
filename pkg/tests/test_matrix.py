import numpy as np
import pytest
from hypothesis import given, strategies as st

from isotropic.errors import DimensionMismatch, NotSPD, NotSelfAdjoint, NotSymmetric, SingularMatrix
from isotropic.matrix import (
    as_matrix,
    determinant,
    g_selfadjoint_eigen,
    inverse,
    is_g_selfadjoint,
    mat_pow,
    parse_matrix,
    powers,
    random_diagonalisable,
    random_g_selfadjoint,
    random_invertible,
    random_spd,
    sqrt_spd,
    symmetric_eigen,
    trace,
)

seeds = st.integers(0, 2 ** 32 - 1)
dims = st.integers(1, 6)


def test_inverse_example():
    np.testing.assert_allclose(inverse([[2, 1], [0, 3]]), [[0.5, -1 / 6], [0, 1 / 3]], atol=1e-15)


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        inverse([[1, 2], [2, 4]])


def test_pow_trace_det():
    a = np.array([[2.0, 1.0], [0.0, 3.0]])
    assert trace(mat_pow(a, 2)) == 13.0
    assert determinant(a) == pytest.approx(6.0)
    np.testing.assert_array_equal(mat_pow(a, 0), np.eye(2))
    pw = powers(a, 3)
    assert len(pw) == 4
    np.testing.assert_allclose(pw[3], a @ a @ a)


def test_as_matrix_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        as_matrix([[1, 2, 3], [4, 5, 6]])


def test_symmetric_eigen_example():
    es = symmetric_eigen([[2, 1], [1, 2]])
    np.testing.assert_allclose(es.eigenvalues, [1, 3], atol=1e-14)
    np.testing.assert_allclose(es.reconstruct(), [[2, 1], [1, 2]], atol=1e-14)


def test_symmetric_eigen_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        symmetric_eigen([[1, 2], [0, 1]])


@given(dims, seeds)
def test_jacobi_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, n))
    a = b + b.T
    es = symmetric_eigen(a)
    np.testing.assert_allclose(es.eigenvalues, np.linalg.eigvalsh(a), atol=1e-10 * max(1, np.abs(a).max()))
    np.testing.assert_allclose(es.basis.T @ es.basis, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(es.reconstruct(), a, atol=1e-10 * max(1, np.abs(a).max()))


def test_g_selfadjoint_example():
    g = np.diag([1.0, 4.0])
    a = np.array([[0.0, 1.0], [0.25, 0.0]])
    assert is_g_selfadjoint(a, g)
    es = g_selfadjoint_eigen(a, g)
    np.testing.assert_allclose(es.eigenvalues, [-0.5, 0.5], atol=1e-14)
    # eigenvectors are g-orthonormal
    np.testing.assert_allclose(es.basis.T @ g @ es.basis, np.eye(2), atol=1e-14)


def test_g_selfadjoint_rejects():
    with pytest.raises(NotSelfAdjoint):
        g_selfadjoint_eigen([[0, 1], [0, 0]], np.eye(2))
    with pytest.raises(NotSPD):
        g_selfadjoint_eigen(np.eye(2), [[1, 0], [0, -1]])


@given(st.integers(1, 5), seeds)
def test_random_g_selfadjoint(n, seed):
    rng = np.random.default_rng(seed)
    g = random_spd(n, rng)
    spectrum = rng.uniform(0.5, 3.0, n)
    a, es = random_g_selfadjoint(g, spectrum, rng)
    assert is_g_selfadjoint(a, g)
    got = g_selfadjoint_eigen(a, g)
    np.testing.assert_allclose(got.eigenvalues, np.sort(spectrum), atol=1e-10)
    np.testing.assert_allclose(es.reconstruct(), a, atol=1e-12)


@given(dims, seeds)
def test_random_invertible_condition(n, seed):
    s, s_inv = random_invertible(n, seed)
    assert np.linalg.cond(s) <= 10.0 * (1 + 1e-12)
    np.testing.assert_allclose(s @ s_inv, np.eye(n), atol=1e-12)


@given(dims, seeds)
def test_random_diagonalisable(n, seed):
    spectrum = np.random.default_rng(seed).uniform(-2, 2, n)
    a, es = random_diagonalisable(n, spectrum, seed)
    np.testing.assert_allclose(es.reconstruct(), a, atol=1e-12)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(a).real), np.sort(spectrum), atol=1e-8)


@given(st.integers(1, 5), seeds)
def test_sqrt_spd(n, seed):
    g = random_spd(n, seed)
    half, inv_half = sqrt_spd(g)
    np.testing.assert_allclose(half @ half, g, atol=1e-12)
    np.testing.assert_allclose(half @ inv_half, np.eye(n), atol=1e-12)


def test_parse_matrix():
    np.testing.assert_array_equal(parse_matrix([[1, 2], [3, 4]]), [[1, 2], [3, 4]])
    for bad in ([], [[1, "x"], [1, 2]], [[1, 2], [3]], {"a": 1}, [[True, 0], [0, 1]]):
        with pytest.raises(ValueError):
            parse_matrix(bad)
