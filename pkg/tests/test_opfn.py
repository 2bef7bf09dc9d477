import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import oracle_f
from isotropic.errors import DimensionMismatch
from isotropic.matrix import EigenSystem, random_diagonalisable, random_invertible
from isotropic.opfn import (
    F_prime,
    F_prime_eigenvalues,
    OperatorFunction,
    P,
    S,
    d2F,
    d2F_eigen,
    d2P,
    dF,
    eval_F,
    operator_in_cone,
)
from isotropic.symfn import DomainCone, families, grad_f

seeds = st.integers(0, 2 ** 32 - 1)
A = np.array([[2.0, 1.0], [0.0, 3.0]])
NAMES3 = [f.name for f in families(3)]


def sample(seed, n=3, lo=0.5, hi=3.0):
    rng = np.random.default_rng(seed)
    kappa = rng.uniform(lo, hi, n)
    a, es = random_diagonalisable(n, kappa, rng)
    return rng, a, es


def test_examples():
    p2 = OperatorFunction.parse("p2", 2)
    assert eval_F(p2, A) == pytest.approx(13.0)
    np.testing.assert_allclose(F_prime(p2, A), [[4, 2], [0, 6]])
    assert dF(p2, A, np.eye(2)) == pytest.approx(10.0)
    assert eval_F(OperatorFunction.parse("q2", 2), A) == pytest.approx(1.2)
    assert S(2, A) == pytest.approx(6.0)
    assert S(2, np.eye(3)) == pytest.approx(3.0)
    assert P(3, A) == pytest.approx(35.0)


def test_nonconvex_example():
    p2 = OperatorFunction.parse("p2", 2)
    eta = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert d2F(p2, np.diag([1.0, 2.0]), eta, eta) == pytest.approx(-4.0, abs=1e-12)


def test_eigen_form_at_repeated_eigenvalue():
    p3 = OperatorFunction.parse("p3", 2)
    a = np.diag([2.0, 2.0])
    eta = np.array([[0.0, 1.0], [1.0, 0.0]])
    es = EigenSystem(np.array([2.0, 2.0]), np.eye(2), np.eye(2))
    assert d2F_eigen(p3, es, eta) == pytest.approx(24.0)
    assert d2P(3, a, eta, eta) == pytest.approx(24.0)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        eval_F(OperatorFunction.parse("p2", 3), A)
    with pytest.raises(DimensionMismatch):
        d2P(2, A, np.eye(3), A)


@pytest.mark.parametrize("name", NAMES3)
@given(seed=seeds)
def test_defining_relation(name, seed):
    _, a, es = sample(seed)
    fop = OperatorFunction.parse(name, 3)
    kappa = np.linalg.eigvals(a).real
    assert eval_F(fop, a) == pytest.approx(oracle_f(name, kappa), rel=1e-8)


@pytest.mark.parametrize("name", NAMES3)
@given(seed=seeds)
def test_second_derivative_symmetric_and_linear(name, seed):
    rng, a, _ = sample(seed)
    fop = OperatorFunction.parse(name, 3)
    b, c, e = (rng.standard_normal((3, 3)) for _ in range(3))
    bc, cb = d2F(fop, a, b, c), d2F(fop, a, c, b)
    scale = abs(d2F(fop, a, b, b)) + abs(d2F(fop, a, c, c)) + 1.0
    assert abs(bc - cb) <= 1e-10 * scale
    lin = d2F(fop, a, b + 2 * e, c)
    assert lin == pytest.approx(bc + 2 * d2F(fop, a, e, c), rel=1e-9, abs=1e-9 * scale)


@pytest.mark.parametrize("name", NAMES3)
@given(seed=seeds)
def test_prime_commutes_and_carries_gradient(name, seed):
    _, a, es = sample(seed)
    fop = OperatorFunction.parse(name, 3)
    fp = F_prime(fop, a)
    assert np.linalg.norm(fp @ a - a @ fp) <= 1e-10 * np.linalg.norm(fp) * np.linalg.norm(a)
    np.testing.assert_allclose(np.diag(es.to_eigenbasis(fp)), grad_f(fop.spec, es.eigenvalues),
                               rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(F_prime_eigenvalues(fop, es), grad_f(fop.spec, es.eigenvalues))


@given(seeds, st.integers(1, 6))
def test_d2P_finite_difference(seed, k):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal((2, 3, 3))
    h = 1e-4
    fd = (P(k, a + h * b) - 2 * P(k, a) + P(k, a - h * b)) / h ** 2
    exact = d2P(k, a, b, b)
    assert exact == pytest.approx(fd, rel=1e-4, abs=1e-4 * (1 + np.linalg.norm(a)) ** k)


@given(seeds)
def test_similarity_invariance_non_diagonalisable(seed):
    rng = np.random.default_rng(seed)
    a = np.array([[1.5, 1.0, 0.3], [0.0, 1.5, 1.0], [0.0, 0.0, 1.5]])
    s, s_inv = random_invertible(3, rng)
    for name in ("q2", "ratio:3:1", "s3"):
        fop = OperatorFunction.parse(name, 3)
        fa = eval_F(fop, a)
        assert abs(eval_F(fop, s @ a @ s_inv) - fa) <= 1e-8 * (1 + abs(fa))


def test_operator_in_cone():
    assert operator_in_cone(DomainCone.gamma_plus(), A)
    assert not operator_in_cone(DomainCone.gamma_plus(), np.diag([-1.0, -2.0]))
    assert operator_in_cone(DomainCone.gamma_k(2), np.diag([-1.0, 2.0, 3.0]))
    assert not operator_in_cone(DomainCone.gamma_k(3), np.diag([-1.0, 2.0, 3.0]))
    assert operator_in_cone(DomainCone.full(), -A)
