"""The operator function F = psi(P_1, ..., P_m) with P_k(A) = tr(A^k).

Everything here works on arbitrary real square matrices through traces of
matrix powers; only ``d2F_eigen`` and ``F_prime_eigenvalues`` need an
eigensystem, and those are cross-checks of the trace formulas on
diagonalisable operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .matrix import EigenSystem, as_matrix, powers
from .psi import Jet
from .symfn import (
    DomainCone,
    SymmetricFunctionSpec,
    divided_difference,
    grad_f,
    hess_f,
    newton_elementary,
    parse_function,
)


@dataclass(frozen=True)
class OperatorFunction:
    spec: SymmetricFunctionSpec

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def name(self) -> str:
        return self.spec.name

    @classmethod
    def parse(cls, text: str, n: int, cone: DomainCone | None = None) -> "OperatorFunction":
        return cls(parse_function(text, n, cone))

    def __call__(self, a) -> float:
        return eval_F(self, a)


def _tr(x: np.ndarray, y: np.ndarray) -> float:
    """tr(x y) without forming the product."""
    return float(np.sum(x * y.T))


def _operand(fop: OperatorFunction, a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != fop.n:
        raise DimensionMismatch(f"{fop.name} acts on {fop.n}x{fop.n} matrices, got {a.shape}")
    return a


def _jet(fop: OperatorFunction, a: np.ndarray, order: int) -> tuple[list[np.ndarray], Jet]:
    pw = powers(a, fop.spec.m)
    traces = np.array([np.trace(x) for x in pw[1:]])
    return pw, fop.spec.psi.evaluate(traces, order)


def P(k: int, a) -> float:
    if k < 1:
        raise ValueError("power trace index must be >= 1")
    return float(np.trace(powers(a, k)[-1]))


def S(k: int, a) -> float:
    """k-th elementary symmetric function of the spectrum, from traces via Newton's identities."""
    a = as_matrix(a)
    if not 1 <= k <= a.shape[0]:
        raise ValueError(f"S_k needs 1 <= k <= {a.shape[0]}, got {k}")
    pw = powers(a, k)
    return newton_elementary([float(np.trace(x)) for x in pw[1:]])[k - 1]


def operator_in_cone(cone: DomainCone, a) -> bool:
    """Cone test on the spectrum of ``a`` through the traces alone.

    ``Gamma_k`` asks for S_1..S_k > 0 and the positive cone for S_1..S_n > 0;
    for operators with real spectrum the latter is exactly positivity of all
    eigenvalues.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if cone.kind == "full":
        return True
    k = n if cone.kind == "gplus" else cone.k
    if k > n:
        return False
    pw = powers(a, k)
    s = newton_elementary([float(np.trace(x)) for x in pw[1:]])
    return all(v > 0 for v in s)


def eval_F(fop: OperatorFunction, a) -> float:
    a = _operand(fop, a)
    return _jet(fop, a, 0)[1].value


def _prime(pw: list[np.ndarray], grad: np.ndarray) -> np.ndarray:
    out = np.zeros_like(pw[0])
    for l, c in enumerate(grad, start=1):
        out += l * c * pw[l - 1]
    return out


def F_prime(fop: OperatorFunction, a) -> np.ndarray:
    """sum_l l (dpsi/dP_l) A^(l-1), the gradient of F under the trace pairing."""
    a = _operand(fop, a)
    pw, j = _jet(fop, a, 1)
    return _prime(pw, j.grad)


def dF(fop: OperatorFunction, a, b) -> float:
    b = _operand(fop, b)
    return _tr(F_prime(fop, a), b)


def _d2p(k: int, pw: list[np.ndarray], b: np.ndarray, c: np.ndarray) -> float:
    total = 0.0
    for l in range(1, k):
        total += _tr(pw[l - 1] @ b @ pw[k - 1 - l], c)
    return k * total


def d2P(k: int, a, b, c) -> float:
    """Second derivative of P_k at ``a`` in directions ``(b, c)``."""
    a, b, c = as_matrix(a), as_matrix(b), as_matrix(c)
    if not a.shape == b.shape == c.shape:
        raise DimensionMismatch("operands of d2P differ in shape")
    if k < 1:
        raise ValueError("power trace index must be >= 1")
    return _d2p(k, powers(a, max(k - 1, 0)), b, c)


def d2F(fop: OperatorFunction, a, b, c) -> float:
    a, b, c = _operand(fop, a), _operand(fop, b), _operand(fop, c)
    pw, j = _jet(fop, a, 2)
    m = fop.spec.m
    db = np.array([l * _tr(pw[l - 1], b) for l in range(1, m + 1)])
    dc = np.array([l * _tr(pw[l - 1], c) for l in range(1, m + 1)])
    total = float(db @ j.hess @ dc)
    for k in range(2, m + 1):
        if j.grad[k - 1] != 0.0:
            total += j.grad[k - 1] * _d2p(k, pw, b, c)
    return float(total)


def d2F_eigen(fop: OperatorFunction, es: EigenSystem, eta) -> float:
    """d^2F(A)(eta, eta) from the eigenvalues of ``A`` and ``eta`` in its eigenbasis."""
    e = es.to_eigenbasis(_operand(fop, eta))
    kappa = es.eigenvalues
    d = np.diag(e)
    total = float(d @ hess_f(fop.spec, kappa) @ d)
    n = len(kappa)
    for i in range(n):
        for j in range(n):
            if i != j and e[i, j] * e[j, i] != 0.0:
                total += divided_difference(fop.spec, kappa, i, j) * e[i, j] * e[j, i]
    return float(total)


def F_prime_eigenvalues(fop: OperatorFunction, es: EigenSystem) -> np.ndarray:
    """Eigenvalues of F'(A) belonging to the eigenvectors in ``es``."""
    return grad_f(fop.spec, es.eigenvalues)
