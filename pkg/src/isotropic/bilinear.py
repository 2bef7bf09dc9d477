"""Bilinear forms on V and V*, index raising, and Phi(g, h) = F(g^{-1} * sym(h)).

Forms on V carry covariant entries ``a_ij`` and forms on V* contravariant
entries ``b^ij``. Both are stored as plain matrices but kept as distinct
types so a contraction can only pair one of each.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .matrix import as_matrix, check_spd
from .opfn import F_prime, OperatorFunction, eval_F


@dataclass(frozen=True, eq=False)
class BilinearForm:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", as_matrix(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __call__(self, v, w) -> float:
        return float(np.asarray(v) @ self.entries @ np.asarray(w))


@dataclass(frozen=True, eq=False)
class CoBilinearForm:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", as_matrix(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def pair(self, a: BilinearForm) -> float:
        """Full contraction sum_ij b^ij a_ij."""
        if a.dim != self.dim:
            raise DimensionMismatch(f"cannot pair dimensions {self.dim} and {a.dim}")
        return float(np.sum(self.entries * a.entries))


@dataclass(frozen=True, eq=False)
class InnerProduct:
    """A symmetric positive definite form together with its inverse on V*."""

    form: BilinearForm

    def __post_init__(self):
        if not isinstance(self.form, BilinearForm):
            object.__setattr__(self, "form", BilinearForm(self.form))
        check_spd(self.form.entries)
        object.__setattr__(self, "_inverse", CoBilinearForm(np.linalg.inv(self.form.entries)))

    @property
    def dim(self) -> int:
        return self.form.dim

    @property
    def matrix(self) -> np.ndarray:
        return self.form.entries

    @property
    def inverse(self) -> CoBilinearForm:
        return self._inverse


def symmetrize(a):
    """(a + a^T) / 2, for a form on either V or V*."""
    return type(a)(0.5 * (a.entries + a.entries.T))


def contract(b: CoBilinearForm, a: BilinearForm) -> np.ndarray:
    """The operator b * a with entries sum_k b^ik a_kj."""
    if not isinstance(b, CoBilinearForm) or not isinstance(a, BilinearForm):
        raise TypeError("contract pairs a CoBilinearForm with a BilinearForm")
    if a.dim != b.dim:
        raise DimensionMismatch(f"cannot contract dimensions {b.dim} and {a.dim}")
    return b.entries @ a.entries


def sharp(g: InnerProduct, a: BilinearForm) -> np.ndarray:
    """Raise an index with g: the operator A with a(v, w) = g(A v, w)."""
    return contract(g.inverse, a)


def Phi(fop: OperatorFunction, g: InnerProduct, h: BilinearForm) -> float:
    return eval_F(fop, sharp(g, symmetrize(h)))


def dPhi_dh(fop: OperatorFunction, g: InnerProduct, h: BilinearForm) -> CoBilinearForm:
    """Partial derivative of Phi in h as a symmetric form on V*.

    Pairing the result with a direction ``a`` gives tr(F'(g^{-1} * sym(h)) sym(a)^#).
    """
    fp = F_prime(fop, sharp(g, symmetrize(h)))
    m = fp @ g.inverse.entries
    return CoBilinearForm(0.5 * (m + m.T))
