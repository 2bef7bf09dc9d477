"""Dense real square matrices, eigensolvers, and test-matrix generators.

Operators are plain ``numpy.ndarray`` values of shape ``(n, n)`` in a fixed
basis. ``as_matrix`` is the single validation point; every public function
accepts anything array-like and validates it on entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotSelfAdjoint,
    NotSPD,
    NotSymmetric,
    SingularMatrix,
)

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SINGULAR_TOL = 1e-12
SYMMETRY_TOL = 1e-12
SELFADJOINT_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a float64 square matrix, rejecting non-finite entries."""
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n)


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def mat_pow(a, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("exponent must be non-negative")
    a = as_matrix(a)
    out = np.eye(a.shape[0])
    for _ in range(k):
        out = out @ a
    return out


def powers(a, m: int) -> list[np.ndarray]:
    """``[a^0, a^1, ..., a^m]`` by repeated multiplication."""
    a = as_matrix(a)
    out = [np.eye(a.shape[0])]
    for _ in range(m):
        out.append(out[-1] @ a)
    return out


def trace(a) -> float:
    return float(np.trace(as_matrix(a)))


def determinant(a) -> float:
    # LAPACK LU with partial pivoting
    return float(np.linalg.det(as_matrix(a)))


def inverse(a) -> np.ndarray:
    a = as_matrix(a)
    n = a.shape[0]
    det = np.linalg.det(a)
    if abs(det) <= SINGULAR_TOL * np.linalg.norm(a) ** n:
        raise SingularMatrix(f"|det| = {abs(det):.3e} is below the singularity threshold")
    return np.linalg.inv(a)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues with a basis of eigenvectors (columns) and its inverse."""

    eigenvalues: np.ndarray
    basis: np.ndarray
    basis_inverse: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return self.basis @ np.diag(self.eigenvalues) @ self.basis_inverse

    def to_eigenbasis(self, eta) -> np.ndarray:
        """Coordinates of the operator ``eta`` with respect to the eigenbasis."""
        return self.basis_inverse @ as_matrix(eta) @ self.basis

    def from_eigenbasis(self, coords) -> np.ndarray:
        return self.basis @ np.asarray(coords, dtype=float) @ self.basis_inverse


def _check_symmetric(a: np.ndarray, tol: float = SYMMETRY_TOL) -> None:
    scale = max(1.0, float(np.abs(a).max()))
    asym = float(np.abs(a - a.T).max())
    if asym > tol * scale:
        raise NotSymmetric(f"max |a - a^T| = {asym:.3e}")


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations on a symmetric matrix; returns (diag, V)."""
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= JACOBI_TOL * norm:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def symmetric_eigen(a) -> EigenSystem:
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending."""
    a = as_matrix(a)
    _check_symmetric(a)
    vals, vecs = _jacobi(0.5 * (a + a.T))
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    return EigenSystem(vals, vecs, vecs.T.copy())


def check_spd(g) -> np.ndarray:
    g = as_matrix(g)
    try:
        _check_symmetric(g)
    except NotSymmetric as exc:
        raise NotSPD(f"inner product matrix is not symmetric: {exc}") from None
    try:
        np.linalg.cholesky(0.5 * (g + g.T))
    except np.linalg.LinAlgError:
        raise NotSPD("inner product matrix is not positive definite") from None
    return g


def sqrt_spd(g) -> tuple[np.ndarray, np.ndarray]:
    """``(g^{1/2}, g^{-1/2})`` for a symmetric positive definite ``g``."""
    g = check_spd(g)
    es = symmetric_eigen(g)
    q, lam = es.basis, es.eigenvalues
    root = np.sqrt(lam)
    return (q * root) @ q.T, (q / root) @ q.T


def is_g_selfadjoint(a, g, tol: float = SELFADJOINT_TOL) -> bool:
    ga = as_matrix(g) @ as_matrix(a)
    scale = max(1.0, float(np.abs(ga).max()))
    return float(np.abs(ga - ga.T).max()) <= tol * scale


def g_selfadjoint_eigen(a, g) -> EigenSystem:
    """Eigen-decomposition of a g-selfadjoint operator.

    Works through the symmetric matrix ``g^{1/2} a g^{-1/2}``; the returned
    eigenvectors are g-orthonormal, so ``basis_inverse = basis^T g``.
    """
    a = as_matrix(a)
    g = check_spd(g)
    if a.shape != g.shape:
        raise DimensionMismatch(f"operator {a.shape} and inner product {g.shape} differ")
    if not is_g_selfadjoint(a, g):
        raise NotSelfAdjoint("g @ a is not symmetric")
    half, inv_half = sqrt_spd(g)
    m = half @ a @ inv_half
    es = symmetric_eigen(0.5 * (m + m.T))
    u = es.basis
    return EigenSystem(es.eigenvalues, inv_half @ u, u.T @ half)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_orthogonal(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def random_invertible(dim: int, seed=None, cond_max: float = 10.0) -> tuple[np.ndarray, np.ndarray]:
    """A random ``(S, S^{-1})`` with 2-norm condition number at most ``cond_max``.

    ``S = Q1 diag(sigma) Q2^T`` so the inverse is formed exactly from the factors.
    """
    rng = _rng(seed)
    q1 = random_orthogonal(dim, rng)
    q2 = random_orthogonal(dim, rng)
    sigma = np.exp(rng.uniform(0.0, np.log(cond_max), size=dim))
    return (q1 * sigma) @ q2.T, (q2 / sigma) @ q1.T


def random_diagonalisable(dim: int, spectrum: Sequence[float], seed=None,
                          cond_max: float = 10.0) -> tuple[np.ndarray, EigenSystem]:
    """``V diag(spectrum) V^{-1}`` for a random well-conditioned ``V``, with its eigensystem."""
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.shape != (dim,):
        raise DimensionMismatch(f"spectrum of length {spectrum.size} for dimension {dim}")
    v, v_inv = random_invertible(dim, seed, cond_max)
    a = (v * spectrum) @ v_inv
    return a, EigenSystem(spectrum.copy(), v, v_inv)


def random_spd(dim: int, seed=None, lo: float = 0.5, hi: float = 4.0) -> np.ndarray:
    rng = _rng(seed)
    q = random_orthogonal(dim, rng)
    g = (q * rng.uniform(lo, hi, size=dim)) @ q.T
    return 0.5 * (g + g.T)


def random_g_selfadjoint(g, spectrum: Sequence[float], seed=None) -> tuple[np.ndarray, EigenSystem]:
    """A g-selfadjoint operator with the given spectrum and its g-orthonormal eigensystem."""
    g = check_spd(g)
    spectrum = np.asarray(spectrum, dtype=float)
    half, inv_half = sqrt_spd(g)
    q = random_orthogonal(g.shape[0], seed)
    basis = inv_half @ q
    basis_inverse = q.T @ half
    a = (basis * spectrum) @ basis_inverse
    return a, EigenSystem(spectrum.copy(), basis, basis_inverse)


def parse_matrix(obj) -> np.ndarray:
    """Decode the JSON array-of-rows encoding."""
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ValueError("matrix must be a non-empty array of rows")
    n = len(obj)
    for row in obj:
        if len(row) != n:
            raise DimensionMismatch(f"row of length {len(row)} in a {n}-row matrix")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ValueError(f"non-numeric matrix entry {x!r}")
    return as_matrix(obj)


def load_matrix(path) -> np.ndarray:
    return parse_matrix(json.loads(Path(path).read_text()))


def matrix_to_json(a) -> list[list[float]]:
    return [[float(x) for x in row] for row in as_matrix(a)]
