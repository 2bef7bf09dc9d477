"""Symmetric functions of eigenvalue tuples.

A symmetric function is given constructively as ``f = psi(p_1, ..., p_m)``
where the ``p_l`` are power sums, so the same ``psi`` also defines the
operator function on arbitrary matrices (see :mod:`isotropic.opfn`).
Indices ``i, j`` into eigenvalue tuples are 0-based throughout.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DomainViolation
from .psi import Const, Psi, Quotient, Var, elementary_psi, parse_psi, power_sums_from_elementary

COALESCENCE_TOL = 1e-6
GAUSS_NODES = 16


@dataclass(frozen=True)
class DomainCone:
    """One of the full space, the positive cone, or the cone ``Gamma_k``."""

    kind: str = "full"
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ("full", "gplus", "gk"):
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.kind == "gk" and (self.k is None or self.k < 1):
            raise ValueError("Gamma_k needs k >= 1")

    @classmethod
    def full(cls) -> "DomainCone":
        return cls("full")

    @classmethod
    def gamma_plus(cls) -> "DomainCone":
        return cls("gplus")

    @classmethod
    def gamma_k(cls, k: int) -> "DomainCone":
        return cls("gk", k)

    @classmethod
    def parse(cls, text: str) -> "DomainCone":
        text = text.strip().lower()
        if text == "full":
            return cls.full()
        if text == "gplus":
            return cls.gamma_plus()
        m = re.fullmatch(r"gk:(\d+)", text)
        if m:
            return cls.gamma_k(int(m.group(1)))
        raise ValueError(f"unknown cone {text!r}; expected full, gplus or gk:<k>")

    def check_dim(self, n: int) -> None:
        if self.kind == "gk" and self.k > n:
            raise ValueError(f"Gamma_{self.k} needs k <= n = {n}")

    def __str__(self) -> str:
        return f"gk:{self.k}" if self.kind == "gk" else self.kind


def _tuple(kappa) -> np.ndarray:
    k = np.asarray(kappa, dtype=float)
    if k.ndim != 1 or k.size == 0:
        raise ValueError("eigenvalue tuple must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(k)):
        raise ValueError("eigenvalues must be finite")
    return k


def power_sum(k: int, kappa) -> float:
    if k < 1:
        raise ValueError("power sum index must be >= 1")
    return float(np.sum(_tuple(kappa) ** k))


def power_sums(kappa, m: int) -> np.ndarray:
    kappa = _tuple(kappa)
    return np.array([np.sum(kappa ** l) for l in range(1, m + 1)])


def elementary(k: int, kappa) -> float:
    """s_k by enumeration of all k-subsets."""
    kappa = _tuple(kappa)
    if not 1 <= k <= kappa.size:
        raise ValueError(f"elementary index {k} outside 1..{kappa.size}")
    return float(sum(math.prod(c) for c in itertools.combinations(kappa.tolist(), k)))


def newton_elementary(p: Sequence[float]) -> list[float]:
    """(s_1..s_n) from power sums (p_1..p_n) by k s_k = sum_i (-1)^(i-1) s_(k-i) p_i."""
    s = [1.0]
    for k in range(1, len(p) + 1):
        acc = sum((-1.0) ** (i - 1) * s[k - i] * p[i - 1] for i in range(1, k + 1))
        s.append(acc / k)
    return s[1:]


def in_domain(cone: DomainCone, kappa) -> bool:
    kappa = _tuple(kappa)
    if cone.kind == "full":
        return True
    if cone.kind == "gplus":
        return bool(np.all(kappa > 0))
    if cone.k > kappa.size:
        return False
    return all(elementary(j, kappa) > 0 for j in range(1, cone.k + 1))


@dataclass(frozen=True, eq=False)
class SymmetricFunctionSpec:
    """A named symmetric function ``f = psi(p_1..p_m)`` on ``n`` variables.

    ``degree`` and ``traits`` record known structure used by the verification
    suites: traits are drawn from ``monotone``, ``concave``, ``positive`` and
    ``inverse_concave`` and refer to the positive cone.
    """

    name: str
    psi: Psi
    n: int
    cone: DomainCone = field(default_factory=DomainCone.full)
    degree: float | None = None
    traits: frozenset[str] = frozenset()
    m: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        self.cone.check_dim(self.n)
        object.__setattr__(self, "m", max(1, self.psi.max_index()))

    def _check(self, kappa) -> np.ndarray:
        kappa = _tuple(kappa)
        if kappa.size != self.n:
            raise ValueError(f"{self.name} takes {self.n} eigenvalues, got {kappa.size}")
        if not in_domain(self.cone, kappa):
            raise DomainViolation(f"{kappa.tolist()} is outside the cone {self.cone} of {self.name}")
        return kappa

    def value(self, kappa) -> float:
        kappa = self._check(kappa)
        return self.psi.evaluate(power_sums(kappa, self.m), order=0).value

    def __call__(self, kappa) -> float:
        return self.value(kappa)

    def _jet(self, kappa, order):
        kappa = self._check(kappa)
        return kappa, self.psi.evaluate(power_sums(kappa, self.m), order=order)


def _power_jacobian(kappa: np.ndarray, m: int) -> np.ndarray:
    """Rows i, columns l: d p_l / d kappa_i = l kappa_i^(l-1)."""
    ls = np.arange(1, m + 1)
    return ls * kappa[:, None] ** (ls - 1)


def grad_f(f: SymmetricFunctionSpec, kappa) -> np.ndarray:
    kappa, j = f._jet(kappa, 1)
    return _power_jacobian(kappa, f.m) @ j.grad


def hess_f(f: SymmetricFunctionSpec, kappa) -> np.ndarray:
    kappa, j = f._jet(kappa, 2)
    jac = _power_jacobian(kappa, f.m)
    ls = np.arange(1, f.m + 1)
    # d^2 p_l / d kappa_i^2 = l (l-1) kappa_i^(l-2)
    second = ls * (ls - 1) * kappa[:, None] ** np.maximum(ls - 2, 0)
    return jac @ j.hess @ jac.T + np.diag(second @ j.grad)


def _coalesced(a: float, b: float, tau: float) -> bool:
    return abs(a - b) <= tau * max(1.0, abs(a), abs(b))


def divided_difference(f: SymmetricFunctionSpec, kappa, i: int, j: int,
                       tau: float = COALESCENCE_TOL) -> float:
    """(f_i - f_j) / (kappa_i - kappa_j), or its limit f_ii - f_ij when the two coalesce."""
    kappa = _tuple(kappa)
    if i == j:
        raise ValueError("divided difference needs distinct indices")
    if _coalesced(kappa[i], kappa[j], tau):
        h = hess_f(f, kappa)
        return float(h[i, i] - h[i, j])
    g = grad_f(f, kappa)
    return float((g[i] - g[j]) / (kappa[i] - kappa[j]))


def integral_divided_difference(f: SymmetricFunctionSpec, kappa, i: int, j: int) -> float:
    """Half the integral of f_ii - 2 f_ij + f_jj along the segment joining kappa to
    the point where kappa_i and kappa_j meet at their midpoint."""
    kappa = _tuple(kappa)
    if i == j:
        raise ValueError("divided difference needs distinct indices")
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)
    ts, ws = 0.5 * (nodes + 1.0), 0.5 * weights
    step = np.zeros_like(kappa)
    step[i], step[j] = 1.0, -1.0
    step *= 0.5 * (kappa[j] - kappa[i])
    if not (in_domain(f.cone, kappa) and in_domain(f.cone, kappa + step)):
        raise DomainViolation("integration segment leaves the domain cone")
    total = 0.0
    for t, w in zip(ts, ws):
        point = kappa + t * step
        if not in_domain(f.cone, point):
            raise DomainViolation("integration segment leaves the domain cone")
        h = hess_f(f, point)
        total += w * (h[i, i] - 2.0 * h[i, j] + h[j, j])
    return 0.5 * float(total)


_INVERSE_TRAITS = {"monotone": "monotone", "positive": "positive",
                   "concave": "inverse_concave", "inverse_concave": "concave"}


def inverse_transform(f: SymmetricFunctionSpec) -> SymmetricFunctionSpec:
    """The inverse symmetric function kappa -> 1 / f(1/kappa_1, ..., 1/kappa_n) on the positive cone.

    The power sums of the reciprocals are rewritten through s_k(1/kappa) =
    s_(n-k)(kappa) / s_n(kappa), so the result is again a psi over power sums
    of kappa and extends to every invertible operator as 1 / F(A^{-1}).
    """
    n = f.n
    sn = elementary_psi(n)
    recip_e = [Quotient(elementary_psi(n - k), sn) for k in range(1, n + 1)]
    recip_p = power_sums_from_elementary(recip_e, f.m)
    psi = Quotient(Const(1.0), f.psi.substitute({l: recip_p[l - 1] for l in range(1, f.m + 1)}))
    traits = frozenset(_INVERSE_TRAITS[t] for t in f.traits if t in _INVERSE_TRAITS)
    return SymmetricFunctionSpec(f"inv:{f.name}", psi, n, DomainCone.gamma_plus(), f.degree, traits)


def _s(k: int) -> Psi:
    return elementary_psi(k)


def builtin(name: str, n: int) -> SymmetricFunctionSpec:
    """Built-in families: ``p<k>``, ``s<k>``, ``q<k>`` and ``ratio:<k>:<l>``."""
    name = name.strip()
    m = re.fullmatch(r"([psq])(\d+)", name)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if k < 1:
            raise ValueError(f"{name}: index must be >= 1")
        if kind == "p":
            traits = {"monotone", "positive"} | ({"concave", "inverse_concave"} if k == 1 else set())
            return SymmetricFunctionSpec(name, Var(k), n, DomainCone.full(), float(k), frozenset(traits))
        if k > n:
            raise ValueError(f"{name}: index must be <= n = {n}")
        if kind == "s":
            traits = {"monotone", "positive"} | ({"concave", "inverse_concave"} if k == 1 else set())
            return SymmetricFunctionSpec(name, _s(k), n, DomainCone.gamma_k(k), float(k), frozenset(traits))
        psi = _s(1) if k == 1 else Quotient(_s(k), _s(k - 1))
        cone = DomainCone.gamma_k(max(1, k - 1))
        traits = frozenset({"monotone", "positive", "concave", "inverse_concave"})
        return SymmetricFunctionSpec(name, psi, n, cone, 1.0, traits)
    m = re.fullmatch(r"ratio[:(](\d+)[:,](\d+)\)?", name)
    if m:
        k, l = int(m.group(1)), int(m.group(2))
        if not 0 <= l < k <= n:
            raise ValueError(f"{name}: need 0 <= l < k <= n = {n}")
        base = _s(k) if l == 0 else Quotient(_s(k), _s(l))
        psi = base ** (1.0 / (k - l)) if k - l > 1 else base
        traits = frozenset({"monotone", "positive", "concave", "inverse_concave"})
        return SymmetricFunctionSpec(f"ratio:{k}:{l}", psi, n, DomainCone.gamma_plus(), 1.0, traits)
    raise ValueError(f"unknown function {name!r}")


def parse_function(text: str, n: int, cone: DomainCone | None = None) -> SymmetricFunctionSpec:
    """Decode the textual function encoding used by the CLI.

    ``p<k>``, ``s<k>``, ``q<k>``, ``ratio:<k>:<l>``, ``inv:<spec>`` and
    ``psi:<prefix expression>``. ``cone`` overrides the function's own cone.
    """
    text = text.strip()
    if text.startswith("inv:"):
        inner = parse_function(text[4:], n, DomainCone.gamma_plus())
        spec = inverse_transform(inner)
    elif text.startswith("psi:"):
        spec = SymmetricFunctionSpec(text, parse_psi(text[4:]), n)
    else:
        spec = builtin(text, n)
    if cone is not None and cone != spec.cone:
        spec = replace(spec, cone=cone)
    return spec


def families(n: int) -> list[SymmetricFunctionSpec]:
    """The built-in families exercised by the full verification run."""
    names = [f"p{k}" for k in range(1, 5)] + [f"s{k}" for k in range(1, n + 1)]
    names += [f"q{k}" for k in (2, 3) if k <= n]
    names += [f"ratio:{k}:{l}" for k, l in ((2, 1), (3, 1), (2, 0)) if k <= n]
    return [builtin(name, n) for name in names]
