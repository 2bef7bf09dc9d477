"""Expression trees over power-sum variables P_1, ..., P_m.

A ``Psi`` node evaluates to a :class:`Jet`: its value together with its
gradient and Hessian with respect to ``(P_1, ..., P_m)``. Jets are propagated
bottom-up by the usual sum, product, quotient and chain rules, so no
numerical differentiation is involved. Trees may share sub-expressions (the
Newton recursion for s_k does so heavily); evaluation memoises per node.

Prefix grammar accepted by :func:`parse_psi`::

    expr := NUMBER | P<l> | S<k> | "(" OP expr* ")"
    OP   := add | sub | mul | div | pow | abs | neg

``S<k>`` expands to the elementary symmetric polynomial through the Newton
recursion, ``pow`` takes a numeric literal exponent, e.g.
``(pow (abs P2) 1.5)`` or ``(div S2 S1)``.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainViolation, NonDifferentiablePoint, ZeroDenominator


class Jet(NamedTuple):
    value: float
    grad: np.ndarray | None
    hess: np.ndarray | None


class Psi:
    """Base class of expression nodes. Nodes are immutable and compared by identity."""

    __slots__ = ()

    def children(self) -> tuple["Psi", ...]:
        return ()

    def max_index(self) -> int:
        seen: set[int] = set()
        best = 0
        stack: list[Psi] = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            if isinstance(node, Var):
                best = max(best, node.index)
            stack.extend(node.children())
        return best

    def jet(self, x: Sequence[float], order: int = 2) -> Jet:
        """Value and derivatives up to ``order`` at ``x = (P_1, ..., P_m)``."""
        x = np.asarray(x, dtype=float)
        if x.size < self.max_index():
            raise ValueError(f"need {self.max_index()} power sums, got {x.size}")
        return self._jet(x, order, {})

    def evaluate(self, x: np.ndarray, order: int = 2) -> Jet:
        """As :meth:`jet` without the length check; ``x`` must be a float array."""
        return self._jet(x, order, {})

    def value(self, x: Sequence[float]) -> float:
        return self.jet(x, order=0).value

    def _jet(self, x, order, memo) -> Jet:
        key = id(self)
        out = memo.get(key)
        if out is None:
            out = self._compute(x, order, memo)
            memo[key] = out
        return out

    def _compute(self, x, order, memo) -> Jet:
        raise NotImplementedError

    def substitute(self, mapping: dict[int, "Psi"]) -> "Psi":
        """Replace each ``P_l`` in ``mapping`` by the given expression, keeping sharing."""
        memo: dict[int, Psi] = {}
        return self._subst(mapping, memo)

    def _subst(self, mapping, memo) -> "Psi":
        key = id(self)
        if key not in memo:
            memo[key] = self._rebuild(mapping, memo)
        return memo[key]

    def _rebuild(self, mapping, memo) -> "Psi":
        return self

    def to_prefix(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"Psi({self.to_prefix()})"

    # construction sugar
    def __add__(self, other):
        return Sum((self, _lift(other)))

    def __radd__(self, other):
        return Sum((_lift(other), self))

    def __sub__(self, other):
        return Sum((self, Product((Const(-1.0), _lift(other)))))

    def __rsub__(self, other):
        return Sum((_lift(other), Product((Const(-1.0), self))))

    def __mul__(self, other):
        return Product((self, _lift(other)))

    def __rmul__(self, other):
        return Product((_lift(other), self))

    def __truediv__(self, other):
        return Quotient(self, _lift(other))

    def __rtruediv__(self, other):
        return Quotient(_lift(other), self)

    def __neg__(self):
        return Product((Const(-1.0), self))

    def __pow__(self, q):
        return Power(self, float(q))


def _lift(x) -> Psi:
    return x if isinstance(x, Psi) else Const(float(x))


def _zeros(x, order):
    m = x.size
    g = np.zeros(m) if order >= 1 else None
    h = np.zeros((m, m)) if order >= 2 else None
    return g, h


class Var(Psi):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 1:
            raise ValueError("power-sum index must be >= 1")
        self.index = int(index)

    def _compute(self, x, order, memo):
        g, h = _zeros(x, order)
        if g is not None:
            g[self.index - 1] = 1.0
        return Jet(float(x[self.index - 1]), g, h)

    def _rebuild(self, mapping, memo):
        return mapping.get(self.index, self)

    def to_prefix(self):
        return f"P{self.index}"


class Const(Psi):
    __slots__ = ("c",)

    def __init__(self, c: float):
        self.c = float(c)

    def _compute(self, x, order, memo):
        g, h = _zeros(x, order)
        return Jet(self.c, g, h)

    def to_prefix(self):
        return repr(self.c)


class Sum(Psi):
    __slots__ = ("terms",)

    def __init__(self, terms: Sequence[Psi]):
        self.terms = tuple(terms)

    def children(self):
        return self.terms

    def _compute(self, x, order, memo):
        v = 0.0
        g, h = _zeros(x, order)
        for t in self.terms:
            j = t._jet(x, order, memo)
            v += j.value
            if g is not None:
                g = g + j.grad
            if h is not None:
                h = h + j.hess
        return Jet(v, g, h)

    def _rebuild(self, mapping, memo):
        return Sum(tuple(t._subst(mapping, memo) for t in self.terms))

    def to_prefix(self):
        return "(add " + " ".join(t.to_prefix() for t in self.terms) + ")"


class Product(Psi):
    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[Psi]):
        self.factors = tuple(factors)

    def children(self):
        return self.factors

    def _compute(self, x, order, memo):
        v = 1.0
        g, h = _zeros(x, order)
        for f in self.factors:
            j = f._jet(x, order, memo)
            if h is not None:
                h = v * j.hess + j.value * h + np.outer(g, j.grad) + np.outer(j.grad, g)
            if g is not None:
                g = v * j.grad + j.value * g
            v = v * j.value
        return Jet(v, g, h)

    def _rebuild(self, mapping, memo):
        return Product(tuple(f._subst(mapping, memo) for f in self.factors))

    def to_prefix(self):
        return "(mul " + " ".join(f.to_prefix() for f in self.factors) + ")"


class Quotient(Psi):
    __slots__ = ("num", "den")

    def __init__(self, num: Psi, den: Psi):
        self.num, self.den = num, den

    def children(self):
        return (self.num, self.den)

    def _compute(self, x, order, memo):
        a = self.num._jet(x, order, memo)
        b = self.den._jet(x, order, memo)
        if b.value == 0.0:
            raise ZeroDenominator(f"denominator {self.den.to_prefix()} vanishes")
        v = a.value / b.value
        g = h = None
        if order >= 1:
            g = (a.grad - v * b.grad) / b.value
        if order >= 2:
            h = (a.hess - v * b.hess - np.outer(g, b.grad) - np.outer(b.grad, g)) / b.value
        return Jet(v, g, h)

    def _rebuild(self, mapping, memo):
        return Quotient(self.num._subst(mapping, memo), self.den._subst(mapping, memo))

    def to_prefix(self):
        return f"(div {self.num.to_prefix()} {self.den.to_prefix()})"


class Power(Psi):
    """``base ** q`` for real ``q``; non-integer ``q`` needs a positive base."""

    __slots__ = ("base", "q")

    def __init__(self, base: Psi, q: float):
        self.base, self.q = base, float(q)

    def children(self):
        return (self.base,)

    def _compute(self, x, order, memo):
        u = self.base._jet(x, order, memo)
        q = self.q
        integral = q == math.floor(q)
        if u.value < 0.0 and not integral:
            raise DomainViolation(f"negative base {u.value:.6g} for exponent {q}")
        if u.value == 0.0 and not integral:
            # fractional power at 0: value for q > 0, derivatives only while q exceeds the order
            if q <= 0.0:
                raise DomainViolation(f"zero base for exponent {q}")
            if order >= 1 and q < 1.0:
                raise NonDifferentiablePoint(f"0**{q} has no first derivative")
            if order >= 2 and q < 2.0:
                raise NonDifferentiablePoint(f"0**{q} has no second derivative")
            g, h = _zeros(x, order)
            return Jet(0.0, g, h)
        if u.value == 0.0 and q < 0.0:
            raise ZeroDenominator(f"zero base for exponent {q}")
        qq = int(q) if integral else q
        v = u.value ** qq
        g = h = None
        if order >= 1:
            d1 = qq * u.value ** (qq - 1) if qq != 0 else 0.0
            g = d1 * u.grad
        if order >= 2:
            d2 = qq * (qq - 1) * u.value ** (qq - 2) if qq not in (0, 1) else 0.0
            h = d1 * u.hess + d2 * np.outer(u.grad, u.grad)
        return Jet(float(v), g, h)

    def _rebuild(self, mapping, memo):
        return Power(self.base._subst(mapping, memo), self.q)

    def to_prefix(self):
        return f"(pow {self.base.to_prefix()} {self.q!r})"


class Abs(Psi):
    """``|u|``; the derivative at ``u = 0`` is taken to be 0."""

    __slots__ = ("arg",)

    def __init__(self, arg: Psi):
        self.arg = arg

    def children(self):
        return (self.arg,)

    def _compute(self, x, order, memo):
        u = self.arg._jet(x, order, memo)
        s = float(np.sign(u.value))
        g = s * u.grad if order >= 1 else None
        h = s * u.hess if order >= 2 else None
        return Jet(abs(u.value), g, h)

    def _rebuild(self, mapping, memo):
        return Abs(self.arg._subst(mapping, memo))

    def to_prefix(self):
        return f"(abs {self.arg.to_prefix()})"


ONE = Const(1.0)


@lru_cache(maxsize=None)
def elementary_psi(k: int) -> Psi:
    """s_k as a function of P_1..P_k via k s_k = sum_i (-1)^(i-1) s_(k-i) P_i, s_0 = 1."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return ONE
    terms = []
    for i in range(1, k + 1):
        coeff = (-1.0) ** (i - 1) / k
        terms.append(Product((Const(coeff), elementary_psi(k - i), Var(i))))
    return Sum(terms)


def power_sums_from_elementary(e: Sequence[Psi], m: int) -> list[Psi]:
    """Power sums p_1..p_m written in terms of elementary expressions ``e = (e_1, ..., e_n)``.

    Uses p_k = (-1)^(k-1) k e_k + sum_{i<k} (-1)^(k-1+i) e_(k-i) p_i with e_j = 0 for j > n.
    """
    n = len(e)
    p: list[Psi] = []
    for k in range(1, m + 1):
        terms: list[Psi] = []
        if k <= n:
            terms.append(Product((Const((-1.0) ** (k - 1) * k), e[k - 1])))
        for i in range(1, k):
            if k - i <= n:
                terms.append(Product((Const((-1.0) ** (k - 1 + i)), e[k - i - 1], p[i - 1])))
        p.append(Sum(terms))
    return p


_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_ARITY = {"add": (1, None), "mul": (1, None), "sub": (1, 2), "div": (2, 2),
          "pow": (2, 2), "abs": (1, 1), "neg": (1, 1)}


def parse_psi(text: str) -> Psi:
    """Parse the prefix grammar described in the module docstring."""
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ValueError("empty psi expression")
    pos = 0

    def atom(tok: str) -> Psi:
        if _NUMBER.match(tok):
            return Const(float(tok))
        m = re.fullmatch(r"([PS])(\d+)", tok)
        if m is None:
            raise ValueError(f"unknown token {tok!r}")
        k = int(m.group(2))
        if m.group(1) == "P":
            return Var(k)
        if k < 1:
            raise ValueError("S<k> needs k >= 1")
        return elementary_psi(k)

    def expr() -> Psi:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of psi expression")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ValueError("unexpected ')'")
        if tok != "(":
            return atom(tok)
        if pos >= len(tokens):
            raise ValueError("unexpected end of psi expression")
        op = tokens[pos]
        pos += 1
        if op not in _ARITY:
            raise ValueError(f"unknown operator {op!r}")
        args: list[Psi] = []
        while pos < len(tokens) and tokens[pos] != ")":
            args.append(expr())
        if pos >= len(tokens):
            raise ValueError("missing ')'")
        pos += 1
        lo, hi = _ARITY[op]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ValueError(f"wrong number of arguments for {op}")
        if op == "add":
            return Sum(args)
        if op == "mul":
            return Product(args)
        if op == "sub":
            return -args[0] if len(args) == 1 else args[0] - args[1]
        if op == "div":
            return Quotient(args[0], args[1])
        if op == "abs":
            return Abs(args[0])
        if op == "neg":
            return -args[0]
        if not isinstance(args[1], Const):
            raise ValueError("pow exponent must be a numeric literal")
        return Power(args[0], args[1].c)

    out = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens after psi expression: {tokens[pos:]}")
    return out
