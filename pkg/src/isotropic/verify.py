"""Sampled property suites for operator functions, plus the two counterexamples.

Every suite draws its samples from a generator seeded by ``(seed, suite,
sample index)``, so a report depends only on the configuration. A suite never
raises on a failing sample: the failure is folded into ``worst_violation``
and the sample is kept as the counterexample payload.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bilinear import BilinearForm, InnerProduct, dPhi_dh
from .errors import IsotropicError
from .matrix import (
    EigenSystem,
    matrix_to_json,
    random_diagonalisable,
    random_g_selfadjoint,
    random_invertible,
    random_spd,
)
from .opfn import F_prime, F_prime_eigenvalues, OperatorFunction, d2F, d2F_eigen, dF, eval_F
from .psi import Abs, Power, Var
from .symfn import (
    DomainCone,
    SymmetricFunctionSpec,
    builtin,
    divided_difference,
    hess_f,
    in_domain,
)

FD_STEP = 1e-5
FD2_STEP = 1e-4
GRAD_TOL = 1e-6
HESS_TOL = 1e-4
SIMILARITY_TOL = 1e-8
HOMOGENEITY_TOL = 1e-10
CONCAVITY_TOL = 1e-10
INEQUALITY_SLACK = 1e-9
EXAMPLE_TOL = 1e-12
REGULARITY_TOL = 0.02
EIGEN_TOL = 1e-8
COALESCED_TOL = 1e-4
COMMUTATOR_TOL = 1e-10
COALESCED_GAP = 1e-7
HOMOGENEITY_FACTORS = (0.5, 2.0, 10.0)
REGULARITY_STEPS = (1e-2, 1e-4, 1e-6)


@dataclass(frozen=True)
class SampleConfig:
    dim: int = 3
    samples: int = 100
    seed: int = 42
    cone: DomainCone = field(default_factory=DomainCone.gamma_plus)
    spectrum_range: tuple[float, float] = (0.5, 3.0)
    gap_floor: float = 1e-3

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        lo, hi = self.spectrum_range
        if not lo < hi:
            raise ValueError("spectrum_range needs lo < hi")
        if self.gap_floor < 0:
            raise ValueError("gap_floor must be >= 0")
        self.cone.check_dim(self.dim)


@dataclass
class PropertyReport:
    property: str
    function: str
    passed: bool
    samples_run: int
    worst_violation: float
    tolerance: float
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "property": self.property,
            "function": self.function,
            "pass": self.passed,
            "samples_run": self.samples_run,
            "worst_violation": self.worst_violation,
            "tolerance": self.tolerance,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "PropertyReport":
        try:
            worst = d["worst_violation"]
            worst = float("inf") if worst == "inf" else float(worst)
            return cls(str(d["property"]), str(d.get("function", "")), bool(d["pass"]),
                       int(d["samples_run"]), worst, float(d.get("tolerance", 0.0)),
                       d.get("counterexample"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed property report: {exc}") from None


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits.

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, PropertyReport):
        obj = obj.to_dict()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


class _Worst:
    """Running maximum of a violation measure with the payload of the worst sample."""

    def __init__(self):
        self.value = 0.0
        self.payload: dict | None = None

    def update(self, v: float, payload: Callable[[], dict]) -> None:
        if math.isnan(v):
            v = math.inf
        if v > self.value or (self.payload is None and v > 0):
            self.value = v
            self.payload = payload()


def _report(prop: str, fop_name: str, samples: int, worst: _Worst, tol: float,
            witness: dict | None = None) -> PropertyReport:
    passed = bool(worst.value <= tol)
    payload = witness if witness is not None else (None if passed else worst.payload)
    return PropertyReport(prop, fop_name, passed, samples, float(worst.value), tol, payload)


def _rng(cfg: SampleConfig, suite: str, index: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(suite.encode()), index])


def _rel(a: float, b: float, floor: float = 0.0) -> float:
    denom = max(abs(a), abs(b), floor)
    if denom == 0.0:
        return 0.0
    return abs(a - b) / denom


def _positivity(x: float, scale: float) -> float:
    """Violation of the strict inequality x > 0, measured relative to ``scale``."""
    if x > 0:
        return 0.0
    return max(-x / scale if scale > 0 else math.inf, np.finfo(float).tiny)


def sample_spectrum(rng: np.random.Generator, cfg: SampleConfig, spec: SymmetricFunctionSpec | None = None,
                    cone: DomainCone | None = None, gap_floor: float | None = None,
                    max_tries: int = 10000) -> np.ndarray:
    """Uniform draw from ``spectrum_range`` restricted to the cones, with a minimum gap."""
    lo, hi = cfg.spectrum_range
    gap = cfg.gap_floor if gap_floor is None else gap_floor
    cones = [cfg.cone] + ([spec.cone] if spec is not None else []) + ([cone] if cone is not None else [])
    for _ in range(max_tries):
        kappa = rng.uniform(lo, hi, size=cfg.dim)
        srt = np.sort(kappa)
        if cfg.dim > 1 and np.min(np.diff(srt)) < gap:
            continue
        if all(in_domain(c, kappa) for c in cones):
            return kappa
    raise ValueError(f"no spectrum in {cfg.spectrum_range} satisfies cones {[str(c) for c in cones]}")


def sample_diagonalisable(rng, cfg, spec=None, cone=None, gap_floor=None) -> tuple[np.ndarray, EigenSystem]:
    kappa = sample_spectrum(rng, cfg, spec, cone, gap_floor)
    return random_diagonalisable(cfg.dim, kappa, rng)


def _unit(rng: np.random.Generator, n: int) -> np.ndarray:
    b = rng.standard_normal((n, n))
    return b / np.linalg.norm(b)


def _sym(rng: np.random.Generator, n: int) -> np.ndarray:
    b = _unit(rng, n)
    return b + b.T


def _payload(**items) -> dict:
    out = {}
    for k, v in items.items():
        if isinstance(v, np.ndarray):
            out[k] = matrix_to_json(v) if v.ndim == 2 else [float(x) for x in v]
        elif isinstance(v, (float, np.floating)):
            out[k] = float(v)
        else:
            out[k] = v
    return out


def _per_sample(fop: OperatorFunction, cfg: SampleConfig, suite: str, worst: _Worst,
                body: Callable[[np.random.Generator, int], None]) -> None:
    for index in range(cfg.samples):
        rng = _rng(cfg, suite, index)
        try:
            body(rng, index)
        except IsotropicError as exc:
            worst.update(math.inf, lambda: {"function": fop.name, "sample": index, "error": str(exc)})


def check_gradient_fd(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """dF(A)B against (F(A+hB) - F(A-hB)) / 2h."""
    worst = _Worst()
    h = FD_STEP

    def body(rng, index):
        a, _ = sample_diagonalisable(rng, cfg, fop.spec)
        b = _unit(rng, cfg.dim)
        exact = dF(fop, a, b)
        fd = (eval_F(fop, a + h * b) - eval_F(fop, a - h * b)) / (2 * h)
        floor = float(np.linalg.norm(F_prime(fop, a)))
        worst.update(_rel(exact, fd, floor),
                     lambda: _payload(function=fop.name, A=a, B=b, dF=exact, finite_difference=fd))

    _per_sample(fop, cfg, "grad", worst, body)
    return _report("grad", fop.name, cfg.samples, worst, GRAD_TOL)


def check_hessian_fd(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """d2F(A)(B,B) against (F(A+hB) - 2F(A) + F(A-hB)) / h^2, with ||B|| = 1."""
    worst = _Worst()
    h = FD2_STEP

    def body(rng, index):
        a, _ = sample_diagonalisable(rng, cfg, fop.spec)
        b = _unit(rng, cfg.dim)
        exact = d2F(fop, a, b, b)
        f0 = eval_F(fop, a)
        fd = (eval_F(fop, a + h * b) - 2 * f0 + eval_F(fop, a - h * b)) / h ** 2
        na = float(np.linalg.norm(a))
        # natural size of a second derivative of F at A along a unit direction
        floor = (abs(f0) + float(np.linalg.norm(F_prime(fop, a))) * na) / na ** 2
        worst.update(_rel(exact, fd, floor),
                     lambda: _payload(function=fop.name, A=a, B=b, d2F=exact, finite_difference=fd))

    _per_sample(fop, cfg, "hess", worst, body)
    return _report("hess", fop.name, cfg.samples, worst, HESS_TOL)


def jordan_type(rng: np.random.Generator, cfg: SampleConfig, spec=None) -> np.ndarray:
    """Upper-triangular matrix with one repeated eigenvalue and a full Jordan chain."""
    n = cfg.dim
    lo, hi = cfg.spectrum_range
    for _ in range(10000):
        lam = rng.uniform(lo, hi)
        kappa = np.full(n, lam)
        if in_domain(cfg.cone, kappa) and (spec is None or in_domain(spec.cone, kappa)):
            break
    else:
        raise ValueError("no admissible repeated eigenvalue in spectrum_range")
    a = lam * np.eye(n) + np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), 2)
    a[np.arange(n - 1), np.arange(1, n)] = 1.0
    return a


def check_similarity_invariance(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """|F(S A S^-1) - F(A)| <= tol (1 + |F(A)|); every other sample is non-diagonalisable."""
    worst = _Worst()

    def body(rng, index):
        jordan = index % 2 == 0
        a = jordan_type(rng, cfg, fop.spec) if jordan else sample_diagonalisable(rng, cfg, fop.spec)[0]
        s, s_inv = random_invertible(cfg.dim, rng)
        fa = eval_F(fop, a)
        fs = eval_F(fop, s @ a @ s_inv)
        worst.update(abs(fs - fa) / (1.0 + abs(fa)),
                     lambda: _payload(function=fop.name, A=a, S=s, F_A=fa, F_SAS_inv=fs, jordan=jordan))

    _per_sample(fop, cfg, "similarity", worst, body)
    return _report("similarity", fop.name, cfg.samples, worst, SIMILARITY_TOL)


def check_monotone(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """Eigenvalues of F'(A) are positive, and dPhi/dh is positive on rank-one directions."""
    worst = _Worst()
    n = cfg.dim

    def body(rng, index):
        a, es = sample_diagonalisable(rng, cfg, fop.spec)
        ev = F_prime_eigenvalues(fop, es)
        # eigenvalues actually carried by F'(A) on the eigenvectors of A
        carried = np.diag(es.to_eigenbasis(F_prime(fop, a)))
        scale = float(np.max(np.abs(ev))) or 1.0
        v = max(max(_positivity(x, scale) for x in ev), max(_positivity(x, scale) for x in carried))
        worst.update(v, lambda: _payload(function=fop.name, A=a, eigenvalues=es.eigenvalues,
                                         F_prime_eigenvalues=ev))
        g = random_spd(n, rng)
        kappa = sample_spectrum(rng, cfg, fop.spec)
        a_g, _ = random_g_selfadjoint(g, kappa, rng)
        skew = rng.standard_normal((n, n))
        h = BilinearForm(g @ a_g + (skew - skew.T))
        d = dPhi_dh(fop, InnerProduct(g), h)
        xi = rng.standard_normal(n)
        pairing = d.pair(BilinearForm(np.outer(xi, xi)))
        scale = float(np.linalg.norm(d.entries)) * float(xi @ xi)
        worst.update(_positivity(pairing, scale),
                     lambda: _payload(function=fop.name, g=g, h=h.entries, xi=xi, pairing=pairing))

    _per_sample(fop, cfg, "monotone", worst, body)
    return _report("monotone", fop.name, cfg.samples, worst, 0.0)


def check_homogeneous(fop: OperatorFunction, p: float | None, cfg: SampleConfig) -> PropertyReport:
    """F(lambda A) = lambda^p F(A) for lambda in {0.5, 2, 10}."""
    if p is None:
        p = fop.spec.degree
    if p is None:
        raise ValueError(f"{fop.name} has no known degree of homogeneity")
    worst = _Worst()

    def body(rng, index):
        a, _ = sample_diagonalisable(rng, cfg, fop.spec)
        fa = eval_F(fop, a)
        for lam in HOMOGENEITY_FACTORS:
            fl = eval_F(fop, lam * a)
            expected = lam ** p * fa
            worst.update(_rel(fl, expected),
                         lambda: _payload(function=fop.name, A=a, factor=lam, degree=p,
                                          F_scaled=fl, expected=expected))

    _per_sample(fop, cfg, "homog", worst, body)
    return _report("homog", fop.name, cfg.samples, worst, HOMOGENEITY_TOL)


def check_concave_symmetric_dirs(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """d2F(A)(eta, eta) <= 0 for eta symmetric in an eigenbasis of A."""
    worst = _Worst()

    def body(rng, index):
        a, es = sample_diagonalisable(rng, cfg, fop.spec)
        eta = es.from_eigenbasis(_sym(rng, cfg.dim))
        value = d2F(fop, a, eta, eta)
        worst.update(max(0.0, value) / float(np.sum(eta * eta)),
                     lambda: _payload(function=fop.name, A=a, eta=eta, d2F=value))

    _per_sample(fop, cfg, "concave", worst, body)
    return _report("concave", fop.name, cfg.samples, worst, CONCAVITY_TOL)


def skew_witness(n: int) -> tuple[np.ndarray, np.ndarray]:
    """diag(1..n) with the rotation generator [[0,1],[-1,0]] in the leading block."""
    if n < 2:
        raise ValueError("a skew witness needs n >= 2")
    eta = np.zeros((n, n))
    eta[0, 1], eta[1, 0] = 1.0, -1.0
    return np.diag(np.arange(1.0, n + 1.0)), eta


def demo_nonconvexity_skew(cfg: SampleConfig) -> PropertyReport:
    """F = tr(A^2) is convex in the eigenvalues yet d2F(A)(eta, eta) = 2 tr(eta^2) < 0 for skew eta.

    Every sample checks d2F against 2 tr(eta^2) for an eigenbasis-skew and an
    eigenbasis-symmetric eta; the skew ones must be negative and the symmetric
    ones non-negative. The fixed witness is always evaluated and reported.
    """
    fop = OperatorFunction(builtin("p2", cfg.dim))
    worst = _Worst()
    found = {"negative": False}

    a0, eta0 = skew_witness(cfg.dim)
    w = d2F(fop, a0, eta0, eta0)
    two_tr = 2.0 * float(np.trace(eta0 @ eta0))
    worst.update(abs(w - (-4.0)), lambda: _payload(function="p2", A=a0, eta=eta0, d2F=w))
    found["negative"] = w < 0
    witness = _payload(function="p2", A=a0, eta=eta0, d2F=w, two_tr_eta_sq=two_tr)

    def body(rng, index):
        a, es = sample_diagonalisable(rng, cfg, fop.spec)
        k = _unit(rng, cfg.dim)
        eta = es.from_eigenbasis(k - k.T)
        sym = es.from_eigenbasis(_sym(rng, cfg.dim))
        for e, sign in ((eta, -1.0), (sym, 1.0)):
            value = d2F(fop, a, e, e)
            expected = 2.0 * float(np.trace(e @ e))
            scale = 2.0 * float(np.sum(e * e))
            v = abs(value - expected) / scale
            if sign < 0 and value < 0:
                found["negative"] = True
            if sign > 0 and value < -EXAMPLE_TOL * scale:
                v = max(v, -value / scale)
            worst.update(v, lambda: _payload(function="p2", A=a, eta=e, d2F=value, two_tr_eta_sq=expected))

    _per_sample(fop, cfg, "nonconvex-skew", worst, body)
    if not found["negative"]:
        worst.update(math.inf, lambda: witness)
    return _report("nonconvex-skew", "p2", cfg.samples, worst, EXAMPLE_TOL, witness)


def ad_g(g: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """The g-adjoint g^{-1} eta^T g."""
    return np.linalg.solve(g, eta.T @ g)


def _selfadjoint_sample(rng, cfg, fop):
    g = random_spd(cfg.dim, rng)
    kappa = sample_spectrum(rng, cfg, fop.spec, DomainCone.gamma_plus())
    a, es = random_g_selfadjoint(g, kappa, rng)
    a_inv = (es.basis / es.eigenvalues) @ es.basis_inverse
    return g, a, es, a_inv


def _inequality_violation(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    if lhs >= rhs:
        return 0.0
    return (rhs - lhs) / scale


def check_invconc_i(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """dF(A)(ad_g(eta) A^{-1} eta) >= (dF(A) eta)^2 / F(A) for arbitrary eta.

    The first sample also checks the equality case eta = A.
    """
    worst = _Worst()

    def body(rng, index):
        g, a, es, a_inv = _selfadjoint_sample(rng, cfg, fop)
        fa = eval_F(fop, a)
        fp = F_prime(fop, a)
        etas = [rng.standard_normal((cfg.dim, cfg.dim))]
        if index == 0:
            etas.append(a)
        for eta in etas:
            lhs = float(np.sum(fp * (ad_g(g, eta) @ a_inv @ eta).T))
            rhs = float(np.sum(fp * eta.T)) ** 2 / fa
            v = _inequality_violation(lhs, rhs)
            if eta is a:
                v = max(v, _rel(lhs, rhs))
            worst.update(v, lambda: _payload(function=fop.name, g=g, A=a, eta=eta, lhs=lhs, rhs=rhs))

    _per_sample(fop, cfg, "invconc1", worst, body)
    return _report("invconc1", fop.name, cfg.samples, worst, INEQUALITY_SLACK)


def check_invconc_ii(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """d2F(A)(eta,eta) + 2 dF(A)(eta A^{-1} eta) >= 2 (dF(A) eta)^2 / F(A) for g-selfadjoint eta."""
    worst = _Worst()

    def body(rng, index):
        g, a, es, a_inv = _selfadjoint_sample(rng, cfg, fop)
        fa = eval_F(fop, a)
        fp = F_prime(fop, a)
        etas = [np.linalg.solve(g, _sym(rng, cfg.dim))]
        if index == 0:
            etas.append(a)
        for eta in etas:
            lhs = d2F(fop, a, eta, eta) + 2.0 * float(np.sum(fp * (eta @ a_inv @ eta).T))
            rhs = 2.0 * float(np.sum(fp * eta.T)) ** 2 / fa
            v = _inequality_violation(lhs, rhs)
            if eta is a:
                v = max(v, _rel(lhs, rhs))
            worst.update(v, lambda: _payload(function=fop.name, g=g, A=a, eta=eta, lhs=lhs, rhs=rhs))

    _per_sample(fop, cfg, "invconc2", worst, body)
    return _report("invconc2", fop.name, cfg.samples, worst, INEQUALITY_SLACK)


def regularity_function() -> OperatorFunction:
    """F(A) = |tr(A^2)|^(3/2) on 2x2 matrices."""
    spec = SymmetricFunctionSpec("psi:(pow (abs P2) 1.5)", Power(Abs(Var(2)), 1.5), 2)
    return OperatorFunction(spec)


def second_difference(phi: Callable[[float], float], h: float) -> float:
    return (phi(h) + phi(-h) - 2.0 * phi(0.0)) / h ** 2


def demo_regularity_loss(steps: Sequence[float] = REGULARITY_STEPS) -> PropertyReport:
    """Second difference quotients of |tr(A^2)|^(3/2) along two lines through 0.

    Along x -> [[0, x], [1, 0]] the quotient grows like h^(-1/2), halving
    when h is quadrupled; along the symmetric line x -> [[0, x], [x, 0]] it
    decays linearly. F itself is C^1 at 0 with vanishing derivative.
    """
    steps = [float(h) for h in steps]
    if not steps or any(h <= 0 for h in steps) or any(b >= a for a, b in zip(steps, steps[1:])):
        raise ValueError("steps must be positive and strictly decreasing")
    fop = regularity_function()

    def line(x):
        return eval_F(fop, np.array([[0.0, x], [1.0, 0.0]]))

    def sym_line(x):
        return eval_F(fop, np.array([[0.0, x], [x, 0.0]]))

    rows = []
    worst = 0.0
    for h in steps:
        d_h, d_4h = second_difference(line, h), second_difference(line, 4 * h)
        s_h, s_4h = second_difference(sym_line, h), second_difference(sym_line, 4 * h)
        ratio, sym_ratio = d_h / d_4h, s_4h / s_h
        worst = max(worst, abs(ratio / 2.0 - 1.0), abs(sym_ratio / 4.0 - 1.0))
        rows.append({"h": h, "D": d_h, "D_closed_form": 2 ** 2.5 * h ** -0.5, "D(h)/D(4h)": ratio,
                     "D_sym": s_h, "D_sym_closed_form": 2 ** 2.5 * h, "D_sym(4h)/D_sym(h)": sym_ratio})
    zero = np.zeros((2, 2))
    value0 = eval_F(fop, zero)
    slope0 = float(np.abs(F_prime(fop, zero)).max())
    worst = max(worst, abs(value0), slope0)
    payload = {"function": fop.name, "phi(0)": value0, "max|F'(0)|": slope0, "steps": rows}
    return PropertyReport("regularity", fop.name, bool(worst <= REGULARITY_TOL), len(steps), worst,
                          REGULARITY_TOL, payload)


def _eigen_scale(spec: SymmetricFunctionSpec, es: EigenSystem, eta: np.ndarray) -> float:
    """Sum of the magnitudes of all terms in the eigenbasis second-derivative formula."""
    e = es.to_eigenbasis(eta)
    kappa = es.eigenvalues
    d = np.diag(e)
    total = float(np.abs(d) @ np.abs(hess_f(spec, kappa)) @ np.abs(d))
    for i in range(len(kappa)):
        for j in range(len(kappa)):
            if i != j:
                total += abs(divided_difference(spec, kappa, i, j) * e[i, j] * e[j, i])
    return total


def coalescing_spectrum(rng, cfg, spec, gap: float = COALESCED_GAP) -> np.ndarray:
    """A spectrum whose first two eigenvalues differ by ``gap``; the rest respect gap_floor."""
    for _ in range(1000):
        kappa = sample_spectrum(rng, cfg, spec)
        kappa[1] = kappa[0] + gap
        if in_domain(cfg.cone, kappa) and in_domain(spec.cone, kappa):
            return kappa
    raise ValueError("no admissible coalescing spectrum")


def check_eigen_consistency(fop: OperatorFunction, cfg: SampleConfig) -> PropertyReport:
    """Eigenbasis formulas against the trace formulas on diagonalisable samples.

    Each sample checks d2F_eigen = d2F at separated eigenvalues (tolerance
    1e-8) and at a pair 1e-7 apart (1e-4), the eigenvalues of F'(A) against
    the gradient of f (1e-8), and [F'(A), A] = 0 (1e-10 ||F'|| ||A||).
    ``worst_violation`` is expressed in units of the respective tolerance.
    """
    worst = _Worst()
    spec = fop.spec
    if cfg.dim < 2:
        raise ValueError("eigen consistency needs dim >= 2")

    def body(rng, index):
        a, es = sample_diagonalisable(rng, cfg, spec, gap_floor=max(cfg.gap_floor, 1e-3))
        eta = _unit(rng, cfg.dim)
        trace_form = d2F(fop, a, eta, eta)
        eigen_form = d2F_eigen(fop, es, eta)
        v = _rel(trace_form, eigen_form, _eigen_scale(spec, es, eta)) / EIGEN_TOL
        worst.update(v, lambda: _payload(function=fop.name, case="separated", A=a, eta=eta,
                                         d2F=trace_form, d2F_eigen=eigen_form))

        fp = F_prime(fop, a)
        ev = F_prime_eigenvalues(fop, es)
        carried = es.to_eigenbasis(fp)
        scale = float(np.max(np.abs(ev))) or 1.0
        v = float(np.max(np.abs(carried - np.diag(ev)))) / scale / EIGEN_TOL
        worst.update(v, lambda: _payload(function=fop.name, case="F_prime eigenvalues", A=a,
                                         F_prime_eigenvalues=ev, carried=np.diag(carried)))
        comm = float(np.linalg.norm(fp @ a - a @ fp))
        bound = float(np.linalg.norm(fp) * np.linalg.norm(a)) or 1.0
        v = comm / bound / COMMUTATOR_TOL
        worst.update(v, lambda: _payload(function=fop.name, case="commutator", A=a, commutator=comm))

        kappa = coalescing_spectrum(rng, cfg, spec)
        a, es = random_diagonalisable(cfg.dim, kappa, rng)
        trace_form = d2F(fop, a, eta, eta)
        eigen_form = d2F_eigen(fop, es, eta)
        v = _rel(trace_form, eigen_form, _eigen_scale(spec, es, eta)) / COALESCED_TOL
        worst.update(v, lambda: _payload(function=fop.name, case="coalesced", A=a, eta=eta,
                                         d2F=trace_form, d2F_eigen=eigen_form))

    _per_sample(fop, cfg, "eigen-consistency", worst, body)
    return _report("eigen-consistency", fop.name, cfg.samples, worst, 1.0)


# suite name -> (runner, applicability test); global suites ignore the function
SUITES: dict[str, tuple[Callable, Callable[[SymmetricFunctionSpec], bool]]] = {
    "grad": (check_gradient_fd, lambda s: True),
    "hess": (check_hessian_fd, lambda s: True),
    "similarity": (check_similarity_invariance, lambda s: True),
    "monotone": (check_monotone, lambda s: "monotone" in s.traits),
    "homog": (lambda f, c: check_homogeneous(f, None, c), lambda s: s.degree is not None),
    "concave": (check_concave_symmetric_dirs, lambda s: "concave" in s.traits),
    "nonconvex-skew": (lambda f, c: demo_nonconvexity_skew(c), None),
    "invconc1": (check_invconc_i,
                 lambda s: {"monotone", "positive"} <= s.traits and s.degree == 1.0),
    "invconc2": (check_invconc_ii,
                 lambda s: {"monotone", "positive", "inverse_concave"} <= s.traits and s.degree == 1.0),
    "regularity": (lambda f, c: demo_regularity_loss(), None),
    "eigen-consistency": (check_eigen_consistency, lambda s: True),
}


def run_suites(fops: Sequence[OperatorFunction], suites: Sequence[str], cfg: SampleConfig,
               only_applicable: bool = False) -> list[PropertyReport]:
    """Run ``suites`` over ``fops``; function-independent suites run once.

    With ``only_applicable`` a suite is skipped for functions that lack its
    hypothesis (for instance concavity for p2).
    """
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {', '.join(unknown)}")
    reports = []
    for name in suites:
        runner, applies = SUITES[name]
        if applies is None:
            reports.append(runner(None, cfg))
            continue
        for fop in fops:
            if only_applicable and not applies(fop.spec):
                continue
            reports.append(runner(fop, cfg))
    return reports
