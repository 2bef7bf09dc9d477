"""Operator functions F = psi(tr A, ..., tr A^m) of symmetric eigenvalue functions,
their closed-form derivatives on arbitrary square matrices, and sampled
property checks."""

from .errors import (
    DimensionMismatch,
    DomainViolation,
    IsotropicError,
    NoConvergence,
    NonDifferentiablePoint,
    NotSelfAdjoint,
    NotSPD,
    NotSymmetric,
    SingularMatrix,
    ZeroDenominator,
)
from .matrix import EigenSystem, g_selfadjoint_eigen, random_diagonalisable, symmetric_eigen
from .opfn import (
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
)
from .symfn import (
    DomainCone,
    SymmetricFunctionSpec,
    builtin,
    divided_difference,
    elementary,
    grad_f,
    hess_f,
    in_domain,
    integral_divided_difference,
    inverse_transform,
    newton_elementary,
    parse_function,
    power_sum,
)

__version__ = "0.1.0"
