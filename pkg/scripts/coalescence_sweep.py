"""Agreement of the eigenbasis and trace forms of d2F as two eigenvalues merge.

Prints the relative gap between the two forms for shrinking eigenvalue gaps,
showing where the divided difference switches to its limiting expression.
"""

import argparse

import numpy as np

from isotropic.matrix import random_diagonalisable
from isotropic.opfn import OperatorFunction, d2F, d2F_eigen
from isotropic.symfn import COALESCENCE_TOL


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fn", default="q2")
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    fop = OperatorFunction.parse(args.fn, args.dim)
    rng = np.random.default_rng(args.seed)
    base = rng.uniform(0.5, 3.0, args.dim)
    eta = rng.standard_normal((args.dim, args.dim))
    print(f"{args.fn}, coalescence threshold {COALESCENCE_TOL:g} (relative)")
    print(f"{'gap':>8} {'d2F':>22} {'d2F_eigen':>22} {'rel diff':>10}")
    for e in range(1, 13):
        gap = 10.0 ** -e
        kappa = base.copy()
        kappa[1] = kappa[0] + gap
        a, es = random_diagonalisable(args.dim, kappa, rng)
        t, g = d2F(fop, a, eta, eta), d2F_eigen(fop, es, eta)
        print(f"{gap:8.0e} {t:22.15e} {g:22.15e} {abs(t - g) / max(abs(t), abs(g)):10.2e}")


if __name__ == "__main__":
    main()
