"""Second difference quotients of |tr(A^2)|^(3/2) near A = 0 along a non-symmetric and a symmetric line."""

import argparse

import numpy as np

from isotropic.opfn import eval_F
from isotropic.verify import regularity_function, second_difference


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=8, help="number of step sizes, h = 10^-1 .. 10^-steps")
    args = parser.parse_args()
    fop = regularity_function()

    def line(x):
        return eval_F(fop, np.array([[0.0, x], [1.0, 0.0]]))

    def sym_line(x):
        return eval_F(fop, np.array([[0.0, x], [x, 0.0]]))

    print(f"{'h':>8} {'D(h)':>14} {'D(h)/D(4h)':>11} {'D_sym(h)':>14} {'D_sym(4h)/D_sym(h)':>19}")
    for e in range(1, args.steps + 1):
        h = 10.0 ** -e
        d, d4 = second_difference(line, h), second_difference(line, 4 * h)
        s, s4 = second_difference(sym_line, h), second_difference(sym_line, 4 * h)
        print(f"{h:8.0e} {d:14.6e} {d / d4:11.6f} {s:14.6e} {s4 / s:19.6f}")


if __name__ == "__main__":
    main()
